/* Copyright 2026 The Rewriter Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "rewriter/error.hpp"
#include "rewriter/eval.hpp"

using namespace rewriter;

namespace {

TokenList toks(const std::string& s) {
  TokenList out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// Direct formula for a given alignment size and chunk count.
double formula(double m, double chunks, double hyp_len, double ref_len) {
  if (m == 0) return 0.0;
  const double p = m / hyp_len;
  const double r = m / ref_len;
  const double fmean = 10 * p * r / (r + 9 * p);
  return fmean * (1 - 0.5 * std::pow(chunks / m, 3));
}

}  // namespace

TEST_CASE("identical five-token sentences") {
  const TokenList s = toks("the droid saw 3 ships");
  CHECK(std::abs(meteor_lite(s, {s}) - (1.0 - 0.5 / 125.0)) < 1e-12);
  const auto a = align(s, s);
  CHECK(a.matches.size() == 5);
  CHECK(a.chunks == 1);
}

TEST_CASE("reversed two-token reference scores 0.5") {
  CHECK(std::abs(meteor_lite(toks("b a"), {toks("a b")}) - 0.5) < 1e-12);
  CHECK(align(toks("b a"), toks("a b")).chunks == 2);
}

TEST_CASE("no overlap scores 0") {
  CHECK(meteor_lite(toks("x y z"), {toks("a b c")}) == 0.0);
  CHECK(meteor_lite({}, {toks("a b c")}) == 0.0);
  CHECK_THROWS_AS(meteor_lite(toks("a"), {}), ContractViolation);
}

TEST_CASE("stem and synonym stages") {
  const auto a = align(toks("Ships walked"), toks("ship walking"));
  REQUIRE(a.matches.size() == 2);
  CHECK(a.matches[0].stage == MatchStage::kStem);
  CHECK(a.matches[1].stage == MatchStage::kStem);

  const Taxonomy tax = load_taxonomy(REWRITER_TEST_DATA "/toy_taxonomy_edges.tsv",
                                     REWRITER_TEST_DATA "/toy_taxonomy_lemmas.tsv");
  const SynonymIndex syn(&tax);
  // luke skywalker, jim and david share the "person" concept.
  CHECK(syn.synonymous("jim", "david"));
  CHECK_FALSE(syn.synonymous("jim", "ship"));
  const auto b = align(toks("jim walked"), toks("david walked"), syn);
  REQUIRE(b.matches.size() == 2);
  CHECK(b.matches[0].stage == MatchStage::kSynonym);
  CHECK(b.matches[1].stage == MatchStage::kExact);
  CHECK(align(toks("jim walked"), toks("david walked")).matches.size() == 1);
}

TEST_CASE("exact matches take precedence over stems") {
  const auto a = align(toks("ship ships"), toks("ships ship"));
  REQUIRE(a.matches.size() == 2);
  CHECK(a.matches[0].ref == 1);
  CHECK(a.matches[1].ref == 0);
  CHECK(a.matches[0].stage == MatchStage::kExact);
}

TEST_CASE("meteor-lite properties over fuzzed inputs") {
  std::mt19937 rng(11);
  const std::vector<std::string> vocab = {"a", "b", "c", "ship", "ships", "droid", "fly", "flew", "the"};
  auto sentence = [&]() {
    TokenList t(1 + rng() % 7);
    for (auto& w : t) w = vocab[rng() % vocab.size()];
    return t;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const TokenList hyp = sentence();
    std::vector<TokenList> refs = {sentence(), sentence()};
    const double before = meteor_lite(hyp, refs);
    CHECK(before >= 0.0);
    CHECK(before <= 1.0);
    refs.push_back(sentence());
    CHECK(meteor_lite(hyp, refs) >= before);
    std::vector<TokenList> reversed(refs.rbegin(), refs.rend());
    CHECK(meteor_lite(hyp, reversed) == meteor_lite(hyp, refs));

    const auto a = align(hyp, refs[0]);
    CHECK(a.matches.size() <= std::min(hyp.size(), refs[0].size()));
    CHECK(a.chunks <= a.matches.size());
    std::set<std::size_t> used;
    for (const auto& m : a.matches) CHECK(used.insert(m.ref).second);
    CHECK(meteor_lite_single(hyp, refs[0]) ==
          doctest::Approx(formula(static_cast<double>(a.matches.size()),
                                  static_cast<double>(a.chunks),
                                  static_cast<double>(hyp.size()),
                                  static_cast<double>(refs[0].size()))));
  }
}

TEST_CASE("corpus score is the mean over stories") {
  const TokenList s = toks("one two three four five");
  CHECK(corpus_score({s, s}, {{s}, {s}}) == doctest::Approx(1.0 - 0.5 / 125.0));
  CHECK(corpus_score({toks("b a")}, {{toks("a b")}}) == doctest::Approx(0.5));
  CHECK(corpus_score({toks("b a"), s}, {{toks("a b")}, {toks("x")}}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(corpus_score({s}, {}), Error);
  CHECK_THROWS_AS(corpus_score({}, {}), Error);
}

TEST_CASE("grid parsing") {
  const auto axis = parse_axis("0:1:0.1");
  REQUIRE(axis.size() == 11);
  CHECK(axis[3] == 0.3);
  CHECK(axis[1] == 0.1);
  CHECK(axis.back() == 1.0);
  CHECK(parse_axis("0.5, 0.1,0.5") == std::vector<double>{0.1, 0.5});
  CHECK_THROWS_AS(parse_axis("1:0:0.1"), Error);
  CHECK_THROWS_AS(parse_axis("0:1"), Error);
  CHECK_THROWS_AS(parse_axis("x"), Error);

  const GridSpec g = default_grid();
  CHECK(g.size() == 1331);
  const Weights defaults;
  CHECK(std::count(g.alpha.begin(), g.alpha.end(), defaults.alpha) == 1);
  CHECK(std::count(g.beta.begin(), g.beta.end(), defaults.beta) == 1);
  CHECK(std::count(g.gamma.begin(), g.gamma.end(), defaults.gamma) == 1);
}

namespace {

struct TuneFixture {
  std::vector<Story> dev;
  ThemeProfile profile;
  ResourceSet resources;

  TuneFixture() {
    FilterLists f;
    f.stop_words = load_term_list(REWRITER_TEST_DATA "/stopwords.txt");
    f.math_words = load_term_list(REWRITER_TEST_DATA "/mathwords.txt");
    for (Story& s : read_conllu(std::filesystem::path(REWRITER_TEST_DATA "/tune_dev/dev.conllu"))) {
      dev.push_back(mark_content(std::move(s), f));
    }
    profile = build_profile(
        "sw", read_conllu(std::filesystem::path(REWRITER_TEST_DATA "/starwars_theme.conllu")),
        read_conllu(std::filesystem::path(REWRITER_TEST_DATA "/background.conllu")), f);
    resources.embeddings =
        load_embeddings(std::filesystem::path(REWRITER_TEST_DATA "/toy_embeddings.txt"));
    resources.deplm = train_deplm(std::filesystem::path(REWRITER_TEST_DATA "/toy_deplm.tsv"));
    resources.taxonomy = load_taxonomy(REWRITER_TEST_DATA "/toy_taxonomy_edges.tsv",
                                       REWRITER_TEST_DATA "/toy_taxonomy_lemmas.tsv");
  }
};

}  // namespace

TEST_CASE("tuning returns the argmax of a rigged dev set") {
  const TuneFixture fx;
  // References are exactly the pure-thematicity output.
  ScoringConfig pure;
  pure.weights = {0, 0, 1};
  std::vector<std::vector<TokenList>> refs;
  for (const Story& s : fx.dev) {
    const UnitizedStory u(s);
    refs.push_back({decode(u, fx.profile, fx.resources, pure, DecoderConfig{}).front().tokens});
  }
  const GridSpec grid{{0, 0.5, 1}, {0, 0.5, 1}, {0, 0.5, 1}};
  const TuneResult res = tune(fx.dev, refs, fx.profile, fx.resources, grid);
  REQUIRE(res.rows.size() == 27);
  double best = 0.0;
  for (const auto& row : res.rows) best = std::max(best, row.mean_score);
  CHECK(res.best_score == best);
  const TuneRow* first_max = nullptr;
  bool pure_in_argmax = false;
  for (const auto& row : res.rows) {
    if (row.mean_score != best) continue;
    if (!first_max) first_max = &row;
    if (row.weights == Weights{0, 0, 1}) pure_in_argmax = true;
  }
  CHECK(pure_in_argmax);
  // Ties resolve to the lexicographically smallest point.
  CHECK(res.best == first_max->weights);
  CHECK(res.best.gamma > 0.0);

  TuneOptions threaded;
  threaded.threads = 3;
  const TuneResult again = tune(fx.dev, refs, fx.profile, fx.resources, grid, threaded);
  std::ostringstream a, b;
  write_tune_tsv(a, res);
  write_tune_tsv(b, again);
  CHECK(a.str() == b.str());
}

TEST_CASE("a single-point grid returns that point") {
  const TuneFixture fx;
  std::vector<std::vector<TokenList>> refs = {{toks("Luke Skywalker walked 2 miles .")},
                                              {toks("The droid saw 3 ships .")}};
  const GridSpec grid{{0.1}, {0.1}, {1}};
  const TuneResult res = tune(fx.dev, refs, fx.profile, fx.resources, grid);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.best == Weights{0.1, 0.1, 1});
  std::ostringstream out;
  write_tune_tsv(out, res);
  const std::string tsv = out.str();
  CHECK(tsv.rfind("alpha\tbeta\tgamma\tscore\n0.1\t0.1\t1\t", 0) == 0);
  CHECK(tsv.find("\nbest\t0.1\t0.1\t1\t") != std::string::npos);
  CHECK_THROWS_AS(tune({}, {}, fx.profile, fx.resources, grid), Error);
  CHECK_THROWS_AS(tune(fx.dev, {}, fx.profile, fx.resources, grid), Error);
}
