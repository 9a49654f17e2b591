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

#include <chrono>

#include "fixtures.hpp"
#include "rewriter/decoder.hpp"
#include "rewriter/error.hpp"
#include "toy_instance.hpp"

using namespace rewriter;
using rewriter::testing::candidate;
using rewriter::testing::make_story;
using rewriter::testing::Tok;

namespace {

FilterLists data_filters() {
  FilterLists f;
  f.stop_words = load_term_list(REWRITER_TEST_DATA "/stopwords.txt");
  f.math_words = load_term_list(REWRITER_TEST_DATA "/mathwords.txt");
  return f;
}

UnitizedStory walk_story() {
  auto stories = read_conllu(std::filesystem::path(REWRITER_TEST_DATA "/walk_story.conllu"));
  return UnitizedStory(mark_content(std::move(stories.at(0)), data_filters()));
}

DecoderConfig exhaustive_config(const CandidateLists& lists, std::size_t n_best) {
  DecoderConfig cfg;
  std::size_t width = 1;
  for (const auto& l : lists) width *= l.size() + 1;
  cfg.beam_width = width;
  cfg.n_best = std::min(n_best, width);
  return cfg;
}

}  // namespace

TEST_CASE("exhaustive beam matches the brute-force ranking") {
  for (std::uint32_t seed = 100; seed < 130; ++seed) {
    testing::ToyOptions opt;
    opt.allow_delete = seed % 4 == 0;
    const auto inst = testing::make_toy_instance(seed, opt);
    const auto oracle =
        testing::brute_force(*inst->story, inst->lists, inst->resources, inst->scoring);
    const DecoderConfig cfg = exhaustive_config(inst->lists, 5);
    const auto got = decode(*inst->story, inst->lists, inst->resources, inst->scoring, cfg);
    REQUIRE(got.size() == std::min<std::size_t>(5, oracle.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].choices == oracle[i].choices);
      CHECK(got[i].breakdown.total == oracle[i].breakdown.total);
      CHECK(got[i].text == oracle[i].text);
    }
  }
}

TEST_CASE("greedy search misses a combination the wide beam finds") {
  // Unit A: x (0.5) or y (0.4); unit B: z (0.3). The LM rewards only the
  // original arc and the (y, z) arc, so picking x first is a trap.
  const UnitizedStory story(make_story({{{"a0", "NOUN", 0, "root"}, {"b0", "NOUN", 1, "l"}}}));
  const RewriteCandidate x = candidate({"x"}, LexClass::kNoun, 0.5);
  const RewriteCandidate y = candidate({"y"}, LexClass::kNoun, 0.4);
  const RewriteCandidate z = candidate({"z"}, LexClass::kNoun, 0.3);
  const CandidateLists lists = {{Outcome::replace(x), Outcome::replace(y), Outcome::keep()},
                                {Outcome::replace(z), Outcome::keep()}};
  ResourceSet r;
  r.deplm.add("a0", "l", "b0", 10);
  r.deplm.add("y", "l", "z", 10);
  ScoringConfig scoring;
  scoring.weights = {0.0, 1.0, 1.0};

  const auto oracle = testing::brute_force(story, lists, r, scoring);
  REQUIRE(oracle.front().text == "y z");

  DecoderConfig greedy;
  greedy.beam_width = 1;
  greedy.n_best = 1;
  greedy.anytime_widening = false;
  const auto g = decode(story, lists, r, scoring, greedy);
  CHECK(g.front().text != oracle.front().text);
  CHECK(g.front().breakdown.total < oracle.front().breakdown.total);

  DecoderConfig wide = greedy;
  wide.beam_width = 4;
  CHECK(decode(story, lists, r, scoring, wide).front().text == "y z");
}

TEST_CASE("pure thematicity picks the most salient candidate per unit") {
  const UnitizedStory story(make_story({{{"dog", "NOUN", 2, "nsubj"}, {"ran", "VERB", 0, "root"}}}));
  ThemeProfile p;
  p.candidates[LexClass::kNoun] = {candidate({"ship"}, LexClass::kNoun, 0.9),
                                   candidate({"droid"}, LexClass::kNoun, 0.6)};
  p.candidates[LexClass::kVerb] = {candidate({"flew"}, LexClass::kVerb, 0.7, "fly"),
                                   candidate({"blasted"}, LexClass::kVerb, 0.2, "blast")};
  ScoringConfig scoring;
  scoring.weights = {0, 0, 1};
  const auto res = decode(story, p, ResourceSet{}, scoring, DecoderConfig{});
  CHECK(res.front().text == "ship flew");
  CHECK(res.front().breakdown.total == doctest::Approx(1.6));
}

TEST_CASE("candidate lists: class matching, Keep and Delete") {
  const UnitizedStory story = walk_story();
  ThemeProfile p;
  p.candidates[LexClass::kNoun] = {candidate({"ship"}, LexClass::kNoun, 0.9)};
  p.candidates[LexClass::kVerb] = {candidate({"flew"}, LexClass::kVerb, 0.7, "fly")};
  p.candidates[LexClass::kPropn] = {candidate({"Uncle", "Owen"}, LexClass::kPropn, 0.8)};
  const ScoringConfig scoring;
  const auto lists = candidate_lists(story, p, DecoderConfig{}, scoring);
  REQUIRE(lists.size() == story.unit_count());
  for (std::size_t u = 0; u < lists.size(); ++u) {
    // k_max = 1 per class, plus Keep.
    CHECK(lists[u].size() == 2);
    CHECK(lists[u].back().kind == OutcomeKind::kKeep);
    const LexClass cls = story.units()[u].lex_class;
    for (const Outcome& o : lists[u]) {
      if (o.kind == OutcomeKind::kReplace) CHECK(o.candidate->lex_class == cls);
    }
  }
  ScoringConfig with_delete;
  with_delete.delete_penalty = -1.0;
  const auto dl = candidate_lists(story, p, DecoderConfig{}, with_delete);
  CHECK(dl[0].size() == 3);
  CHECK(dl[0].back().kind == OutcomeKind::kDelete);
}

TEST_CASE("empty candidate list with Keep disabled names the position") {
  const UnitizedStory story(make_story({{{"dog", "NOUN", 0, "root"}}}));
  DecoderConfig cfg;
  cfg.allow_keep = false;
  try {
    candidate_lists(story, ThemeProfile{}, cfg, ScoringConfig{});
    FAIL("expected EmptyCandidatesError");
  } catch (const EmptyCandidatesError& e) {
    CHECK(std::string(e.what()).find("'dog'") != std::string::npos);
  }
}

TEST_CASE("decoder config validation") {
  const auto inst = testing::make_toy_instance(1);
  DecoderConfig cfg;
  cfg.beam_width = 2;
  cfg.n_best = 3;
  CHECK_THROWS_AS(decode(*inst->story, inst->lists, inst->resources, inst->scoring, cfg), Error);
  cfg.beam_width = 0;
  cfg.n_best = 0;
  CHECK_THROWS_AS(decode(*inst->story, inst->lists, inst->resources, inst->scoring, cfg), Error);
}

TEST_CASE("best total never drops as the beam widens") {
  for (std::uint32_t seed = 200; seed < 210; ++seed) {
    testing::ToyOptions opt;
    opt.max_units = 4;
    const auto inst = testing::make_toy_instance(seed, opt);
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t b : {1, 2, 4, 8, 16, 32, 64}) {
      DecoderConfig cfg;
      cfg.beam_width = b;
      cfg.n_best = 1;
      const double best =
          decode(*inst->story, inst->lists, inst->resources, inst->scoring, cfg).front().breakdown.total;
      CHECK(best >= previous);
      previous = best;
    }
  }
}

TEST_CASE("every search order returns full, correctly scored rewrites") {
  for (std::uint32_t seed = 300; seed < 310; ++seed) {
    const auto inst = testing::make_toy_instance(seed);
    for (SearchOrder order : {SearchOrder::kMultiPath, SearchOrder::kLeftToRight, SearchOrder::kHeadFirst}) {
      DecoderConfig cfg;
      cfg.order = order;
      cfg.beam_width = 8;
      const auto res = decode(*inst->story, inst->lists, inst->resources, inst->scoring, cfg);
      REQUIRE_FALSE(res.empty());
      for (std::size_t i = 0; i < res.size(); ++i) {
        CHECK(res[i].assignment.assigned_count() == inst->story->unit_count());
        const auto check =
            score_total(res[i].assignment, *inst->story, inst->resources, inst->scoring);
        CHECK(res[i].breakdown.total == check.total);
        if (i > 0) CHECK(res[i - 1].breakdown.total >= res[i].breakdown.total);
      }
    }
    const auto order = unit_order(*inst->story, SearchOrder::kHeadFirst);
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t u = 0; u < sorted.size(); ++u) CHECK(sorted[u] == u);
  }
}

TEST_CASE("decoding is deterministic and independent of the thread count") {
  for (std::uint32_t seed = 400; seed < 405; ++seed) {
    const auto inst = testing::make_toy_instance(seed);
    DecoderConfig one;
    one.beam_width = 16;
    DecoderConfig many = one;
    many.threads = 4;
    const auto a = decode(*inst->story, inst->lists, inst->resources, inst->scoring, one);
    const auto b = decode(*inst->story, inst->lists, inst->resources, inst->scoring, one);
    const auto c = decode(*inst->story, inst->lists, inst->resources, inst->scoring, many);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].text == b[i].text);
      CHECK(a[i].choices == c[i].choices);
      CHECK(a[i].breakdown.total == c[i].breakdown.total);
    }
  }
}

TEST_CASE("numbers and function words survive every rewrite") {
  for (std::uint32_t seed = 500; seed < 520; ++seed) {
    testing::ToyOptions opt;
    opt.allow_delete = true;
    const auto inst = testing::make_toy_instance(seed, opt);
    DecoderConfig cfg;
    cfg.n_best = 5;
    for (const auto& r : decode(*inst->story, inst->lists, inst->resources, inst->scoring, cfg)) {
      std::vector<std::string> kept;
      std::size_t next = 0;
      for (const auto& tok : r.tokens) {
        if (next < inst->skeleton.size() && tok == inst->skeleton[next]) ++next;
      }
      CHECK(next == inst->skeleton.size());
    }
  }
}

TEST_CASE("realization") {
  const UnitizedStory story = walk_story();
  const std::string original =
      "Jim walked 0.2 of a mile from school to David's house and 0.7 of a mile "
      "from David's house to his own house. How many miles did Jim walk in all?";
  CHECK(realize(story, Assignment::identity(story.unit_count())) == original);
  CHECK(realize(story, Assignment(story.unit_count())) == original);

  const RewriteCandidate owen = candidate({"Uncle", "Owen"}, LexClass::kPropn, 0.8);
  Assignment a = Assignment::identity(story.unit_count());
  const auto jim = story.unit_of({0, 0});
  REQUIRE(jim);
  a.set(*jim, Outcome::replace(owen));
  CHECK(realize(story, a).rfind("Uncle Owen walked 0.2 of a mile", 0) == 0);

  SUBCASE("a deleted word leaves single spaces") {
    const UnitizedStory s(make_story({{{"the", "DET", 3},
                                       {"big", "ADJ", 3},
                                       {"dog", "NOUN", 0, "root"},
                                       {"ran", "VERB", 3}}}));
    Assignment d = Assignment::identity(s.unit_count());
    d.set(*s.unit_of({0, 1}), Outcome::remove());
    CHECK(realize(s, d) == "the dog ran");
  }
  SUBCASE("a changed sentence-initial word is capitalized") {
    const UnitizedStory s(make_story({{{"Dogs", "NOUN", 2}, {"run", "VERB", 0, "root"}}}));
    const RewriteCandidate droids = candidate({"droids"}, LexClass::kNoun, 0.5);
    Assignment r = Assignment::identity(s.unit_count());
    r.set(0, Outcome::replace(droids));
    CHECK(realize(s, r) == "Droids run");
    CHECK(realize_tokens(s, r) == std::vector<std::string>{"Droids", "run"});
  }
}

TEST_CASE("the walking story keeps its numbers and question") {
  const UnitizedStory story = walk_story();
  const auto theme = read_conllu(std::filesystem::path(REWRITER_TEST_DATA "/starwars_theme.conllu"));
  const auto bg = read_conllu(std::filesystem::path(REWRITER_TEST_DATA "/background.conllu"));
  const ThemeProfile p = build_profile("sw", theme, bg, data_filters());
  ResourceSet r;
  r.embeddings = load_embeddings(std::filesystem::path(REWRITER_TEST_DATA "/toy_embeddings.txt"));
  r.deplm = train_deplm(std::filesystem::path(REWRITER_TEST_DATA "/toy_deplm.tsv"));
  r.taxonomy = load_taxonomy(REWRITER_TEST_DATA "/toy_taxonomy_edges.tsv",
                             REWRITER_TEST_DATA "/toy_taxonomy_lemmas.tsv");
  const auto res = decode(story, p, r, ScoringConfig{}, DecoderConfig{});
  REQUIRE_FALSE(res.empty());
  for (const auto& rw : res) {
    CHECK(rw.text.find("0.2") != std::string::npos);
    CHECK(rw.text.find("0.7") != std::string::npos);
    CHECK(rw.text.find("How many miles") != std::string::npos);
  }
  // Something thematic was introduced.
  CHECK(res.front().breakdown.th > 0.0);
}
