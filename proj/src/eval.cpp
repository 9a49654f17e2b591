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

#include "rewriter/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "rewriter/error.hpp"
#include "rewriter/parallel.hpp"
#include "rewriter/stemmer.hpp"
#include "rewriter/text.hpp"

namespace rewriter {

bool SynonymIndex::synonymous(const std::string& a, const std::string& b) const {
  if (taxonomy_ == nullptr) return false;
  const auto sa = taxonomy_->synsets_any_class(a);
  if (sa.empty()) return false;
  const auto sb = taxonomy_->synsets_any_class(b);
  // Both lists are sorted.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.size() && j < sb.size()) {
    if (sa[i] == sb[j]) return true;
    sa[i] < sb[j] ? ++i : ++j;
  }
  return false;
}

MatchAlignment align(const TokenList& hyp, const TokenList& ref,
                     const SynonymIndex& synonyms) {
  std::vector<std::string> h(hyp.size());
  std::vector<std::string> r(ref.size());
  std::transform(hyp.begin(), hyp.end(), h.begin(), to_lower);
  std::transform(ref.begin(), ref.end(), r.begin(), to_lower);
  std::vector<std::string> hs(h.size());
  std::vector<std::string> rs(r.size());
  std::transform(h.begin(), h.end(), hs.begin(), porter_stem);
  std::transform(r.begin(), r.end(), rs.begin(), porter_stem);

  std::vector<std::optional<std::size_t>> hyp_to_ref(h.size());
  std::vector<bool> ref_used(r.size(), false);
  std::vector<MatchStage> stage_of(h.size(), MatchStage::kExact);

  const auto run_stage = [&](MatchStage stage, auto&& matches) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (hyp_to_ref[i]) continue;
      std::optional<std::size_t> pick;
      // Prefer continuing the chunk started by the previous hypothesis token.
      if (i > 0 && hyp_to_ref[i - 1]) {
        const std::size_t next = *hyp_to_ref[i - 1] + 1;
        if (next < r.size() && !ref_used[next] && matches(i, next)) pick = next;
      }
      for (std::size_t j = 0; !pick && j < r.size(); ++j) {
        if (!ref_used[j] && matches(i, j)) pick = j;
      }
      if (pick) {
        hyp_to_ref[i] = *pick;
        ref_used[*pick] = true;
        stage_of[i] = stage;
      }
    }
  };
  run_stage(MatchStage::kExact, [&](std::size_t i, std::size_t j) { return h[i] == r[j]; });
  run_stage(MatchStage::kStem, [&](std::size_t i, std::size_t j) { return hs[i] == rs[j]; });
  run_stage(MatchStage::kSynonym, [&](std::size_t i, std::size_t j) {
    return synonyms.synonymous(h[i], r[j]);
  });

  MatchAlignment out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (hyp_to_ref[i]) out.matches.push_back({i, *hyp_to_ref[i], stage_of[i]});
  }
  for (std::size_t k = 0; k < out.matches.size(); ++k) {
    const bool continues = k > 0 && out.matches[k].hyp == out.matches[k - 1].hyp + 1 &&
                           out.matches[k].ref == out.matches[k - 1].ref + 1;
    if (!continues) ++out.chunks;
  }
  return out;
}

double meteor_lite_single(const TokenList& hyp, const TokenList& ref,
                          const SynonymIndex& synonyms) {
  if (hyp.empty() || ref.empty()) return 0.0;
  const MatchAlignment a = align(hyp, ref, synonyms);
  const double m = static_cast<double>(a.matches.size());
  if (m == 0.0) return 0.0;
  const double p = m / static_cast<double>(hyp.size());
  const double r = m / static_cast<double>(ref.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(a.chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

double meteor_lite(const TokenList& hyp, const std::vector<TokenList>& refs,
                   const SynonymIndex& synonyms) {
  if (refs.empty()) throw ContractViolation("meteor_lite needs at least one reference");
  if (hyp.empty()) {
    std::cerr << "warning: empty hypothesis scores 0\n";
    return 0.0;
  }
  double best = 0.0;
  for (const TokenList& ref : refs) {
    best = std::max(best, meteor_lite_single(hyp, ref, synonyms));
  }
  return best;
}

double corpus_score(const std::vector<TokenList>& hyps,
                    const std::vector<std::vector<TokenList>>& refs,
                    const SynonymIndex& synonyms) {
  if (hyps.size() != refs.size()) {
    throw Error("hypothesis count " + std::to_string(hyps.size()) +
                " does not match reference count " + std::to_string(refs.size()));
  }
  if (hyps.empty()) throw Error("cannot score an empty corpus");
  double sum = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    sum += meteor_lite(hyps[i], refs[i], synonyms);
  }
  return sum / static_cast<double>(hyps.size());
}

std::vector<TokenList> read_token_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open token file: " + path.string());
  std::vector<TokenList> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(split_whitespace(line));
  }
  return lines;
}

namespace {

double round12(double v) { return std::round(v * 1e12) / 1e12; }

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error("invalid grid value '" + s + "'");
  }
  if (used != s.size()) throw Error("invalid grid value '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_axis(const std::string& spec) {
  const std::string s(trim(spec));
  if (s.empty()) throw Error("empty grid specification");
  std::vector<double> values;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw Error("grid range must be lo:hi:step, got '" + s + "'");
    const double lo = parse_number(std::string(trim(parts[0])));
    const double hi = parse_number(std::string(trim(parts[1])));
    const double step = parse_number(std::string(trim(parts[2])));
    if (!(step > 0.0) || hi < lo) throw Error("invalid grid range '" + s + "'");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
      values.push_back(round12(lo + static_cast<double>(i) * step));
    }
  } else {
    for (const std::string& part : split(s, ',')) {
      values.push_back(round12(parse_number(std::string(trim(part)))));
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

GridSpec uniform_grid(const std::string& spec) {
  const auto axis = parse_axis(spec);
  return {axis, axis, axis};
}

GridSpec default_grid() { return uniform_grid("0:1:0.1"); }

TuneResult tune(const std::vector<Story>& dev_stories,
                const std::vector<std::vector<TokenList>>& refs,
                const ThemeProfile& profile, const ResourceSet& resources,
                const GridSpec& grid, const TuneOptions& options,
                const SynonymIndex& synonyms) {
  if (dev_stories.empty()) throw Error("tuning needs at least one dev story");
  if (dev_stories.size() != refs.size()) {
    throw Error("dev story count " + std::to_string(dev_stories.size()) +
                " does not match reference count " + std::to_string(refs.size()));
  }
  if (grid.size() == 0) throw Error("empty tuning grid");

  std::vector<UnitizedStory> stories;
  std::vector<CandidateLists> candidates;
  for (const Story& s : dev_stories) {
    stories.emplace_back(s);
    candidates.push_back(
        candidate_lists(stories.back(), profile, options.decoder, options.scoring));
  }

  TuneResult result;
  for (const double a : grid.alpha) {
    for (const double b : grid.beta) {
      for (const double g : grid.gamma) {
        result.rows.push_back({Weights{a, b, g}, 0.0, {}});
      }
    }
  }
  DecoderConfig decoder = options.decoder;
  decoder.threads = 1;
  parallel_for(result.rows.size(), options.threads, [&](std::size_t i) {
    TuneRow& row = result.rows[i];
    ScoringConfig scoring = options.scoring;
    scoring.weights = row.weights;
    std::vector<TokenList> hyps;
    for (std::size_t s = 0; s < stories.size(); ++s) {
      const auto best = decode(stories[s], candidates[s], resources, scoring, decoder);
      hyps.push_back(best.front().tokens);
      row.per_story.push_back(meteor_lite(hyps.back(), refs[s], synonyms));
    }
    double sum = 0.0;
    for (const double v : row.per_story) sum += v;
    row.mean_score = sum / static_cast<double>(row.per_story.size());
  });

  const TuneRow* best = &result.rows.front();
  for (const TuneRow& row : result.rows) {
    if (row.mean_score > best->mean_score) best = &row;
  }
  result.best = best->weights;
  result.best_score = best->mean_score;
  return result;
}

namespace {

std::string format_weight(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void write_tune_tsv(std::ostream& out, const TuneResult& result) {
  out << "alpha\tbeta\tgamma\tscore\n";
  for (const TuneRow& row : result.rows) {
    out << format_weight(row.weights.alpha) << '\t' << format_weight(row.weights.beta)
        << '\t' << format_weight(row.weights.gamma) << '\t'
        << format_score(row.mean_score) << '\n';
  }
  out << "best\t" << format_weight(result.best.alpha) << '\t'
      << format_weight(result.best.beta) << '\t' << format_weight(result.best.gamma)
      << '\t' << format_score(result.best_score) << '\n';
}

}  // namespace rewriter
