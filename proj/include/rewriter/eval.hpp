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

#ifndef REWRITER_EVAL_HPP_
#define REWRITER_EVAL_HPP_

// meteor-lite: exact / stem / synonym alignment with the original METEOR
// Fmean and fragmentation penalty, and grid-search tuning of the weights.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rewriter/decoder.hpp"
#include "rewriter/resources.hpp"
#include "rewriter/scoring.hpp"
#include "rewriter/theme.hpp"

namespace rewriter {

using TokenList = std::vector<std::string>;

enum class MatchStage { kExact, kStem, kSynonym };

struct MatchAlignment {
  struct Match {
    std::size_t hyp;
    std::size_t ref;
    MatchStage stage;
  };
  std::vector<Match> matches;  // sorted by hyp index
  std::size_t chunks = 0;
};

// Synonymy through shared taxonomy concepts of the (lowercased) tokens.
class SynonymIndex {
 public:
  SynonymIndex() = default;
  explicit SynonymIndex(const Taxonomy* taxonomy) : taxonomy_(taxonomy) {}
  bool synonymous(const std::string& a, const std::string& b) const;

 private:
  const Taxonomy* taxonomy_ = nullptr;
};

// One-to-one staged alignment, comparing lowercased tokens.
MatchAlignment align(const TokenList& hyp, const TokenList& ref,
                     const SynonymIndex& synonyms = {});

// Score against a single reference.
double meteor_lite_single(const TokenList& hyp, const TokenList& ref,
                          const SynonymIndex& synonyms = {});

// Maximum over references. Requires at least one reference.
double meteor_lite(const TokenList& hyp, const std::vector<TokenList>& refs,
                   const SynonymIndex& synonyms = {});

// Mean of per-story meteor_lite. refs[i] holds the references of story i.
double corpus_score(const std::vector<TokenList>& hyps,
                    const std::vector<std::vector<TokenList>>& refs,
                    const SynonymIndex& synonyms = {});

// One story per line, tokens separated by single spaces.
std::vector<TokenList> read_token_lines(const std::filesystem::path& path);

struct GridSpec {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> gamma;

  std::size_t size() const { return alpha.size() * beta.size() * gamma.size(); }
};

// "lo:hi:step" or a comma-separated list ("0.1,0.5"). Values are rounded to
// 12 decimals so that 0.1 * 3 lands on 0.3.
std::vector<double> parse_axis(const std::string& spec);
GridSpec uniform_grid(const std::string& spec);
// Each of alpha, beta, gamma in {0, 0.1, ..., 1}.
GridSpec default_grid();

struct TuneRow {
  Weights weights;
  double mean_score = 0.0;
  std::vector<double> per_story;
};

struct TuneResult {
  Weights best;
  double best_score = 0.0;
  std::vector<TuneRow> rows;  // grid order: alpha, then beta, then gamma
};

struct TuneOptions {
  DecoderConfig decoder;
  // Weights are overwritten per grid point; the rest is kept.
  ScoringConfig scoring;
  std::size_t threads = 1;
};

// Decodes every dev story at every grid point and picks the point with the
// highest mean meteor-lite of the 1-best output. Ties go to the smallest
// (alpha, beta, gamma).
TuneResult tune(const std::vector<Story>& dev_stories,
                const std::vector<std::vector<TokenList>>& refs,
                const ThemeProfile& profile, const ResourceSet& resources,
                const GridSpec& grid, const TuneOptions& options = {},
                const SynonymIndex& synonyms = {});

void write_tune_tsv(std::ostream& out, const TuneResult& result);

}  // namespace rewriter

#endif  // REWRITER_EVAL_HPP_
