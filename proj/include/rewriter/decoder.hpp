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

#ifndef REWRITER_DECODER_HPP_
#define REWRITER_DECODER_HPP_

// Two-stage decoding: per-unit candidate lists, then a beam search over
// partial assignments stratified by the number of assigned units, with
// recombination of identical assignments.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rewriter/resources.hpp"
#include "rewriter/scoring.hpp"
#include "rewriter/theme.hpp"

namespace rewriter {

enum class SearchOrder {
  kMultiPath,    // any unassigned unit may be extended at every step
  kLeftToRight,  // units in document order
  kHeadFirst,    // breadth-first from each sentence root
};

struct DecoderConfig {
  std::size_t beam_width = 64;
  std::size_t n_best = 5;
  bool allow_keep = true;
  // Source unit class -> profile candidate class.
  std::map<LexClass, LexClass> class_match = {
      {LexClass::kNoun, LexClass::kNoun},
      {LexClass::kPropn, LexClass::kPropn},
      {LexClass::kVerb, LexClass::kVerb},
      {LexClass::kAdj, LexClass::kAdj},
  };
  SearchOrder order = SearchOrder::kMultiPath;
  // Run widths 1, 2, 4, ... below beam_width as well and pool the finished
  // hypotheses, so the best total never drops when the width doubles.
  bool anytime_widening = true;
  std::size_t threads = 1;
};

// Options per unit, in a fixed order: profile candidates, then Keep, then
// Delete (only when the delete penalty is finite).
using CandidateLists = std::vector<std::vector<Outcome>>;

CandidateLists candidate_lists(const UnitizedStory& story,
                               const ThemeProfile& profile,
                               const DecoderConfig& config,
                               const ScoringConfig& scoring);

struct Hypothesis {
  Assignment assignment;
  std::vector<std::int16_t> choices;  // option index per unit, -1 unassigned
  ScoreBreakdown breakdown;
  std::size_t assigned_count = 0;
};

struct RewriteResult {
  std::string text;
  std::vector<std::string> tokens;
  Assignment assignment;
  std::vector<std::int16_t> choices;
  ScoreBreakdown breakdown;
};

// n-best full rewrites sorted by total descending, then text, then choices.
std::vector<RewriteResult> decode(const UnitizedStory& story,
                                  const CandidateLists& candidates,
                                  const ResourceSet& resources,
                                  const ScoringConfig& scoring,
                                  const DecoderConfig& config);

std::vector<RewriteResult> decode(const UnitizedStory& story,
                                  const ThemeProfile& profile,
                                  const ResourceSet& resources,
                                  const ScoringConfig& scoring,
                                  const DecoderConfig& config);

// Unit visiting order for the fixed-order strategies.
std::vector<std::size_t> unit_order(const UnitizedStory& story, SearchOrder order);

// Token sequence of the rewrite: replaced units spliced in, deleted units
// dropped, everything else verbatim. Unassigned units count as Keep.
std::vector<std::string> realize_tokens(const UnitizedStory& story,
                                        const Assignment& assignment);

// Detokenized text: single spaces, none before punctuation or clitics
// ("'s") or after SpaceAfter=No tokens; sentence-initial capitals kept.
std::string realize(const UnitizedStory& story, const Assignment& assignment);

}  // namespace rewriter

#endif  // REWRITER_DECODER_HPP_
