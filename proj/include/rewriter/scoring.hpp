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

#ifndef REWRITER_SCORING_HPP_
#define REWRITER_SCORING_HPP_

// The rewrite objective: weighted thematicity, syntactic compatibility and
// semantic coherence over (partial) assignments of outcomes to rewrite
// units, plus the incremental form used by the decoder.

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "rewriter/corpus.hpp"
#include "rewriter/resources.hpp"
#include "rewriter/theme.hpp"

namespace rewriter {

struct Weights {
  double alpha = 0.1;  // semantic coherence
  double beta = 0.1;   // syntactic compatibility
  double gamma = 1.0;  // thematicity

  bool operator==(const Weights&) const = default;
};

// kLexCosine drops Resnik and all pair terms, leaving cos(w, w') per unit.
enum class SemMode { kFull, kLexCosine };

struct ScoringConfig {
  Weights weights;
  // Added to the total once per deleted unit. -inf disables deletion.
  double delete_penalty = -std::numeric_limits<double>::infinity();
  SemMode sem_mode = SemMode::kFull;
};

enum class OutcomeKind { kKeep, kReplace, kDelete };

// Replace outcomes point at a candidate owned elsewhere (usually the theme
// profile); the candidate must outlive the outcome.
struct Outcome {
  OutcomeKind kind = OutcomeKind::kKeep;
  const RewriteCandidate* candidate = nullptr;

  static Outcome keep() { return {OutcomeKind::kKeep, nullptr}; }
  static Outcome remove() { return {OutcomeKind::kDelete, nullptr}; }
  static Outcome replace(const RewriteCandidate& c) {
    return {OutcomeKind::kReplace, &c};
  }
};

// A story split into rewrite units, with the non-root dependency arcs
// indexed by the units they touch.
class UnitizedStory {
 public:
  struct Arc {
    TokenPosition head;
    TokenPosition dependent;
    std::string label;
  };

  explicit UnitizedStory(Story story);

  const Story& story() const { return story_; }
  const std::vector<RewriteUnit>& units() const { return units_; }
  std::size_t unit_count() const { return units_.size(); }
  std::optional<std::size_t> unit_of(TokenPosition p) const;
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<std::size_t>& arcs_of_unit(std::size_t u) const {
    return unit_arcs_[u];
  }

  // Original head-token surface, lemma and class used for resource lookups.
  const Token& head_token(std::size_t u) const {
    return story_.token(units_[u].head());
  }

 private:
  Story story_;
  std::vector<RewriteUnit> units_;
  std::vector<std::vector<std::optional<std::size_t>>> token_unit_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> unit_arcs_;
};

// Partial map from unit index to outcome.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t units) : slots_(units) {}

  std::size_t size() const { return slots_.size(); }
  bool assigned(std::size_t u) const { return slots_[u].has_value(); }
  const std::optional<Outcome>& operator[](std::size_t u) const {
    return slots_[u];
  }
  void set(std::size_t u, Outcome o) { slots_[u] = o; }
  void clear(std::size_t u) { slots_[u].reset(); }
  std::size_t assigned_count() const;
  std::size_t deleted_count() const;

  // Every unit explicitly Keep.
  static Assignment identity(std::size_t units);

 private:
  std::vector<std::optional<Outcome>> slots_;
};

struct ScoreBreakdown {
  double th = 0.0;
  double syn = 0.0;
  double sem_lex = 0.0;
  double sem_pair = 0.0;
  double total = 0.0;

  ScoreBreakdown& operator+=(const ScoreBreakdown& o) {
    th += o.th;
    syn += o.syn;
    sem_lex += o.sem_lex;
    sem_pair += o.sem_pair;
    total += o.total;
    return *this;
  }
};

inline ScoreBreakdown operator+(ScoreBreakdown a, const ScoreBreakdown& b) {
  return a += b;
}

// gamma*th + beta*syn + alpha*(sem_lex + sem_pair) + deleted*delete_penalty.
double combine(const ScoreBreakdown& components, std::size_t deleted,
               const ScoringConfig& config);

double score_th(const Assignment& assignment);

double score_syn(const Assignment& assignment, const UnitizedStory& story,
                 const DepLM& lm);

double score_sem_lex(const Assignment& assignment, const UnitizedStory& story,
                     const EmbeddingTable& embeddings, const Taxonomy& taxonomy,
                     SemMode mode = SemMode::kFull);

double score_sem_pair(const Assignment& assignment, const UnitizedStory& story,
                      const EmbeddingTable& embeddings,
                      SemMode mode = SemMode::kFull);

ScoreBreakdown score_total(const Assignment& assignment,
                           const UnitizedStory& story,
                           const ResourceSet& resources,
                           const ScoringConfig& config);

// Change in every component when `unit` (currently unassigned) receives
// `outcome`. score_total(a) + delta_score(a, u, o) == score_total(a + {u: o}).
ScoreBreakdown delta_score(const Assignment& assignment, std::size_t unit,
                           const Outcome& outcome, const UnitizedStory& story,
                           const ResourceSet& resources,
                           const ScoringConfig& config);

// Per-term helpers, exposed for diagnostics and tests.
double pair_sim(const Eigen::VectorXd& wi, const Eigen::VectorXd& wj,
                const Eigen::VectorXd& wi_new, const Eigen::VectorXd& wj_new);
double analogy(const Eigen::VectorXd& wi, const Eigen::VectorXd& wj,
               const Eigen::VectorXd& wi_new, const Eigen::VectorXd& wj_new);

}  // namespace rewriter

#endif  // REWRITER_SCORING_HPP_
