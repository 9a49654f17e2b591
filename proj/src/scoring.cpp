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

#include "rewriter/scoring.hpp"

#include <cmath>

#include "rewriter/error.hpp"

namespace rewriter {

// ---------------------------------------------------------------------------
// UnitizedStory / Assignment

UnitizedStory::UnitizedStory(Story story)
    : story_(std::move(story)), units_(collect_units(story_)) {
  token_unit_.resize(story_.sentences.size());
  for (std::size_t s = 0; s < story_.sentences.size(); ++s) {
    token_unit_[s].resize(story_.sentences[s].tokens.size());
  }
  for (std::size_t u = 0; u < units_.size(); ++u) {
    const RewriteUnit& unit = units_[u];
    for (std::size_t t = unit.first; t <= unit.last; ++t) {
      token_unit_[unit.sentence][t] = u;
    }
  }
  unit_arcs_.resize(units_.size());
  for (std::size_t s = 0; s < story_.sentences.size(); ++s) {
    for (const DependencyArc& arc : story_.sentences[s].arcs) {
      if (arc.head == 0) continue;
      const TokenPosition head{s, static_cast<std::size_t>(arc.head - 1)};
      const TokenPosition dep{s, static_cast<std::size_t>(arc.dependent - 1)};
      const std::size_t index = arcs_.size();
      arcs_.push_back({head, dep, arc.label});
      const auto hu = unit_of(head);
      const auto du = unit_of(dep);
      if (hu) unit_arcs_[*hu].push_back(index);
      if (du && du != hu) unit_arcs_[*du].push_back(index);
    }
  }
}

std::optional<std::size_t> UnitizedStory::unit_of(TokenPosition p) const {
  return token_unit_[p.sentence][p.token];
}

std::size_t Assignment::assigned_count() const {
  std::size_t n = 0;
  for (const auto& s : slots_) n += s.has_value();
  return n;
}

std::size_t Assignment::deleted_count() const {
  std::size_t n = 0;
  for (const auto& s : slots_) n += s && s->kind == OutcomeKind::kDelete;
  return n;
}

Assignment Assignment::identity(std::size_t units) {
  Assignment a(units);
  for (std::size_t u = 0; u < units; ++u) a.set(u, Outcome::keep());
  return a;
}

double combine(const ScoreBreakdown& c, std::size_t deleted,
               const ScoringConfig& config) {
  const Weights& w = config.weights;
  double total = w.gamma * c.th + w.beta * c.syn + w.alpha * (c.sem_lex + c.sem_pair);
  if (deleted > 0) total += static_cast<double>(deleted) * config.delete_penalty;
  return total;
}

namespace {

// Assignment with at most one slot overridden, so deltas can be evaluated
// without copying.
class OverlaidAssignment {
 public:
  explicit OverlaidAssignment(const Assignment& base) : base_(base) {}
  OverlaidAssignment(const Assignment& base, std::size_t unit, const Outcome& o)
      : base_(base), unit_(unit), outcome_(o) {}

  const Outcome* at(std::size_t u) const {
    if (unit_ && *unit_ == u) return &outcome_;
    const auto& slot = base_[u];
    return slot ? &*slot : nullptr;
  }

 private:
  const Assignment& base_;
  std::optional<std::size_t> unit_;
  Outcome outcome_;
};

bool rewritten(const Outcome* o) {
  return o != nullptr && o->kind != OutcomeKind::kKeep;
}

// Surface used for lookups at a token, or nullopt if its unit is deleted.
std::optional<std::string_view> surface_at(TokenPosition p,
                                           const UnitizedStory& story,
                                           const OverlaidAssignment& a) {
  const Token& token = story.story().token(p);
  const auto unit = story.unit_of(p);
  if (!unit) return std::string_view(token.surface);
  const Outcome* o = a.at(*unit);
  if (o == nullptr || o->kind == OutcomeKind::kKeep) {
    return std::string_view(token.surface);
  }
  if (o->kind == OutcomeKind::kDelete) return std::nullopt;
  return std::string_view(o->candidate->head_surface());
}

double arc_score(const UnitizedStory::Arc& arc, const UnitizedStory& story,
                 const DepLM& lm, const OverlaidAssignment& a) {
  const auto hu = story.unit_of(arc.head);
  const auto du = story.unit_of(arc.dependent);
  // Inside a rewritten multi-token unit the arc no longer exists.
  if (hu && hu == du && rewritten(a.at(*hu))) return 0.0;
  const auto head = surface_at(arc.head, story, a);
  const auto dep = surface_at(arc.dependent, story, a);
  if (!head || !dep) return 0.0;
  return lm.loglik(*head, arc.label, *dep);
}

struct UnitWord {
  std::string_view surface;
  std::string_view lemma;
  LexClass cls;
};

UnitWord original_word(const UnitizedStory& story, std::size_t u) {
  const Token& t = story.head_token(u);
  return {t.surface, t.lemma, story.units()[u].lex_class};
}

// Word the unit carries after applying the outcome (Keep -> original).
UnitWord rewritten_word(const UnitizedStory& story, std::size_t u,
                        const Outcome& o) {
  if (o.kind == OutcomeKind::kReplace) {
    return {o.candidate->head_surface(), o.candidate->head_lemma,
            o.candidate->lex_class};
  }
  return original_word(story, u);
}

double unit_sem_lex(const UnitizedStory& story, std::size_t u, const Outcome& o,
                    const EmbeddingTable& emb, const Taxonomy& tax, SemMode mode) {
  if (o.kind == OutcomeKind::kDelete) return 0.0;
  const UnitWord w = original_word(story, u);
  const UnitWord w2 = rewritten_word(story, u, o);
  double s = cosine(w.surface, w2.surface, emb);
  if (mode == SemMode::kFull) s += resnik(w.lemma, w.cls, w2.lemma, w2.cls, tax);
  return s;
}

template <typename V>
double pair_terms(const V& wi, const V& wj, const V& wi2, const V& wj2) {
  const double sim = cosine(wi, wj) * cosine(wi2, wj2);
  const Eigen::VectorXd offset = wi2 + wj - wi;
  return sim + cosine(offset, wj2);
}

// i < j in document order.
double unit_pair(const UnitizedStory& story, std::size_t i, const Outcome& oi,
                 std::size_t j, const Outcome& oj, const EmbeddingTable& emb) {
  if (oi.kind == OutcomeKind::kDelete || oj.kind == OutcomeKind::kDelete) {
    return 0.0;
  }
  const auto vi = emb.find(original_word(story, i).surface);
  const auto vj = emb.find(original_word(story, j).surface);
  const auto vi2 = emb.find(rewritten_word(story, i, oi).surface);
  const auto vj2 = emb.find(rewritten_word(story, j, oj).surface);
  if (!vi || !vj || !vi2 || !vj2) return 0.0;
  return pair_terms<Eigen::VectorXd>(emb.row(*vi).transpose(),
                                     emb.row(*vj).transpose(),
                                     emb.row(*vi2).transpose(),
                                     emb.row(*vj2).transpose());
}

void check_outcome(const Outcome& o) {
  if (o.kind == OutcomeKind::kReplace && o.candidate == nullptr) {
    throw ContractViolation("Replace outcome without a candidate");
  }
}

}  // namespace

double pair_sim(const Eigen::VectorXd& wi, const Eigen::VectorXd& wj,
                const Eigen::VectorXd& wi_new, const Eigen::VectorXd& wj_new) {
  return cosine(wi, wj) * cosine(wi_new, wj_new);
}

double analogy(const Eigen::VectorXd& wi, const Eigen::VectorXd& wj,
               const Eigen::VectorXd& wi_new, const Eigen::VectorXd& wj_new) {
  return cosine(Eigen::VectorXd(wi_new + wj - wi), wj_new);
}

double score_th(const Assignment& assignment) {
  double th = 0.0;
  for (std::size_t u = 0; u < assignment.size(); ++u) {
    const auto& o = assignment[u];
    if (o && o->kind == OutcomeKind::kReplace) {
      check_outcome(*o);
      th += o->candidate->salience;
    }
  }
  return th;
}

double score_syn(const Assignment& assignment, const UnitizedStory& story,
                 const DepLM& lm) {
  const OverlaidAssignment a(assignment);
  double syn = 0.0;
  for (const auto& arc : story.arcs()) syn += arc_score(arc, story, lm, a);
  return syn;
}

double score_sem_lex(const Assignment& assignment, const UnitizedStory& story,
                     const EmbeddingTable& embeddings, const Taxonomy& taxonomy,
                     SemMode mode) {
  double lex = 0.0;
  for (std::size_t u = 0; u < assignment.size(); ++u) {
    if (const auto& o = assignment[u]) {
      check_outcome(*o);
      lex += unit_sem_lex(story, u, *o, embeddings, taxonomy, mode);
    }
  }
  return lex;
}

double score_sem_pair(const Assignment& assignment, const UnitizedStory& story,
                      const EmbeddingTable& embeddings, SemMode mode) {
  if (mode == SemMode::kLexCosine) return 0.0;
  double pair = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (!assignment[i]) continue;
    for (std::size_t j = i + 1; j < assignment.size(); ++j) {
      if (!assignment[j]) continue;
      pair += unit_pair(story, i, *assignment[i], j, *assignment[j], embeddings);
    }
  }
  return pair;
}

ScoreBreakdown score_total(const Assignment& assignment,
                           const UnitizedStory& story,
                           const ResourceSet& resources,
                           const ScoringConfig& config) {
  if (assignment.size() != story.unit_count()) {
    throw ContractViolation("assignment size does not match the story's units");
  }
  ScoreBreakdown b;
  b.th = score_th(assignment);
  b.syn = score_syn(assignment, story, resources.deplm);
  b.sem_lex = score_sem_lex(assignment, story, resources.embeddings,
                            resources.taxonomy, config.sem_mode);
  b.sem_pair = score_sem_pair(assignment, story, resources.embeddings,
                              config.sem_mode);
  b.total = combine(b, assignment.deleted_count(), config);
  return b;
}

ScoreBreakdown delta_score(const Assignment& assignment, std::size_t unit,
                           const Outcome& outcome, const UnitizedStory& story,
                           const ResourceSet& resources,
                           const ScoringConfig& config) {
  if (assignment.size() != story.unit_count() || unit >= assignment.size()) {
    throw ContractViolation("unit index out of range");
  }
  if (assignment.assigned(unit)) {
    throw ContractViolation("unit " + std::to_string(unit) + " is already assigned");
  }
  check_outcome(outcome);
  ScoreBreakdown d;
  if (outcome.kind == OutcomeKind::kReplace) d.th = outcome.candidate->salience;

  const OverlaidAssignment before(assignment);
  const OverlaidAssignment after(assignment, unit, outcome);
  for (const std::size_t index : story.arcs_of_unit(unit)) {
    const auto& arc = story.arcs()[index];
    d.syn += arc_score(arc, story, resources.deplm, after) -
             arc_score(arc, story, resources.deplm, before);
  }

  d.sem_lex = unit_sem_lex(story, unit, outcome, resources.embeddings,
                           resources.taxonomy, config.sem_mode);
  if (config.sem_mode == SemMode::kFull) {
    for (std::size_t v = 0; v < assignment.size(); ++v) {
      if (v == unit || !assignment[v]) continue;
      d.sem_pair += v < unit
                        ? unit_pair(story, v, *assignment[v], unit, outcome,
                                    resources.embeddings)
                        : unit_pair(story, unit, outcome, v, *assignment[v],
                                    resources.embeddings);
    }
  }
  d.total = combine(d, outcome.kind == OutcomeKind::kDelete ? 1 : 0, config);
  return d;
}

}  // namespace rewriter
