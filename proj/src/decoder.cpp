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

#include "rewriter/decoder.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "rewriter/error.hpp"
#include "rewriter/parallel.hpp"
#include "rewriter/text.hpp"

namespace rewriter {

CandidateLists candidate_lists(const UnitizedStory& story,
                               const ThemeProfile& profile,
                               const DecoderConfig& config,
                               const ScoringConfig& scoring) {
  CandidateLists lists(story.unit_count());
  for (std::size_t u = 0; u < story.unit_count(); ++u) {
    const RewriteUnit& unit = story.units()[u];
    auto& options = lists[u];
    if (const auto it = config.class_match.find(unit.lex_class);
        it != config.class_match.end()) {
      for (const RewriteCandidate& c : profile.candidates_for(it->second)) {
        options.push_back(Outcome::replace(c));
      }
    }
    if (config.allow_keep) options.push_back(Outcome::keep());
    if (std::isfinite(scoring.delete_penalty)) options.push_back(Outcome::remove());
    if (options.empty()) {
      const Token& t = story.story().token({unit.sentence, unit.first});
      throw EmptyCandidatesError(
          "no candidates for sentence " + std::to_string(unit.sentence + 1) +
          " token " + std::to_string(t.index) + " ('" + t.surface + "')");
    }
    if (options.size() > INT16_MAX) options.resize(INT16_MAX);
  }
  return lists;
}

std::vector<std::size_t> unit_order(const UnitizedStory& story,
                                    SearchOrder order) {
  std::vector<std::size_t> out;
  const std::size_t n = story.unit_count();
  if (order != SearchOrder::kHeadFirst) {
    for (std::size_t u = 0; u < n; ++u) out.push_back(u);
    return out;
  }
  std::vector<bool> placed(n, false);
  const auto& sentences = story.story().sentences;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& arcs = sentences[s].arcs;
    std::vector<std::vector<int>> children(arcs.size() + 1);
    for (const auto& arc : arcs) children[arc.head].push_back(arc.dependent);
    std::deque<int> queue(children[0].begin(), children[0].end());
    while (!queue.empty()) {
      const int id = queue.front();
      queue.pop_front();
      if (const auto u = story.unit_of({s, static_cast<std::size_t>(id - 1)});
          u && !placed[*u]) {
        placed[*u] = true;
        out.push_back(*u);
      }
      for (const int c : children[id]) queue.push_back(c);
    }
  }
  // Tokens unreachable from a root (malformed trees) go last.
  for (std::size_t u = 0; u < n; ++u) {
    if (!placed[u]) out.push_back(u);
  }
  return out;
}

namespace {

struct Piece {
  std::string text;
  bool space_after = true;
};

bool glues_left(const std::string& token) {
  return is_punctuation(token) || (token.size() > 1 && token[0] == '\'');
}

std::vector<std::vector<Piece>> realize_pieces(const UnitizedStory& story,
                                               const Assignment& assignment) {
  std::vector<std::vector<Piece>> out;
  const auto& sentences = story.story().sentences;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& tokens = sentences[s].tokens;
    std::vector<Piece> pieces;
    bool first_changed = false;
    std::size_t t = 0;
    while (t < tokens.size()) {
      const auto u = story.unit_of({s, t});
      const Outcome* o =
          u && assignment.size() > *u && assignment[*u] ? &*assignment[*u] : nullptr;
      if (!u || o == nullptr || o->kind == OutcomeKind::kKeep) {
        pieces.push_back({tokens[t].surface, tokens[t].space_after});
        ++t;
        continue;
      }
      const RewriteUnit& unit = story.units()[*u];
      if (o->kind == OutcomeKind::kReplace) {
        // Only a replacement takes over the sentence-initial casing.
        if (pieces.empty()) first_changed = true;
        for (const std::string& c : o->candidate->tokens) pieces.push_back({c, true});
        pieces.back().space_after = tokens[unit.last].space_after;
      }
      t = unit.last + 1;
    }
    const std::string& original_first = tokens.front().surface;
    if (first_changed && !pieces.empty() && !original_first.empty() &&
        std::isupper(static_cast<unsigned char>(original_first[0]))) {
      auto& text = pieces.front().text;
      text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    }
    out.push_back(std::move(pieces));
  }
  return out;
}

}  // namespace

std::vector<std::string> realize_tokens(const UnitizedStory& story,
                                        const Assignment& assignment) {
  std::vector<std::string> out;
  for (auto& sentence : realize_pieces(story, assignment)) {
    for (auto& p : sentence) out.push_back(std::move(p.text));
  }
  return out;
}

std::string realize(const UnitizedStory& story, const Assignment& assignment) {
  std::string text;
  bool space_pending = false;
  for (const auto& sentence : realize_pieces(story, assignment)) {
    for (const Piece& p : sentence) {
      if (!text.empty() && space_pending && !glues_left(p.text)) text += ' ';
      text += p.text;
      space_pending = p.space_after;
    }
    space_pending = true;
  }
  return text;
}

namespace {

using ChoiceKey = std::vector<std::int16_t>;

struct ChoiceKeyHash {
  std::size_t operator()(const ChoiceKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (const auto c : k) {
      h ^= static_cast<std::uint16_t>(c);
      h *= 1099511628211ull;
    }
    return h;
  }
};

bool hypothesis_before(const Hypothesis& a, const Hypothesis& b) {
  if (a.breakdown.total != b.breakdown.total) {
    return a.breakdown.total > b.breakdown.total;
  }
  return a.choices < b.choices;
}

struct Expansion {
  std::size_t parent;
  std::size_t unit;
  std::int16_t option;
  ScoreBreakdown delta;
};

std::vector<Hypothesis> run_beam(const UnitizedStory& story,
                                 const CandidateLists& candidates,
                                 const ResourceSet& resources,
                                 const ScoringConfig& scoring,
                                 const DecoderConfig& config,
                                 const std::vector<std::size_t>& order,
                                 std::size_t width) {
  const std::size_t n = story.unit_count();
  Hypothesis root;
  root.assignment = Assignment(n);
  root.choices.assign(n, -1);
  root.breakdown = score_total(root.assignment, story, resources, scoring);
  std::vector<Hypothesis> beam{root};

  for (std::size_t step = 0; step < n; ++step) {
    std::vector<std::vector<Expansion>> per_parent(beam.size());
    parallel_for(beam.size(), config.threads, [&](std::size_t h) {
      const Hypothesis& hyp = beam[h];
      auto& out = per_parent[h];
      const auto extend = [&](std::size_t u) {
        for (std::size_t k = 0; k < candidates[u].size(); ++k) {
          out.push_back({h, u, static_cast<std::int16_t>(k),
                         delta_score(hyp.assignment, u, candidates[u][k], story,
                                     resources, scoring)});
        }
      };
      if (config.order == SearchOrder::kMultiPath) {
        for (std::size_t u = 0; u < n; ++u) {
          if (!hyp.assignment.assigned(u)) extend(u);
        }
      } else {
        extend(order[step]);
      }
    });

    std::vector<Hypothesis> next;
    std::unordered_map<ChoiceKey, std::size_t, ChoiceKeyHash> seen;
    for (const auto& group : per_parent) {
      for (const Expansion& e : group) {
        const Hypothesis& parent = beam[e.parent];
        ChoiceKey key = parent.choices;
        key[e.unit] = e.option;
        const double total = parent.breakdown.total + e.delta.total;
        const auto it = seen.find(key);
        if (it != seen.end()) {
          // Same assignment reached along another path; keep the better one.
          Hypothesis& kept = next[it->second];
          if (total > kept.breakdown.total) {
            kept.breakdown = parent.breakdown + e.delta;
          }
          continue;
        }
        Hypothesis child;
        child.assignment = parent.assignment;
        child.assignment.set(e.unit, candidates[e.unit][e.option]);
        child.choices = key;
        child.breakdown = parent.breakdown + e.delta;
        child.assigned_count = parent.assigned_count + 1;
        seen.emplace(std::move(key), next.size());
        next.push_back(std::move(child));
      }
    }
    std::sort(next.begin(), next.end(), hypothesis_before);
    if (next.size() > width) next.resize(width);
    beam = std::move(next);
  }
  return beam;
}

}  // namespace

std::vector<RewriteResult> decode(const UnitizedStory& story,
                                  const CandidateLists& candidates,
                                  const ResourceSet& resources,
                                  const ScoringConfig& scoring,
                                  const DecoderConfig& config) {
  if (config.beam_width < 1) throw Error("beam width must be >= 1");
  if (config.n_best < 1 || config.n_best > config.beam_width) {
    throw Error("n-best must be between 1 and the beam width");
  }
  if (candidates.size() != story.unit_count()) {
    throw ContractViolation("one candidate list per unit is required");
  }
  for (std::size_t u = 0; u < candidates.size(); ++u) {
    if (candidates[u].empty()) {
      throw EmptyCandidatesError("empty candidate list for unit " + std::to_string(u));
    }
  }
  const auto order = unit_order(story, config.order);

  std::vector<std::size_t> widths;
  if (config.anytime_widening) {
    for (std::size_t w = 1; w < config.beam_width; w *= 2) widths.push_back(w);
  }
  widths.push_back(config.beam_width);

  std::unordered_map<ChoiceKey, RewriteResult, ChoiceKeyHash> pool;
  for (const std::size_t w : widths) {
    for (Hypothesis& h :
         run_beam(story, candidates, resources, scoring, config, order, w)) {
      if (pool.count(h.choices)) continue;
      RewriteResult r;
      // Canonical rescoring so ties do not depend on the path taken.
      r.breakdown = score_total(h.assignment, story, resources, scoring);
      r.tokens = realize_tokens(story, h.assignment);
      r.text = realize(story, h.assignment);
      r.choices = h.choices;
      r.assignment = std::move(h.assignment);
      pool.emplace(r.choices, std::move(r));
    }
  }
  std::vector<RewriteResult> results;
  results.reserve(pool.size());
  for (auto& [key, r] : pool) results.push_back(std::move(r));
  std::sort(results.begin(), results.end(),
            [](const RewriteResult& a, const RewriteResult& b) {
              if (a.breakdown.total != b.breakdown.total) {
                return a.breakdown.total > b.breakdown.total;
              }
              if (a.text != b.text) return a.text < b.text;
              return a.choices < b.choices;
            });
  if (results.size() > config.n_best) results.resize(config.n_best);
  return results;
}

std::vector<RewriteResult> decode(const UnitizedStory& story,
                                  const ThemeProfile& profile,
                                  const ResourceSet& resources,
                                  const ScoringConfig& scoring,
                                  const DecoderConfig& config) {
  return decode(story, candidate_lists(story, profile, config, scoring),
                resources, scoring, config);
}

}  // namespace rewriter
