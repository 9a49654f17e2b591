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

#include "rewriter/theme.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "rewriter/error.hpp"
#include "rewriter/text.hpp"

namespace rewriter {

using nlohmann::json;

std::string RewriteCandidate::text() const { return join(tokens, " "); }

const std::vector<RewriteCandidate>& ThemeProfile::candidates_for(
    LexClass c) const {
  static const std::vector<RewriteCandidate> kEmpty;
  const auto it = candidates.find(c);
  return it == candidates.end() ? kEmpty : it->second;
}

namespace {

bool counts_for_tfidf(const Token& token) {
  return token.is_content && !is_named_entity(token) &&
         (token.pos == LexClass::kNoun || token.pos == LexClass::kVerb ||
          token.pos == LexClass::kAdj);
}

template <typename Key>
Key most_frequent(const std::map<Key, std::size_t>& counts) {
  // std::map iterates keys ascending, so the first maximum is the
  // lexicographically smallest among ties.
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

bool candidate_less(const RewriteCandidate& a, const RewriteCandidate& b) {
  if (a.salience != b.salience) return a.salience > b.salience;
  return a.text() < b.text();
}

}  // namespace

TermStats term_stats(const std::vector<Story>& theme_corpus,
                     const std::vector<Story>& background) {
  if (theme_corpus.empty()) throw Error("theme corpus is empty");
  if (background.empty()) throw Error("background corpus is empty");
  TermStats stats;
  for (const Story& story : theme_corpus) {
    for (const Sentence& sentence : story.sentences) {
      for (const Token& token : sentence.tokens) {
        if (!counts_for_tfidf(token)) continue;
        const std::string lemma = to_lower(token.lemma);
        ++stats.tf[token.pos][lemma];
        ++stats.surfaces[token.pos][lemma][token.surface];
      }
    }
  }
  for (const Story& doc : background) {
    std::set<std::string> seen;
    for (const Sentence& sentence : doc.sentences) {
      for (const Token& token : sentence.tokens) {
        seen.insert(to_lower(token.lemma));
      }
    }
    for (const std::string& lemma : seen) ++stats.df[lemma];
  }
  stats.background_docs = background.size();
  return stats;
}

double raw_tfidf(std::size_t tf, std::size_t df, std::size_t docs) {
  return static_cast<double>(tf) *
         std::log(static_cast<double>(docs + 1) / static_cast<double>(df + 1));
}

double salience_tfidf(std::size_t tf, std::size_t df, std::size_t docs,
                      double max_raw) {
  if (!(max_raw > 0.0)) {
    throw DegenerateThemeError(
        "maximum raw tf-idf is zero; theme is indistinguishable from the "
        "background");
  }
  return raw_tfidf(tf, df, docs) / max_raw;
}

double salience_ne(std::size_t count) {
  if (count == 0) throw Error("named entity does not occur in the theme");
  return 1.0 - 1.0 / static_cast<double>(count);
}

CompoundSet extract_compounds(const std::vector<Story>& theme_corpus,
                              std::size_t max_len,
                              const std::map<std::string, double>& noun_salience) {
  if (max_len < 1) throw ContractViolation("compound length bound must be >= 1");
  std::map<std::vector<std::string>, std::size_t> compound_counts;
  std::map<std::vector<std::string>, std::string> compound_heads;
  std::map<std::vector<std::string>, std::map<std::string, std::size_t>> ne_tags;
  std::map<std::vector<std::string>, std::size_t> ne_counts;

  for (const Story& story : theme_corpus) {
    for (const Sentence& sentence : story.sentences) {
      const auto& tokens = sentence.tokens;
      std::size_t t = 0;
      while (t < tokens.size()) {
        const Token& token = tokens[t];
        const bool ne = is_content_class(token.pos) && is_named_entity(token);
        if (ne) {
          std::size_t end = t;
          while (end + 1 < tokens.size() &&
                 is_content_class(tokens[end + 1].pos) &&
                 is_named_entity(tokens[end + 1]) &&
                 tokens[end + 1].ne_tag == token.ne_tag) {
            ++end;
          }
          std::vector<std::string> span;
          for (std::size_t i = t; i <= end; ++i) span.push_back(tokens[i].surface);
          ++ne_counts[span];
          ++ne_tags[span][token.ne_tag.empty() ? "PROPN" : token.ne_tag];
          t = end + 1;
          continue;
        }
        if (token.pos != LexClass::kNoun) {
          ++t;
          continue;
        }
        std::size_t end = t;
        while (end + 1 < tokens.size() && tokens[end + 1].pos == LexClass::kNoun &&
               !is_named_entity(tokens[end + 1])) {
          ++end;
        }
        for (std::size_t start = t; start <= end; ++start) {
          for (std::size_t len = 2; len <= max_len && start + len - 1 <= end; ++len) {
            std::vector<std::string> gram;
            for (std::size_t i = start; i < start + len; ++i) {
              gram.push_back(tokens[i].surface);
            }
            compound_heads[gram] = to_lower(tokens[start + len - 1].lemma);
            ++compound_counts[gram];
          }
        }
        t = end + 1;
      }
    }
  }

  CompoundSet out;
  for (const auto& [gram, count] : compound_counts) {
    if (count < 2) continue;
    RewriteCandidate c;
    c.tokens = gram;
    c.head_lemma = compound_heads[gram];
    c.lex_class = LexClass::kNoun;
    const auto it = noun_salience.find(c.head_lemma);
    c.salience = it == noun_salience.end() ? 0.0 : it->second;
    out.compounds.push_back(std::move(c));
  }
  for (const auto& [span, count] : ne_counts) {
    out.ne_inventory.push_back({span, most_frequent(ne_tags[span]), count});
  }
  return out;
}

ThemeProfile build_profile(const std::string& name,
                           const std::vector<Story>& theme_corpus,
                           const std::vector<Story>& background,
                           const FilterLists& filters,
                           const ThemeParams& params) {
  const TermStats stats = term_stats(theme_corpus, background);
  ThemeProfile profile;
  profile.name = name;
  profile.params = params;
  profile.filters = filters;

  for (const auto& [cls, lemmas] : stats.tf) {
    double max_raw = 0.0;
    for (const auto& [lemma, tf] : lemmas) {
      const auto df_it = stats.df.find(lemma);
      const std::size_t df = df_it == stats.df.end() ? 0 : df_it->second;
      max_raw = std::max(max_raw, raw_tfidf(tf, df, stats.background_docs));
    }
    auto& table = profile.salience[cls];
    for (const auto& [lemma, tf] : lemmas) {
      const auto df_it = stats.df.find(lemma);
      const std::size_t df = df_it == stats.df.end() ? 0 : df_it->second;
      table[lemma] = salience_tfidf(tf, df, stats.background_docs, max_raw);
    }
  }

  const auto noun_it = profile.salience.find(LexClass::kNoun);
  CompoundSet found = extract_compounds(
      theme_corpus, params.max_compound_len,
      noun_it == profile.salience.end() ? std::map<std::string, double>{}
                                        : noun_it->second);
  profile.compounds = std::move(found.compounds);
  profile.ne_inventory = std::move(found.ne_inventory);

  const auto blocked = [&filters](const std::vector<std::string>& tokens) {
    for (const std::string& t : tokens) {
      if (filters.blocks_candidate(t) || is_numeric(t)) return true;
    }
    return tokens.size() > 1 && filters.blocks_candidate(join(tokens, " "));
  };

  for (const auto& [cls, table] : profile.salience) {
    auto& list = profile.candidates[cls];
    for (const auto& [lemma, score] : table) {
      RewriteCandidate c;
      c.tokens = {most_frequent(stats.surfaces.at(cls).at(lemma))};
      c.head_lemma = lemma;
      c.lex_class = cls;
      c.salience = score;
      if (blocked(c.tokens) || filters.blocks_candidate(lemma) ||
          is_numeric(lemma)) {
        continue;
      }
      list.push_back(std::move(c));
    }
  }
  for (const RewriteCandidate& c : profile.compounds) {
    if (!blocked(c.tokens)) profile.candidates[LexClass::kNoun].push_back(c);
  }
  auto& ne_table = profile.salience[LexClass::kPropn];
  for (const NamedEntityEntry& e : profile.ne_inventory) {
    RewriteCandidate c;
    c.tokens = e.tokens;
    c.head_lemma = to_lower(e.tokens.back());
    c.lex_class = LexClass::kPropn;
    c.salience = salience_ne(e.count);
    ne_table[c.text()] = c.salience;
    if (!blocked(c.tokens)) profile.candidates[LexClass::kPropn].push_back(std::move(c));
  }
  if (ne_table.empty()) profile.salience.erase(LexClass::kPropn);

  for (auto& [cls, list] : profile.candidates) {
    std::sort(list.begin(), list.end(), candidate_less);
    if (list.size() > params.k_max) list.resize(params.k_max);
  }
  return profile;
}

namespace {

json candidate_to_json(const RewriteCandidate& c) {
  return json{{"tokens", c.tokens},
              {"head_lemma", c.head_lemma},
              {"lexical_class", std::string(to_string(c.lex_class))},
              {"salience", c.salience}};
}

LexClass class_from_json(const json& j) {
  const auto cls = lex_class_from_string(j.get<std::string>());
  if (!cls) throw Error("unknown lexical class in profile: " + j.dump());
  return *cls;
}

RewriteCandidate candidate_from_json(const json& j) {
  RewriteCandidate c;
  c.tokens = j.at("tokens").get<std::vector<std::string>>();
  if (c.tokens.empty()) throw Error("profile candidate with no tokens");
  c.head_lemma = j.at("head_lemma").get<std::string>();
  c.lex_class = class_from_json(j.at("lexical_class"));
  c.salience = j.at("salience").get<double>();
  return c;
}

}  // namespace

void write_profile(std::ostream& out, const ThemeProfile& profile) {
  json salience = json::object();
  for (const auto& [cls, table] : profile.salience) {
    salience[std::string(to_string(cls))] = table;
  }
  json ne = json::array();
  for (const NamedEntityEntry& e : profile.ne_inventory) {
    ne.push_back({{"tokens", e.tokens}, {"tag", e.tag}, {"count", e.count}});
  }
  json compounds = json::array();
  for (const RewriteCandidate& c : profile.compounds) {
    compounds.push_back(candidate_to_json(c));
  }
  json candidates = json::object();
  for (const auto& [cls, list] : profile.candidates) {
    json arr = json::array();
    for (const RewriteCandidate& c : list) arr.push_back(candidate_to_json(c));
    candidates[std::string(to_string(cls))] = std::move(arr);
  }
  const json doc = {
      {"name", profile.name},
      {"version", profile.version},
      {"params",
       {{"k_max", profile.params.k_max}, {"K", profile.params.max_compound_len}}},
      {"salience", std::move(salience)},
      {"ne_inventory", std::move(ne)},
      {"compounds", std::move(compounds)},
      {"candidates", std::move(candidates)},
      {"filters",
       {{"stop_words", profile.filters.stop_words},
        {"math_words", profile.filters.math_words},
        {"offensive_words", profile.filters.offensive_words}}},
  };
  out << doc.dump(2) << '\n';
}

ThemeProfile read_profile(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid theme profile JSON: ") + e.what());
  }
  try {
    ThemeProfile p;
    p.version = doc.at("version").get<int>();
    if (p.version != ThemeProfile::kFormatVersion) {
      throw Error("unsupported theme profile version " +
                  std::to_string(p.version));
    }
    p.name = doc.at("name").get<std::string>();
    p.params.k_max = doc.at("params").at("k_max").get<std::size_t>();
    p.params.max_compound_len = doc.at("params").at("K").get<std::size_t>();
    for (const auto& [cls, table] : doc.at("salience").items()) {
      p.salience[class_from_json(cls)] =
          table.get<std::map<std::string, double>>();
    }
    for (const json& e : doc.at("ne_inventory")) {
      p.ne_inventory.push_back({e.at("tokens").get<std::vector<std::string>>(),
                                e.at("tag").get<std::string>(),
                                e.at("count").get<std::size_t>()});
    }
    for (const json& c : doc.at("compounds")) {
      p.compounds.push_back(candidate_from_json(c));
    }
    for (const auto& [cls, list] : doc.at("candidates").items()) {
      auto& out = p.candidates[class_from_json(cls)];
      for (const json& c : list) out.push_back(candidate_from_json(c));
    }
    if (doc.contains("filters")) {
      const json& f = doc.at("filters");
      p.filters.stop_words = f.value("stop_words", std::set<std::string>{});
      p.filters.math_words = f.value("math_words", std::set<std::string>{});
      p.filters.offensive_words =
          f.value("offensive_words", std::set<std::string>{});
    }
    return p;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed theme profile: ") + e.what());
  }
}

ThemeProfile read_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open theme profile: " + path.string());
  return read_profile(in);
}

}  // namespace rewriter
