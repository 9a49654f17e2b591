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

#ifndef REWRITER_THEME_HPP_
#define REWRITER_THEME_HPP_

// Theme profiles: tf-idf and named-entity salience, noun compounds and the
// ranked per-class candidate lists the decoder draws from.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rewriter/corpus.hpp"

namespace rewriter {

struct RewriteCandidate {
  std::vector<std::string> tokens;  // 1..K surface tokens
  std::string head_lemma;
  LexClass lex_class = LexClass::kNoun;
  double salience = 0.0;

  const std::string& head_surface() const { return tokens.back(); }
  std::string text() const;

  bool operator==(const RewriteCandidate&) const = default;
};

struct NamedEntityEntry {
  std::vector<std::string> tokens;
  std::string tag;
  std::size_t count = 0;

  bool operator==(const NamedEntityEntry&) const = default;
};

// Raw counts behind the tf-idf salience.
struct TermStats {
  // class -> lemma -> occurrences in the theme corpus
  std::map<LexClass, std::map<std::string, std::size_t>> tf;
  // lemma -> number of background documents containing it
  std::map<std::string, std::size_t> df;
  std::size_t background_docs = 0;
  // (class, lemma) -> surface -> occurrences, for choosing the output form
  std::map<LexClass, std::map<std::string, std::map<std::string, std::size_t>>>
      surfaces;
};

// Counts content (NOUN, VERB, ADJ) lemmas; named entities are counted by
// extract_compounds instead. Lemmas are case-folded.
TermStats term_stats(const std::vector<Story>& theme_corpus,
                     const std::vector<Story>& background);

double raw_tfidf(std::size_t tf, std::size_t df, std::size_t docs);
// raw_tfidf / max_raw. Throws DegenerateThemeError if max_raw <= 0.
double salience_tfidf(std::size_t tf, std::size_t df, std::size_t docs,
                      double max_raw);
// 1 - 1/count. Throws Error if count == 0.
double salience_ne(std::size_t count);

struct CompoundSet {
  std::vector<RewriteCandidate> compounds;     // multi-token noun compounds
  std::vector<NamedEntityEntry> ne_inventory;  // every NE span, any length
};

// Noun compounds of length 2..max_len seen at least twice, plus every NE
// span. noun_salience maps a head lemma to its NOUN salience (0 if absent).
CompoundSet extract_compounds(
    const std::vector<Story>& theme_corpus, std::size_t max_len,
    const std::map<std::string, double>& noun_salience = {});

struct ThemeParams {
  std::size_t k_max = 50;
  std::size_t max_compound_len = 3;
};

struct ThemeProfile {
  static constexpr int kFormatVersion = 1;

  std::string name;
  int version = kFormatVersion;
  ThemeParams params;
  std::map<LexClass, std::map<std::string, double>> salience;
  std::vector<NamedEntityEntry> ne_inventory;
  std::vector<RewriteCandidate> compounds;
  // NOUN (single nouns and compounds), VERB, ADJ and PROPN (named entities),
  // each sorted by salience descending, then by text ascending.
  std::map<LexClass, std::vector<RewriteCandidate>> candidates;
  FilterLists filters;

  const std::vector<RewriteCandidate>& candidates_for(LexClass c) const;
};

ThemeProfile build_profile(const std::string& name,
                           const std::vector<Story>& theme_corpus,
                           const std::vector<Story>& background,
                           const FilterLists& filters,
                           const ThemeParams& params = {});

// Versioned JSON with sorted keys; identical profiles serialize to identical
// bytes.
void write_profile(std::ostream& out, const ThemeProfile& profile);
ThemeProfile read_profile(std::istream& in);
ThemeProfile read_profile(const std::filesystem::path& path);

}  // namespace rewriter

#endif  // REWRITER_THEME_HPP_
