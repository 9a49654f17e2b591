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

#ifndef REWRITER_CORPUS_HPP_
#define REWRITER_CORPUS_HPP_

// Annotated stories read from CoNLL-U, content-word marking and the
// grouping of content tokens into rewrite units.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rewriter {

enum class LexClass { kNoun, kPropn, kVerb, kAdj, kNum, kFunc };

std::string_view to_string(LexClass c);
// Accepts "NOUN", "PROPN", "VERB", "ADJ", "NUM", "FUNC".
std::optional<LexClass> lex_class_from_string(std::string_view s);
// UPOS tag to lexical class; anything outside the content classes and NUM
// becomes kFunc.
LexClass lex_class_from_upos(std::string_view upos);

inline bool is_content_class(LexClass c) {
  return c == LexClass::kNoun || c == LexClass::kPropn ||
         c == LexClass::kVerb || c == LexClass::kAdj;
}

// Term lists applied when deciding what may be rewritten. All entries are
// stored lowercase.
struct FilterLists {
  std::set<std::string> stop_words;
  std::set<std::string> math_words;
  std::set<std::string> offensive_words;

  // Case-insensitive membership in stop or math words.
  bool blocks_source(std::string_view word) const;
  // Case-insensitive membership in any of the three lists.
  bool blocks_candidate(std::string_view word) const;
};

// One term per line, '#' starts a comment; blank lines ignored.
std::set<std::string> load_term_list(const std::filesystem::path& path);

struct Token {
  int index = 0;  // 1-based position in the sentence
  std::string surface;
  std::string lemma;
  std::string upos;  // raw UPOS column, kept for serialization
  LexClass pos = LexClass::kFunc;
  std::string ne_tag;  // empty when the token is not a named entity
  bool is_content = false;
  bool space_after = true;
};

struct DependencyArc {
  int head = 0;  // 0 = root
  int dependent = 0;
  std::string label;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<DependencyArc> arcs;  // arcs[i].dependent == i + 1
};

struct TokenPosition {
  std::size_t sentence = 0;
  std::size_t token = 0;  // 0-based offset into Sentence::tokens

  auto operator<=>(const TokenPosition&) const = default;
};

struct Story {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<TokenPosition> content_positions;

  const Token& token(TokenPosition p) const {
    return sentences[p.sentence].tokens[p.token];
  }
};

struct ConlluOptions {
  std::string ne_misc_key = "NER";
};

std::vector<Story> read_conllu(std::istream& in, std::string_view source_name,
                               const ConlluOptions& options = {});
std::vector<Story> read_conllu(const std::filesystem::path& path,
                               const ConlluOptions& options = {});

// Writes the fields read_conllu consumes; unused columns become "_".
void write_conllu(std::ostream& out, const std::vector<Story>& stories,
                  const ConlluOptions& options = {});

// Recomputes is_content and content_positions. With default filters every
// NOUN/PROPN/VERB/ADJ token is content.
Story mark_content(Story story, const FilterLists& filters = {});

// A rewrite unit is one content token or a named-entity span treated as a
// single replaceable item. The head is the last token of the span.
struct RewriteUnit {
  std::size_t sentence = 0;
  std::size_t first = 0;  // token offsets, inclusive
  std::size_t last = 0;
  LexClass lex_class = LexClass::kNoun;  // kPropn for named entities

  TokenPosition head() const { return {sentence, last}; }
  bool covers(TokenPosition p) const {
    return p.sentence == sentence && p.token >= first && p.token <= last;
  }
};

bool is_named_entity(const Token& token);

// Units in document order. Contiguous content tokens with the same non-empty
// NE tag (or contiguous untagged PROPN) collapse into one unit.
std::vector<RewriteUnit> collect_units(const Story& story);

}  // namespace rewriter

#endif  // REWRITER_CORPUS_HPP_
