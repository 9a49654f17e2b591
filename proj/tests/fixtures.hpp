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

#ifndef REWRITER_TESTS_FIXTURES_HPP_
#define REWRITER_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rewriter/corpus.hpp"
#include "rewriter/resources.hpp"
#include "rewriter/theme.hpp"

namespace rewriter::testing {

inline std::string to_lower_ascii(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

struct Tok {
  std::string surface;
  std::string upos;
  int head = 0;
  std::string label = "dep";
  std::string ner = "";
  std::string lemma = "";  // defaults to the lowercased surface
};

inline Story make_story(const std::vector<std::vector<Tok>>& sentences,
                        const FilterLists& filters = {}, std::string id = "toy") {
  Story story;
  story.id = std::move(id);
  for (const auto& spec : sentences) {
    Sentence s;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const Tok& t = spec[i];
      Token token;
      token.index = static_cast<int>(i) + 1;
      token.surface = t.surface;
      token.lemma = t.lemma.empty() ? to_lower_ascii(t.surface) : t.lemma;
      token.upos = t.upos;
      token.pos = lex_class_from_upos(t.upos);
      token.ne_tag = t.ner;
      s.tokens.push_back(token);
      s.arcs.push_back({t.head, token.index, t.label});
    }
    story.sentences.push_back(std::move(s));
  }
  return mark_content(std::move(story), filters);
}

inline EmbeddingTable make_embeddings(
    const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  std::vector<std::string> words;
  const Eigen::Index dim = rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].second.size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    words.push_back(rows[r].first);
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(static_cast<Eigen::Index>(r), c) = rows[r].second[static_cast<std::size_t>(c)];
    }
  }
  return EmbeddingTable(std::move(words), std::move(m));
}

inline RewriteCandidate candidate(std::vector<std::string> tokens, LexClass cls,
                                  double salience, std::string head_lemma = "") {
  RewriteCandidate c;
  c.tokens = std::move(tokens);
  c.head_lemma = head_lemma.empty() ? to_lower_ascii(c.tokens.back()) : head_lemma;
  c.lex_class = cls;
  c.salience = salience;
  return c;
}

}  // namespace rewriter::testing

#endif  // REWRITER_TESTS_FIXTURES_HPP_
