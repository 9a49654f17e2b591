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

#include "rewriter/corpus.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "rewriter/error.hpp"
#include "rewriter/text.hpp"

namespace rewriter {

std::string_view to_string(LexClass c) {
  switch (c) {
    case LexClass::kNoun: return "NOUN";
    case LexClass::kPropn: return "PROPN";
    case LexClass::kVerb: return "VERB";
    case LexClass::kAdj: return "ADJ";
    case LexClass::kNum: return "NUM";
    case LexClass::kFunc: return "FUNC";
  }
  return "FUNC";
}

std::optional<LexClass> lex_class_from_string(std::string_view s) {
  if (s == "NOUN") return LexClass::kNoun;
  if (s == "PROPN") return LexClass::kPropn;
  if (s == "VERB") return LexClass::kVerb;
  if (s == "ADJ") return LexClass::kAdj;
  if (s == "NUM") return LexClass::kNum;
  if (s == "FUNC") return LexClass::kFunc;
  return std::nullopt;
}

LexClass lex_class_from_upos(std::string_view upos) {
  if (upos == "NOUN") return LexClass::kNoun;
  if (upos == "PROPN") return LexClass::kPropn;
  if (upos == "VERB") return LexClass::kVerb;
  if (upos == "ADJ") return LexClass::kAdj;
  if (upos == "NUM") return LexClass::kNum;
  return LexClass::kFunc;
}

bool FilterLists::blocks_source(std::string_view word) const {
  const std::string w = to_lower(word);
  return stop_words.count(w) > 0 || math_words.count(w) > 0;
}

bool FilterLists::blocks_candidate(std::string_view word) const {
  const std::string w = to_lower(word);
  return blocks_source(w) || offensive_words.count(w) > 0;
}

std::set<std::string> load_term_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open term list: " + path.string());
  std::set<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (!view.empty()) terms.insert(to_lower(view));
  }
  return terms;
}

namespace {

int parse_int(std::string_view field, std::string_view source,
              std::size_t line_no, std::string_view what) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(std::string(source), line_no,
                     "invalid " + std::string(what) + " '" +
                         std::string(field) + "'");
  }
  return value;
}

struct MiscFields {
  std::string ne_tag;
  bool space_after = true;
};

MiscFields parse_misc(std::string_view misc, std::string_view ne_key) {
  MiscFields fields;
  if (misc == "_") return fields;
  for (const std::string& item : split(misc, '|')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    const std::string_view key(item.data(), eq);
    const std::string_view value(item.data() + eq + 1, item.size() - eq - 1);
    if (key == ne_key && value != "O" && !value.empty()) {
      fields.ne_tag = std::string(value);
    } else if (key == "SpaceAfter" && value == "No") {
      fields.space_after = false;
    }
  }
  return fields;
}

class ConlluReader {
 public:
  ConlluReader(std::string_view source, const ConlluOptions& options)
      : source_(source), options_(options) {}

  void consume(const std::string& raw, std::size_t line_no) {
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) {
      finish_sentence(line_no);
      return;
    }
    if (line.front() == '#') {
      comment(line, line_no);
      return;
    }
    token_line(line, line_no);
  }

  std::vector<Story> finish(std::size_t line_no) {
    finish_sentence(line_no);
    finish_story();
    return std::move(stories_);
  }

 private:
  void comment(std::string_view line, std::size_t line_no) {
    std::string_view body = trim(line.substr(1));
    if (body.substr(0, 6) != "newdoc") return;
    finish_sentence(line_no);
    finish_story();
    pending_id_.clear();
    body.remove_prefix(6);
    if (const auto eq = body.find('='); eq != std::string_view::npos) {
      pending_id_ = std::string(trim(body.substr(eq + 1)));
    }
    doc_open_ = true;
  }

  void token_line(std::string_view line, std::size_t line_no) {
    const std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(source_, line_no,
                       "expected 10 tab-separated columns, got " +
                           std::to_string(cols.size()));
    }
    // Multi-word ranges and empty nodes are skipped.
    if (cols[0].find_first_of("-.") != std::string::npos) return;
    const int id = parse_int(cols[0], source_, line_no, "ID");
    if (id != static_cast<int>(sentence_.tokens.size()) + 1) {
      throw ParseError(source_, line_no,
                       "token ID " + cols[0] + " out of sequence");
    }
    if (cols[6] == "_" || cols[6].empty()) {
      throw ParseError(source_, line_no, "missing HEAD");
    }
    if (cols[7] == "_" || cols[7].empty()) {
      throw ParseError(source_, line_no, "missing DEPREL");
    }
    const int head = parse_int(cols[6], source_, line_no, "HEAD");
    if (head < 0) throw ParseError(source_, line_no, "negative HEAD");
    if (head == id) throw ParseError(source_, line_no, "self-loop arc");

    const MiscFields misc = parse_misc(cols[9], options_.ne_misc_key);
    Token token;
    token.index = id;
    token.surface = cols[1];
    token.lemma = cols[2] == "_" ? cols[1] : cols[2];
    token.upos = cols[3];
    token.pos = lex_class_from_upos(cols[3]);
    token.ne_tag = misc.ne_tag;
    token.space_after = misc.space_after;
    sentence_.tokens.push_back(std::move(token));
    sentence_.arcs.push_back({head, id, cols[7]});
    head_lines_.push_back(line_no);
  }

  void finish_sentence(std::size_t line_no) {
    if (sentence_.tokens.empty()) return;
    const int n = static_cast<int>(sentence_.tokens.size());
    for (std::size_t i = 0; i < sentence_.arcs.size(); ++i) {
      if (sentence_.arcs[i].head > n) {
        throw ParseError(source_, head_lines_[i],
                         "HEAD " + std::to_string(sentence_.arcs[i].head) +
                             " beyond sentence length " + std::to_string(n));
      }
    }
    (void)line_no;
    story_.sentences.push_back(std::move(sentence_));
    sentence_ = {};
    head_lines_.clear();
    doc_open_ = true;
  }

  void finish_story() {
    if (!doc_open_ || story_.sentences.empty()) {
      story_ = {};
      return;
    }
    story_.id = pending_id_.empty()
                    ? source_ + "#" + std::to_string(stories_.size() + 1)
                    : pending_id_;
    stories_.push_back(mark_content(std::move(story_)));
    story_ = {};
  }

  std::string source_;
  ConlluOptions options_;
  std::vector<Story> stories_;
  Story story_;
  Sentence sentence_;
  std::vector<std::size_t> head_lines_;
  std::string pending_id_;
  bool doc_open_ = false;
};

}  // namespace

std::vector<Story> read_conllu(std::istream& in, std::string_view source_name,
                               const ConlluOptions& options) {
  ConlluReader reader(source_name, options);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) reader.consume(line, ++line_no);
  return reader.finish(line_no);
}

std::vector<Story> read_conllu(const std::filesystem::path& path,
                               const ConlluOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open CoNLL-U file: " + path.string());
  return read_conllu(in, path.filename().string(), options);
}

void write_conllu(std::ostream& out, const std::vector<Story>& stories,
                  const ConlluOptions& options) {
  for (const Story& story : stories) {
    out << "# newdoc id = " << story.id << '\n';
    for (const Sentence& sentence : story.sentences) {
      for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
        const Token& t = sentence.tokens[i];
        const DependencyArc& arc = sentence.arcs[i];
        std::string misc;
        if (!t.ne_tag.empty()) misc = options.ne_misc_key + "=" + t.ne_tag;
        if (!t.space_after) {
          misc += misc.empty() ? "SpaceAfter=No" : "|SpaceAfter=No";
        }
        out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t'
            << (t.upos.empty() ? std::string(to_string(t.pos)) : t.upos)
            << "\t_\t_\t" << arc.head << '\t' << arc.label << "\t_\t"
            << (misc.empty() ? "_" : misc) << '\n';
      }
      out << '\n';
    }
  }
}

Story mark_content(Story story, const FilterLists& filters) {
  story.content_positions.clear();
  for (std::size_t s = 0; s < story.sentences.size(); ++s) {
    auto& tokens = story.sentences[s].tokens;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      Token& token = tokens[t];
      token.is_content = is_content_class(token.pos) &&
                         !filters.blocks_source(token.surface) &&
                         !filters.blocks_source(token.lemma);
      if (token.is_content) story.content_positions.push_back({s, t});
    }
  }
  return story;
}

bool is_named_entity(const Token& token) {
  return token.pos == LexClass::kPropn || !token.ne_tag.empty();
}

std::vector<RewriteUnit> collect_units(const Story& story) {
  std::vector<RewriteUnit> units;
  for (std::size_t s = 0; s < story.sentences.size(); ++s) {
    const auto& tokens = story.sentences[s].tokens;
    std::size_t t = 0;
    while (t < tokens.size()) {
      const Token& token = tokens[t];
      if (!token.is_content) {
        ++t;
        continue;
      }
      if (!is_named_entity(token)) {
        units.push_back({s, t, t, token.pos});
        ++t;
        continue;
      }
      std::size_t end = t;
      while (end + 1 < tokens.size()) {
        const Token& next = tokens[end + 1];
        if (!next.is_content || !is_named_entity(next) ||
            next.ne_tag != token.ne_tag) {
          break;
        }
        ++end;
      }
      units.push_back({s, t, end, LexClass::kPropn});
      t = end + 1;
    }
  }
  return units;
}

}  // namespace rewriter
