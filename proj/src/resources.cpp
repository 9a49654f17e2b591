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

#include "rewriter/resources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>

#include "rewriter/error.hpp"
#include "rewriter/text.hpp"

namespace rewriter {

namespace {

bool parse_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_size(std::string_view s, std::size_t& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open_or_throw(const std::filesystem::path& path,
                            std::string_view what) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + std::string(what) + ": " + path.string());
  return in;
}

// Non-empty, non-comment lines of a TSV file with their line numbers.
template <typename Fn>
void for_each_tsv_row(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    fn(split(line, '\t'), line_no);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Embeddings

EmbeddingTable::EmbeddingTable(std::vector<std::string> words,
                               Eigen::MatrixXd vectors)
    : vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(words.size()) != vectors_.rows()) {
    throw ContractViolation("embedding word count does not match rows");
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    index_.emplace(std::move(words[i]), static_cast<Eigen::Index>(i));
  }
}

std::optional<Eigen::Index> EmbeddingTable::find(std::string_view word) const {
  if (auto it = index_.find(to_lower(word)); it != index_.end()) return it->second;
  if (auto it = index_.find(std::string(word)); it != index_.end()) return it->second;
  return std::nullopt;
}

EmbeddingTable load_embeddings(std::istream& in, std::string_view source_name) {
  const std::string source(source_name);
  std::vector<std::string> words;
  std::vector<double> values;
  Eigen::Index dim = -1;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> fields = split_whitespace(trim(line));
    if (fields.empty()) continue;
    if (first) {
      first = false;
      std::size_t count = 0;
      std::size_t header_dim = 0;
      if (fields.size() == 2 && parse_size(fields[0], count) &&
          parse_size(fields[1], header_dim)) {
        dim = static_cast<Eigen::Index>(header_dim);
        continue;
      }
    }
    const auto row_dim = static_cast<Eigen::Index>(fields.size()) - 1;
    if (row_dim < 1) throw ParseError(source, line_no, "vector has no values");
    if (dim < 0) dim = row_dim;
    if (row_dim != dim) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(dim) + " values, got " +
                           std::to_string(row_dim));
    }
    words.push_back(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      if (!parse_double(fields[i], v)) {
        throw ParseError(source, line_no, "invalid number '" + fields[i] + "'");
      }
      values.push_back(v);
    }
  }
  if (dim < 0) dim = 0;
  // Duplicates: keep the first occurrence only.
  std::vector<std::string> unique_words;
  std::vector<std::size_t> rows;
  std::unordered_map<std::string, bool> seen;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (seen.emplace(words[i], true).second) {
      unique_words.push_back(words[i]);
      rows.push_back(i);
    }
  }
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      matrix(static_cast<Eigen::Index>(r), c) =
          values[rows[r] * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)];
    }
  }
  return EmbeddingTable(std::move(unique_words), std::move(matrix));
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  auto in = open_or_throw(path, "embeddings");
  return load_embeddings(in, path.filename().string());
}

double cosine(std::string_view a, std::string_view b,
              const EmbeddingTable& table) {
  const auto ia = table.find(a);
  const auto ib = table.find(b);
  if (!ia || !ib) return 0.0;
  return cosine(table.row(*ia).transpose(), table.row(*ib).transpose());
}

// ---------------------------------------------------------------------------
// Dependency LM

namespace {

std::string key2(std::string_view a, std::string_view b) {
  std::string k;
  k.reserve(a.size() + b.size() + 1);
  k.append(a).push_back('\t');
  k.append(b);
  return k;
}

std::string key3(std::string_view a, std::string_view b, std::string_view c) {
  std::string k = key2(a, b);
  k.push_back('\t');
  k.append(c);
  return k;
}

template <typename Map>
std::size_t lookup(const Map& m, const std::string& key) {
  const auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

void DepLM::add(std::string_view head, std::string_view label,
                std::string_view dep, std::size_t count) {
  const std::string h = to_lower(head);
  const std::string d = to_lower(dep);
  triples_[key3(h, label, d)] += count;
  contexts_[key2(h, label)] += count;
  pairs_[key2(label, d)] += count;
  labels_[std::string(label)] += count;
  deps_[d] += count;
  total_ += count;
}

std::size_t DepLM::triple_count(std::string_view head, std::string_view label,
                                std::string_view dep) const {
  return lookup(triples_, key3(to_lower(head), label, to_lower(dep)));
}

std::size_t DepLM::context_count(std::string_view head,
                                 std::string_view label) const {
  return lookup(contexts_, key2(to_lower(head), label));
}

std::size_t DepLM::pair_count(std::string_view label, std::string_view dep) const {
  return lookup(pairs_, key2(label, to_lower(dep)));
}

std::size_t DepLM::label_count(std::string_view label) const {
  return lookup(labels_, std::string(label));
}

std::size_t DepLM::dep_count(std::string_view dep) const {
  return lookup(deps_, to_lower(dep));
}

double DepLM::loglik(std::string_view head, std::string_view label,
                     std::string_view dep) const {
  const std::size_t tri = triple_count(head, label, dep);
  if (tri > 0) {
    return std::log(static_cast<double>(tri) /
                    static_cast<double>(context_count(head, label)));
  }
  const std::size_t pair = pair_count(label, dep);
  if (pair > 0) {
    return std::log(kBackoff) +
           std::log(static_cast<double>(pair) /
                    static_cast<double>(label_count(label)));
  }
  const double denom =
      static_cast<double>(std::max<std::size_t>(total_ + deps_.size(), 1));
  return 2.0 * std::log(kBackoff) +
         std::log(static_cast<double>(dep_count(dep) + 1) / denom);
}

DepLM train_deplm(std::istream& in, std::string_view source_name) {
  const std::string source(source_name);
  DepLM lm;
  for_each_tsv_row(in, [&](const std::vector<std::string>& f, std::size_t line_no) {
    if (f.size() != 4) {
      throw ParseError(source, line_no,
                       "expected 4 tab-separated fields (head, label, dep, count)");
    }
    if (f[0].empty() || f[1].empty() || f[2].empty()) {
      throw ParseError(source, line_no, "empty field");
    }
    std::size_t count = 0;
    if (!parse_size(f[3], count) || count < 1) {
      throw ParseError(source, line_no, "count must be an integer >= 1, got '" +
                                            f[3] + "'");
    }
    lm.add(f[0], f[1], f[2], count);
  });
  return lm;
}

DepLM train_deplm(const std::filesystem::path& path) {
  auto in = open_or_throw(path, "dependency triple counts");
  return train_deplm(in, path.filename().string());
}

// ---------------------------------------------------------------------------
// Taxonomy

std::optional<Taxonomy::ConceptId> Taxonomy::find(
    std::string_view concept_name) const {
  const auto it = by_name_.find(std::string(concept_name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<Taxonomy::ConceptId> Taxonomy::synsets(std::string_view lemma,
                                                   LexClass cls) const {
  const auto it = lemma_index_.find(key2(to_lower(lemma), to_string(cls)));
  return it == lemma_index_.end() ? std::vector<ConceptId>{} : it->second;
}

std::vector<Taxonomy::ConceptId> Taxonomy::synsets_any_class(
    std::string_view lemma) const {
  const auto it = lemma_any_index_.find(to_lower(lemma));
  return it == lemma_any_index_.end() ? std::vector<ConceptId>{} : it->second;
}

std::optional<Taxonomy::ConceptId> Taxonomy::lowest_common_subsumer(
    ConceptId a, ConceptId b) const {
  const auto& aa = ancestors_[a];
  const auto& bb = ancestors_[b];
  std::optional<ConceptId> best;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < aa.size() && j < bb.size()) {
    if (aa[i] < bb[j]) {
      ++i;
    } else if (bb[j] < aa[i]) {
      ++j;
    } else {
      if (!best || ic_[aa[i]] > ic_[*best]) best = aa[i];
      ++i;
      ++j;
    }
  }
  return best;
}

Taxonomy build_taxonomy(const TaxonomyBuilderInput& input) {
  Taxonomy tax;
  const auto intern = [&tax](const std::string& name) {
    const auto [it, inserted] = tax.by_name_.emplace(name, tax.names_.size());
    if (inserted) {
      tax.names_.push_back(name);
      tax.parents_.emplace_back();
    }
    return it->second;
  };
  for (const auto& [child, parent] : input.edges) {
    const auto c = intern(child);
    const auto p = intern(parent);
    if (c == p) throw Error("taxonomy self-loop at concept '" + child + "'");
    auto& ps = tax.parents_[c];
    if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
  }
  for (const auto& [lemma, cls, concept_name] : input.lemmas) {
    if (!input.edges.empty() && !tax.by_name_.count(concept_name)) {
      throw Error("lemma map references unknown concept '" + concept_name + "'");
    }
    const auto id = intern(concept_name);
    auto& bucket = tax.lemma_index_[key2(to_lower(lemma), cls)];
    if (std::find(bucket.begin(), bucket.end(), id) == bucket.end()) {
      bucket.push_back(id);
    }
    auto& any = tax.lemma_any_index_[to_lower(lemma)];
    if (std::find(any.begin(), any.end(), id) == any.end()) any.push_back(id);
  }
  for (auto& [key, ids] : tax.lemma_index_) std::sort(ids.begin(), ids.end());
  for (auto& [key, ids] : tax.lemma_any_index_) std::sort(ids.begin(), ids.end());

  const std::size_t n = tax.names_.size();
  if (n == 0) throw Error("taxonomy has no concepts");

  // Topological order, parents before children.
  std::vector<std::vector<Taxonomy::ConceptId>> children(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    pending[c] = tax.parents_[c].size();
    for (const auto p : tax.parents_[c]) children[p].push_back(c);
  }
  std::deque<Taxonomy::ConceptId> queue;
  std::vector<Taxonomy::ConceptId> roots;
  for (std::size_t c = 0; c < n; ++c) {
    if (pending[c] == 0) {
      queue.push_back(c);
      roots.push_back(c);
    }
  }
  std::vector<Taxonomy::ConceptId> order;
  while (!queue.empty()) {
    const auto c = queue.front();
    queue.pop_front();
    order.push_back(c);
    for (const auto child : children[c]) {
      if (--pending[child] == 0) queue.push_back(child);
    }
  }
  if (order.size() != n) throw Error("taxonomy contains a cycle");
  if (roots.size() != 1) {
    throw Error("taxonomy must have a single root, found " +
                std::to_string(roots.size()) + " (e.g. '" +
                tax.names_[roots[0]] + "', '" + tax.names_[roots[1]] + "')");
  }
  tax.root_ = roots[0];

  tax.ancestors_.assign(n, {});
  for (const auto c : order) {
    auto& anc = tax.ancestors_[c];
    anc.push_back(c);
    for (const auto p : tax.parents_[c]) {
      anc.insert(anc.end(), tax.ancestors_[p].begin(), tax.ancestors_[p].end());
    }
    std::sort(anc.begin(), anc.end());
    anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
  }

  std::vector<double> counts(n, input.frequencies ? 0.0 : 1.0);
  if (input.frequencies) {
    for (const auto& [name, count] : *input.frequencies) {
      const auto it = tax.by_name_.find(name);
      if (it != tax.by_name_.end()) counts[it->second] += count;
    }
  }
  std::vector<double> cumulative(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto a : tax.ancestors_[c]) cumulative[a] += counts[c];
  }
  const double total = cumulative[tax.root_];
  tax.ic_.assign(n, 0.0);
  double max_nonzero = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (cumulative[c] > 0.0 && total > 0.0) {
      tax.ic_[c] = c == tax.root_ ? 0.0 : -std::log(cumulative[c] / total);
      max_nonzero = std::max(max_nonzero, tax.ic_[c]);
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!(cumulative[c] > 0.0) && total > 0.0) tax.ic_[c] = max_nonzero;
  }
  tax.ic_max_ = *std::max_element(tax.ic_.begin(), tax.ic_.end());
  return tax;
}

Taxonomy load_taxonomy(const std::filesystem::path& edges_path,
                       const std::filesystem::path& lemma_map_path,
                       const std::optional<std::filesystem::path>& freq_path) {
  TaxonomyBuilderInput input;
  {
    auto in = open_or_throw(edges_path, "taxonomy edges");
    const std::string source = edges_path.filename().string();
    for_each_tsv_row(in, [&](const std::vector<std::string>& f, std::size_t line_no) {
      if (f.size() != 2 || f[0].empty() || f[1].empty()) {
        throw ParseError(source, line_no, "expected 'child \\t parent'");
      }
      input.edges.emplace_back(f[0], f[1]);
    });
  }
  {
    auto in = open_or_throw(lemma_map_path, "taxonomy lemma map");
    const std::string source = lemma_map_path.filename().string();
    for_each_tsv_row(in, [&](const std::vector<std::string>& f, std::size_t line_no) {
      if (f.size() != 3 || f[0].empty() || f[2].empty()) {
        throw ParseError(source, line_no, "expected 'lemma \\t class \\t concept'");
      }
      input.lemmas.emplace_back(f[0], f[1], f[2]);
    });
  }
  if (freq_path) {
    auto in = open_or_throw(*freq_path, "taxonomy frequencies");
    const std::string source = freq_path->filename().string();
    input.frequencies.emplace();
    for_each_tsv_row(in, [&](const std::vector<std::string>& f, std::size_t line_no) {
      double count = 0.0;
      if (f.size() != 2 || !parse_double(f[1], count) || count < 0.0) {
        throw ParseError(source, line_no, "expected 'concept \\t count' with count >= 0");
      }
      input.frequencies->emplace_back(f[0], count);
    });
  }
  return build_taxonomy(input);
}

double resnik(std::string_view lemma1, LexClass class1, std::string_view lemma2,
              LexClass class2, const Taxonomy& tax) {
  if (tax.size() == 0 || !(tax.ic_max() > 0.0)) return 0.0;
  const auto s1 = tax.synsets(lemma1, class1);
  const auto s2 = tax.synsets(lemma2, class2);
  double best = 0.0;
  for (const auto a : s1) {
    for (const auto b : s2) {
      if (const auto lcs = tax.lowest_common_subsumer(a, b)) {
        best = std::max(best, tax.ic(*lcs));
      }
    }
  }
  return best / tax.ic_max();
}

}  // namespace rewriter
