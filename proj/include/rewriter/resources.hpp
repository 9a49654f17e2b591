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

#ifndef REWRITER_RESOURCES_HPP_
#define REWRITER_RESOURCES_HPP_

// Read-only linguistic resources: word embeddings, a dependency-triple
// language model with stupid backoff, and an is-a taxonomy with information
// content for Resnik similarity.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rewriter/corpus.hpp"

namespace rewriter {

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  // rows of `vectors` are aligned with `words`; duplicate words keep the
  // first row.
  EmbeddingTable(std::vector<std::string> words, Eigen::MatrixXd vectors);

  Eigen::Index dim() const { return vectors_.cols(); }
  std::size_t size() const { return index_.size(); }

  // Case-folded lookup first, then the exact form. Empty when OOV.
  std::optional<Eigen::Index> find(std::string_view word) const;
  // Row view for an in-vocabulary index.
  auto row(Eigen::Index i) const { return vectors_.row(i); }

 private:
  Eigen::MatrixXd vectors_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

// Text format: optional "count dim" header, then "word v1 ... vd" lines.
EmbeddingTable load_embeddings(std::istream& in, std::string_view source_name);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// Cosine of two dense vectors; 0 when either has zero norm.
template <typename A, typename B>
double cosine(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

// Word-level cosine; 0 for out-of-vocabulary words.
double cosine(std::string_view a, std::string_view b,
              const EmbeddingTable& table);

class DepLM {
 public:
  static constexpr double kBackoff = 0.4;

  // Words are case-folded; labels are kept verbatim.
  void add(std::string_view head, std::string_view label, std::string_view dep,
           std::size_t count);

  std::size_t triple_count(std::string_view head, std::string_view label,
                           std::string_view dep) const;
  std::size_t context_count(std::string_view head, std::string_view label) const;
  std::size_t pair_count(std::string_view label, std::string_view dep) const;
  std::size_t label_count(std::string_view label) const;
  std::size_t dep_count(std::string_view dep) const;
  std::size_t total() const { return total_; }
  std::size_t dep_vocabulary() const { return deps_.size(); }

  // Log-probability of `dep` attaching to `head` with `label`, conditioned
  // on (head, label) and backing off to (label) and then to a smoothed
  // unigram over dependents.
  double loglik(std::string_view head, std::string_view label,
                std::string_view dep) const;

 private:
  std::unordered_map<std::string, std::size_t> triples_;
  std::unordered_map<std::string, std::size_t> contexts_;
  std::unordered_map<std::string, std::size_t> pairs_;
  std::unordered_map<std::string, std::size_t> labels_;
  std::unordered_map<std::string, std::size_t> deps_;
  std::size_t total_ = 0;
};

// TSV "head \t label \t dep \t count" with count >= 1.
DepLM train_deplm(std::istream& in, std::string_view source_name);
DepLM train_deplm(const std::filesystem::path& path);

inline double dep_loglik(std::string_view head, std::string_view label,
                         std::string_view dep, const DepLM& lm) {
  return lm.loglik(head, label, dep);
}

struct TaxonomyBuilderInput {
  std::vector<std::pair<std::string, std::string>> edges;  // child, parent
  // lemma, class name, concept
  std::vector<std::tuple<std::string, std::string, std::string>> lemmas;
  // concept -> count; when absent every concept counts 1
  std::optional<std::vector<std::pair<std::string, double>>> frequencies;
};

class Taxonomy;
// Validates (acyclic, single root) and computes information content.
Taxonomy build_taxonomy(const TaxonomyBuilderInput& input);

class Taxonomy {
 public:
  using ConceptId = std::size_t;

  std::size_t size() const { return names_.size(); }
  ConceptId root() const { return root_; }
  const std::string& name(ConceptId c) const { return names_[c]; }
  std::optional<ConceptId> find(std::string_view concept_name) const;
  const std::vector<ConceptId>& parents(ConceptId c) const { return parents_[c]; }
  // The concept itself and every ancestor, sorted by id.
  const std::vector<ConceptId>& ancestors(ConceptId c) const {
    return ancestors_[c];
  }
  double ic(ConceptId c) const { return ic_[c]; }
  double ic_max() const { return ic_max_; }

  // Concepts a (lemma, class) pair maps to; lemma is case-folded.
  std::vector<ConceptId> synsets(std::string_view lemma, LexClass cls) const;
  // Concepts for a lemma under any class.
  std::vector<ConceptId> synsets_any_class(std::string_view lemma) const;

  // Highest-IC common ancestor; nullopt only if none exists.
  std::optional<ConceptId> lowest_common_subsumer(ConceptId a, ConceptId b) const;

 private:
  friend Taxonomy build_taxonomy(const TaxonomyBuilderInput& input);
  std::vector<std::string> names_;
  std::unordered_map<std::string, ConceptId> by_name_;
  std::vector<std::vector<ConceptId>> parents_;
  std::vector<std::vector<ConceptId>> ancestors_;
  std::vector<double> ic_;
  double ic_max_ = 0.0;
  ConceptId root_ = 0;
  std::unordered_map<std::string, std::vector<ConceptId>> lemma_index_;
  std::unordered_map<std::string, std::vector<ConceptId>> lemma_any_index_;
};


Taxonomy load_taxonomy(const std::filesystem::path& edges_path,
                       const std::filesystem::path& lemma_map_path,
                       const std::optional<std::filesystem::path>& freq_path =
                           std::nullopt);

// max over synset pairs of ic(LCS) / ic_max, in [0, 1]. 0 when unmapped.
double resnik(std::string_view lemma1, LexClass class1, std::string_view lemma2,
              LexClass class2, const Taxonomy& tax);

struct ResourceSet {
  EmbeddingTable embeddings;
  DepLM deplm;
  Taxonomy taxonomy;
};

}  // namespace rewriter

#endif  // REWRITER_RESOURCES_HPP_
