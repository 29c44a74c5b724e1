/*
 * Copyright (C) 2026 The Workgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Node retrieval: keyword matching over titles and synonyms, cosine search
// over embeddings, the alternating hybrid of the two, and lexical
// near-duplicate detection.

#ifndef WORKGRAPH_SEARCH_H_
#define WORKGRAPH_SEARCH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "workgraph/ontology.h"

namespace workgraph {

// Lower-cased alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dimension() const = 0;
  // Deterministic; the result has exactly dimension() finite entries.
  virtual std::vector<float> embed(std::string_view text) const = 0;
};

// Hashed bag of words: each token adds 1 to bucket fnv1a64(token) % dim.
// Not normalized; cosine similarity takes care of that.
class HashEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDefaultDimension = 256;

  explicit HashEmbedder(std::size_t dimension = kDefaultDimension);
  std::size_t dimension() const override { return dimension_; }
  std::vector<float> embed(std::string_view text) const override;

  static std::uint64_t fnv1a64(std::string_view text);

 private:
  std::size_t dimension_;
};

enum class Channel { kKeyword, kSemantic };

struct SearchHit {
  NodeIndex node;
  double score = 0.0;
  Channel channel = Channel::kKeyword;
};

// Case-insensitive token match over title + synonyms. Exact full-title
// matches rank first, then more matched tokens, then title order. The score
// is the matched-token count. Throws InvalidArgument on a query without
// tokens.
std::vector<SearchHit> keyword_search(const ActivitySnapshot& snapshot,
                                      std::string_view query, std::size_t limit);

// Text embedded for a node: title, definition and synonyms joined by spaces.
std::string indexed_text(const ActivityNode& node);

// Node embeddings and their norms, built once per (snapshot, embedder).
// Cosines are accumulated in double precision.
class SemanticIndex {
 public:
  SemanticIndex(const ActivitySnapshot& snapshot, const Embedder& embedder);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return size_; }

  // Cosine similarity descending, ties by title. Every node is ranked; only
  // `limit` truncates. Throws InvalidArgument on an empty query or when the
  // embedder's dimension differs from the index.
  std::vector<SearchHit> search(std::string_view query, const Embedder& embedder,
                                std::size_t limit) const;

 private:
  ActivitySnapshot snapshot_;
  std::size_t dimension_;
  std::size_t size_;
  std::vector<float> vectors_;  // size_ x dimension_, row-major
  std::vector<double> norms_;
};

// Builds a throwaway index; prefer SemanticIndex for repeated queries.
std::vector<SearchHit> semantic_search(const ActivitySnapshot& snapshot,
                                       std::string_view query,
                                       const Embedder& embedder,
                                       std::size_t limit);

// k1, s1, k2, s2, ... keeping the first occurrence of each node. When one
// list runs out the other continues alone.
std::vector<SearchHit> interleave(const std::vector<SearchHit>& keyword,
                                  const std::vector<SearchHit>& semantic,
                                  std::size_t limit);

std::vector<SearchHit> hybrid_search(const ActivitySnapshot& snapshot,
                                     const SemanticIndex& index,
                                     std::string_view query,
                                     const Embedder& embedder, std::size_t limit);

struct DuplicatePair {
  NodeIndex first;   // smaller title
  NodeIndex second;
  double score = 0.0;
};

// Unordered node pairs whose token Jaccard over title + synonyms reaches
// `threshold`, sorted by score descending then titles. Throws
// InvalidArgument unless 0 < threshold <= 1.
std::vector<DuplicatePair> near_duplicates(const ActivitySnapshot& snapshot,
                                           double threshold);

}  // namespace workgraph

#endif  // WORKGRAPH_SEARCH_H_
