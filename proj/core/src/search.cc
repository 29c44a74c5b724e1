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

#include "workgraph/search.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "workgraph/error.h"

namespace workgraph {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    // Bytes >= 0x80 belong to UTF-8 sequences; keep them inside tokens.
    if (std::isalnum(u) || u >= 0x80) {
      current += static_cast<char>(std::tolower(u));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

std::set<std::string> node_tokens(const ActivityNode& node) {
  auto title = tokenize(node.title);
  std::set<std::string> out(title.begin(), title.end());
  for (const auto& synonym : node.synonyms) {
    for (auto& t : tokenize(synonym)) out.insert(std::move(t));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Embedding

HashEmbedder::HashEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InvalidArgument("embedder dimension must be positive");
}

std::uint64_t HashEmbedder::fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::vector<float> HashEmbedder::embed(std::string_view text) const {
  std::vector<float> v(dimension_, 0.0f);
  for (const auto& token : tokenize(text)) {
    v[fnv1a64(token) % dimension_] += 1.0f;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Keyword channel

std::vector<SearchHit> keyword_search(const ActivitySnapshot& snapshot,
                                      std::string_view query, std::size_t limit) {
  const auto query_tokens = tokenize(query);
  if (query_tokens.empty()) throw InvalidArgument("search query is empty");
  const std::set<std::string> wanted(query_tokens.begin(), query_tokens.end());

  struct Candidate {
    NodeIndex node;
    bool exact;
    std::size_t matched;
  };
  std::vector<Candidate> candidates;
  for (std::uint32_t i = 0; i < snapshot.size(); ++i) {
    const auto& node = snapshot.node(NodeIndex{i});
    const auto tokens = node_tokens(node);
    std::size_t matched = 0;
    for (const auto& t : wanted) matched += tokens.count(t);
    if (matched == 0) continue;
    candidates.push_back({NodeIndex{i}, tokenize(node.title) == query_tokens, matched});
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& a, const Candidate& b) {
              if (a.exact != b.exact) return a.exact;
              if (a.matched != b.matched) return a.matched > b.matched;
              return snapshot.node(a.node).title < snapshot.node(b.node).title;
            });
  if (candidates.size() > limit) candidates.resize(limit);
  std::vector<SearchHit> hits;
  hits.reserve(candidates.size());
  for (const auto& c : candidates) {
    hits.push_back({c.node, static_cast<double>(c.matched), Channel::kKeyword});
  }
  return hits;
}

// ---------------------------------------------------------------------------
// Semantic channel

std::string indexed_text(const ActivityNode& node) {
  std::string text = node.title;
  if (node.definition && !node.definition->empty()) {
    text += ' ';
    text += *node.definition;
  }
  for (const auto& synonym : node.synonyms) {
    text += ' ';
    text += synonym;
  }
  return text;
}

namespace {

double norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

}  // namespace

SemanticIndex::SemanticIndex(const ActivitySnapshot& snapshot,
                             const Embedder& embedder)
    : snapshot_(snapshot),
      dimension_(embedder.dimension()),
      size_(snapshot.size()) {
  vectors_.reserve(size_ * dimension_);
  norms_.reserve(size_);
  for (std::uint32_t i = 0; i < size_; ++i) {
    const auto v = embedder.embed(indexed_text(snapshot.node(NodeIndex{i})));
    if (v.size() != dimension_) {
      throw InvalidArgument(fmt::format(
          "embedder returned {} values, expected {}", v.size(), dimension_));
    }
    vectors_.insert(vectors_.end(), v.begin(), v.end());
    norms_.push_back(norm(v));
  }
}

std::vector<SearchHit> SemanticIndex::search(std::string_view query,
                                             const Embedder& embedder,
                                             std::size_t limit) const {
  if (query.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw InvalidArgument("search query is empty");
  }
  if (embedder.dimension() != dimension_) {
    throw InvalidArgument(fmt::format("embedder dimension {} does not match index ({})",
                                      embedder.dimension(), dimension_));
  }
  const auto q = embedder.embed(query);
  if (q.size() != dimension_) {
    throw InvalidArgument("embedder returned a vector of the wrong size");
  }
  const double q_norm = norm(q);

  std::vector<SearchHit> hits(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    const float* row = vectors_.data() + i * dimension_;
    double dot = 0.0;
    for (std::size_t d = 0; d < dimension_; ++d) {
      dot += static_cast<double>(row[d]) * q[d];
    }
    const double denom = norms_[i] * q_norm;
    hits[i] = {NodeIndex{static_cast<std::uint32_t>(i)},
               denom > 0.0 ? dot / denom : 0.0, Channel::kSemantic};
  }
  auto before = [&](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return snapshot_.node(a.node).title < snapshot_.node(b.node).title;
  };
  if (limit < hits.size()) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(limit),
                      hits.end(), before);
    hits.resize(limit);
  } else {
    std::sort(hits.begin(), hits.end(), before);
  }
  return hits;
}

std::vector<SearchHit> semantic_search(const ActivitySnapshot& snapshot,
                                       std::string_view query,
                                       const Embedder& embedder,
                                       std::size_t limit) {
  return SemanticIndex(snapshot, embedder).search(query, embedder, limit);
}

// ---------------------------------------------------------------------------
// Hybrid

std::vector<SearchHit> interleave(const std::vector<SearchHit>& keyword,
                                  const std::vector<SearchHit>& semantic,
                                  std::size_t limit) {
  std::vector<SearchHit> out;
  std::unordered_set<std::uint32_t> seen;
  std::size_t k = 0, s = 0;
  // Each turn contributes the channel's next unseen hit.
  auto next_unseen = [&](const std::vector<SearchHit>& list, std::size_t& pos) {
    while (pos < list.size() && seen.count(list[pos].node.value)) ++pos;
    return pos < list.size();
  };
  bool keyword_turn = true;
  while (out.size() < limit) {
    const bool has_k = next_unseen(keyword, k);
    const bool has_s = next_unseen(semantic, s);
    if (!has_k && !has_s) break;
    const bool take_keyword = has_k && (keyword_turn || !has_s);
    const SearchHit& hit = take_keyword ? keyword[k++] : semantic[s++];
    seen.insert(hit.node.value);
    out.push_back(hit);
    keyword_turn = !take_keyword;
  }
  return out;
}

std::vector<SearchHit> hybrid_search(const ActivitySnapshot& snapshot,
                                     const SemanticIndex& index,
                                     std::string_view query,
                                     const Embedder& embedder, std::size_t limit) {
  auto semantic = index.search(query, embedder, limit);
  std::vector<SearchHit> keyword;
  if (!tokenize(query).empty()) keyword = keyword_search(snapshot, query, limit);
  return interleave(keyword, semantic, limit);
}

// ---------------------------------------------------------------------------
// Near duplicates

std::vector<DuplicatePair> near_duplicates(const ActivitySnapshot& snapshot,
                                           double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("near-duplicate threshold must be in (0, 1]");
  }
  const auto n = static_cast<std::uint32_t>(snapshot.size());
  std::vector<std::size_t> sizes(n);
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto tokens = node_tokens(snapshot.node(NodeIndex{i}));
    sizes[i] = tokens.size();
    for (const auto& t : tokens) postings[t].push_back(i);
  }

  std::vector<DuplicatePair> out;
  std::vector<std::uint32_t> shared(n, 0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto tokens = node_tokens(snapshot.node(NodeIndex{i}));
    touched.clear();
    for (const auto& t : tokens) {
      for (std::uint32_t j : postings[t]) {
        if (j <= i) continue;
        if (shared[j]++ == 0) touched.push_back(j);
      }
    }
    for (std::uint32_t j : touched) {
      const double inter = shared[j];
      const double score = inter / (static_cast<double>(sizes[i] + sizes[j]) - inter);
      shared[j] = 0;
      if (score + 1e-12 < threshold) continue;
      NodeIndex a{i}, b{j};
      if (snapshot.node(b).title < snapshot.node(a).title) std::swap(a, b);
      out.push_back({a, b, score});
    }
  }
  std::sort(out.begin(), out.end(), [&](const DuplicatePair& x, const DuplicatePair& y) {
    if (x.score != y.score) return x.score > y.score;
    const auto& xt = snapshot.node(x.first).title;
    const auto& yt = snapshot.node(y.first).title;
    if (xt != yt) return xt < yt;
    return snapshot.node(x.second).title < snapshot.node(y.second).title;
  });
  return out;
}

}  // namespace workgraph
