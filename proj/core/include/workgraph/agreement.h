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

// Hierarchy-aware agreement between annotators who place the same items on
// the ontology.

#ifndef WORKGRAPH_AGREEMENT_H_
#define WORKGRAPH_AGREEMENT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "workgraph/ontology.h"

namespace workgraph {

struct AnnotationSet {
  std::string annotator;
  std::map<std::string, std::string> items;  // item id -> node id
};

// CSV with header item,node. `node` is a node id, or failing that an exact
// title; either way the stored value is the node id. Throws SchemaError,
// UnknownNodeError, or DataError on a repeated item.
AnnotationSet load_annotations(const ActivitySnapshot& snapshot, std::string_view bytes,
                               std::string annotator);

struct WupComputation {
  NodeIndex ancestor;  // the maximizing common ancestor
  int n = 0;           // depth(ancestor), root = 1
  int n1 = 0;          // n + descent from ancestor to a
  int n2 = 0;          // n + descent from ancestor to b
  double s = 0.0;      // 2n / (n1 + n2)
};

// Wu-Palmer on a DAG: every common ancestor c is scored with its longest
// root path depth and the shortest descents to a and b; the best score wins,
// ties going to the deeper ancestor, then the smaller index. Symmetric, and
// s == 1 exactly when a == b. Throws UnknownNodeError, DataError on a cyclic
// snapshot.
WupComputation wup(const ActivitySnapshot& snapshot, NodeIndex a, NodeIndex b);
// By node id.
WupComputation wup(const ActivitySnapshot& snapshot, std::string_view a,
                   std::string_view b);

enum class PairMode { kPairwiseAll, kVersusReference };

struct MeanWup {
  double mean = 0.0;
  std::size_t comparisons = 0;  // (annotator pair, item) terms averaged
  std::size_t missing = 0;      // terms skipped because one side lacks the item
};

// kPairwiseAll averages over every unordered annotator pair; kVersusReference
// pairs sets[0] with each other set. Throws InvalidArgument on fewer than two
// sets and DataError when no pair shares an item.
MeanWup mean_wup(const ActivitySnapshot& snapshot, const std::vector<AnnotationSet>& sets,
                 PairMode mode = PairMode::kPairwiseAll);

// Cohen's kappa with Wu-Palmer agreement weights over the shared items:
//   p_o = mean w(a_i, b_i),  p_e = sum m_A(x) m_B(y) w(x, y),
//   kappa = (p_o - p_e) / (1 - p_e), and 1 when p_e == 1.
// Throws DataError when the sets share no item.
double weighted_kappa(const ActivitySnapshot& snapshot, const AnnotationSet& a,
                      const AnnotationSet& b);

// Mean of pairwise weighted_kappa under `mode`.
double mean_kappa(const ActivitySnapshot& snapshot, const std::vector<AnnotationSet>& sets,
                  PairMode mode = PairMode::kPairwiseAll);

// SplitMix64 step; public so tests can pin the stream.
std::uint64_t splitmix64(std::uint64_t& state);

using SetMetric = std::function<double(const std::vector<AnnotationSet>&)>;

struct BootstrapInterval {
  double low = 0.0;
  double high = 0.0;
  std::size_t used = 0;     // resamples that produced a value
  std::size_t skipped = 0;  // resamples where the metric threw
  std::size_t low_rank = 0;   // 1-based order statistics behind the bounds
  std::size_t high_rank = 0;
};

// Nonparametric percentile bootstrap. Each resample draws |items| item ids
// with replacement from the sorted union of items and applies the same draw
// to every set; drawn copies are renamed "<item>#<k>" so duplicates survive.
// Resample r uses its own stream seeded by splitmix64(seed + r), so results
// do not depend on `parallelism`. Bounds are nearest-rank order statistics:
//   low_rank = ceil(m (1 - level) / 2),  high_rank = m + 1 - low_rank
// over the m successful resamples (25 and 976 for m = 1000, level 0.95).
// Throws InvalidArgument on resamples == 0, level outside (0, 1), or
// parallelism == 0, and DataError when every resample fails.
BootstrapInterval bootstrap_ci(const SetMetric& metric,
                               const std::vector<AnnotationSet>& sets,
                               std::size_t resamples, double level, std::uint64_t seed,
                               std::size_t parallelism = 1);

// Nearest-rank bounds as used by bootstrap_ci, for m sorted values.
std::pair<std::size_t, std::size_t> nearest_rank_bounds(std::size_t m, double level);

}  // namespace workgraph

#endif  // WORKGRAPH_AGREEMENT_H_
