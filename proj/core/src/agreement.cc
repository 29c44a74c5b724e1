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

#include "workgraph/agreement.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <set>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "workgraph/csv.h"
#include "workgraph/error.h"

namespace workgraph {

AnnotationSet load_annotations(const ActivitySnapshot& snapshot, std::string_view bytes,
                               std::string annotator) {
  const auto rows = parse_csv(bytes);
  if (rows.empty()) throw SchemaError("annotation file is empty");
  const auto& header = rows.front().cells;
  const auto item_col = std::find(header.begin(), header.end(), "item");
  const auto node_col = std::find(header.begin(), header.end(), "node");
  if (header.size() != 2 || item_col == header.end() || node_col == header.end()) {
    throw SchemaError("annotation files need the header item,node");
  }
  const auto item_i = static_cast<std::size_t>(item_col - header.begin());
  const auto node_i = static_cast<std::size_t>(node_col - header.begin());

  AnnotationSet set{std::move(annotator), {}};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != 2) {
      throw DataError(fmt::format("line {}: expected 2 cells", row.line));
    }
    const auto& label = row.cells[node_i];
    auto node = snapshot.find(label);
    if (!node) node = snapshot.find_by_title(label);
    if (!node) throw UnknownNodeError(fmt::format("'{}' (line {})", label, row.line));
    if (!set.items.emplace(row.cells[item_i], snapshot.node(*node).id).second) {
      throw DataError(fmt::format("line {}: item '{}' labelled twice", row.line,
                                  row.cells[item_i]));
    }
  }
  return set;
}

// ---------------------------------------------------------------------------
// Wu-Palmer

namespace {

// Shortest upward distance from `start` to each of its ancestors (itself 0).
std::unordered_map<std::uint32_t, int> up_distances(const ActivitySnapshot& snapshot,
                                                    NodeIndex start) {
  std::unordered_map<std::uint32_t, int> dist{{start.value, 0}};
  std::deque<NodeIndex> queue{start};
  while (!queue.empty()) {
    const auto node = queue.front();
    queue.pop_front();
    const int d = dist[node.value];
    for (const auto& link : snapshot.parents(node)) {
      if (dist.emplace(link.node.value, d + 1).second) queue.push_back(link.node);
    }
  }
  return dist;
}

void check_node(const ActivitySnapshot& snapshot, NodeIndex node) {
  if (node.value >= snapshot.size()) {
    throw UnknownNodeError(fmt::format("#{}", node.value));
  }
}

}  // namespace

WupComputation wup(const ActivitySnapshot& snapshot, NodeIndex a, NodeIndex b) {
  check_node(snapshot, a);
  check_node(snapshot, b);
  if (a == b) {
    const int d = depth(snapshot, a);
    return {a, d, d, d, 1.0};
  }
  const auto from_a = up_distances(snapshot, a);
  const auto from_b = up_distances(snapshot, b);
  std::optional<WupComputation> best;
  for (const auto& [c, da] : from_a) {
    const auto it = from_b.find(c);
    if (it == from_b.end()) continue;
    const NodeIndex ancestor{c};
    const int n = depth(snapshot, ancestor);
    WupComputation w{ancestor, n, n + da, n + it->second, 0.0};
    w.s = 2.0 * n / static_cast<double>(w.n1 + w.n2);
    const bool better =
        !best || w.s > best->s ||
        (w.s == best->s && (w.n > best->n || (w.n == best->n && c < best->ancestor.value)));
    if (better) best = w;
  }
  if (!best) {
    throw DataError(fmt::format("'{}' and '{}' share no ancestor",
                                snapshot.node(a).id, snapshot.node(b).id));
  }
  return *best;
}

WupComputation wup(const ActivitySnapshot& snapshot, std::string_view a,
                   std::string_view b) {
  return wup(snapshot, snapshot.require(a), snapshot.require(b));
}

// ---------------------------------------------------------------------------
// Pairwise bookkeeping

namespace {

std::vector<std::pair<std::size_t, std::size_t>> annotator_pairs(std::size_t n,
                                                                 PairMode mode) {
  if (n < 2) throw InvalidArgument("agreement needs at least two annotation sets");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (mode == PairMode::kVersusReference) {
    for (std::size_t j = 1; j < n; ++j) pairs.emplace_back(0, j);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

// Similarity cache keyed by node index pair; the label vocabulary is small
// compared with the number of items.
class WupCache {
 public:
  explicit WupCache(const ActivitySnapshot& snapshot) : snapshot_(snapshot) {}

  double operator()(NodeIndex a, NodeIndex b) {
    if (a == b) return 1.0;
    if (b < a) std::swap(a, b);
    const auto key = (std::uint64_t{a.value} << 32) | b.value;
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, wup(snapshot_, a, b).s).first;
    return it->second;
  }

 private:
  const ActivitySnapshot& snapshot_;
  std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace

MeanWup mean_wup(const ActivitySnapshot& snapshot, const std::vector<AnnotationSet>& sets,
                 PairMode mode) {
  const auto pairs = annotator_pairs(sets.size(), mode);
  WupCache similarity(snapshot);
  MeanWup out;
  double sum = 0.0;
  for (const auto& [i, j] : pairs) {
    const auto& a = sets[i].items;
    const auto& b = sets[j].items;
    std::set<std::string_view> universe;
    for (const auto& [item, _] : a) universe.insert(item);
    for (const auto& [item, _] : b) universe.insert(item);
    for (auto item : universe) {
      const auto ia = a.find(std::string(item));
      const auto ib = b.find(std::string(item));
      if (ia == a.end() || ib == b.end()) {
        ++out.missing;
        continue;
      }
      sum += similarity(snapshot.require(ia->second), snapshot.require(ib->second));
      ++out.comparisons;
    }
  }
  if (out.comparisons == 0) throw DataError("annotation sets share no items");
  out.mean = sum / static_cast<double>(out.comparisons);
  return out;
}

double weighted_kappa(const ActivitySnapshot& snapshot, const AnnotationSet& a,
                      const AnnotationSet& b) {
  std::vector<std::pair<NodeIndex, NodeIndex>> labels;
  for (const auto& [item, node] : a.items) {
    const auto it = b.items.find(item);
    if (it == b.items.end()) continue;
    labels.emplace_back(snapshot.require(node), snapshot.require(it->second));
  }
  if (labels.empty()) {
    throw DataError(fmt::format("annotators '{}' and '{}' share no items", a.annotator,
                                b.annotator));
  }
  WupCache similarity(snapshot);
  const auto n = static_cast<double>(labels.size());
  std::map<NodeIndex, double> margin_a, margin_b;
  double observed = 0.0;
  for (const auto& [la, lb] : labels) {
    observed += similarity(la, lb);
    margin_a[la] += 1.0;
    margin_b[lb] += 1.0;
  }
  const double p_o = observed / n;
  double p_e = 0.0;
  for (const auto& [x, ca] : margin_a) {
    for (const auto& [y, cb] : margin_b) {
      p_e += (ca / n) * (cb / n) * similarity(x, y);
    }
  }
  if (p_e >= 1.0) return 1.0;
  return (p_o - p_e) / (1.0 - p_e);
}

double mean_kappa(const ActivitySnapshot& snapshot, const std::vector<AnnotationSet>& sets,
                  PairMode mode) {
  const auto pairs = annotator_pairs(sets.size(), mode);
  double sum = 0.0;
  for (const auto& [i, j] : pairs) sum += weighted_kappa(snapshot, sets[i], sets[j]);
  return sum / static_cast<double>(pairs.size());
}

// ---------------------------------------------------------------------------
// Bootstrap

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

__extension__ using u128 = unsigned __int128;

// Lemire's multiply-shift with rejection: uniform on [0, bound).
std::uint64_t bounded(std::uint64_t& state, std::uint64_t bound) {
  u128 m = static_cast<u128>(splitmix64(state)) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<u128>(splitmix64(state)) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace

std::pair<std::size_t, std::size_t> nearest_rank_bounds(std::size_t m, double level) {
  if (m == 0) throw InvalidArgument("no values to rank");
  const double tail = (1.0 - level) / 2.0;
  auto low = static_cast<std::size_t>(std::ceil(tail * static_cast<double>(m) - 1e-9));
  low = std::clamp<std::size_t>(low, 1, m);
  return {low, m + 1 - low};
}

BootstrapInterval bootstrap_ci(const SetMetric& metric,
                               const std::vector<AnnotationSet>& sets,
                               std::size_t resamples, double level, std::uint64_t seed,
                               std::size_t parallelism) {
  if (resamples == 0) throw InvalidArgument("bootstrap needs at least one resample");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must be in (0, 1)");
  if (parallelism == 0) throw InvalidArgument("parallelism must be at least 1");

  std::set<std::string> universe_set;
  for (const auto& set : sets) {
    for (const auto& [item, _] : set.items) universe_set.insert(item);
  }
  const std::vector<std::string> universe(universe_set.begin(), universe_set.end());
  if (universe.empty()) throw DataError("annotation sets are empty");

  std::vector<std::optional<double>> values(resamples);
  auto run = [&](std::size_t r) {
    std::uint64_t mix = seed + r;
    std::uint64_t state = splitmix64(mix);
    std::vector<AnnotationSet> sample(sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) sample[s].annotator = sets[s].annotator;
    for (std::size_t k = 0; k < universe.size(); ++k) {
      const auto& item = universe[bounded(state, universe.size())];
      const auto name = fmt::format("{}#{}", item, k);
      for (std::size_t s = 0; s < sets.size(); ++s) {
        const auto it = sets[s].items.find(item);
        if (it != sets[s].items.end()) sample[s].items.emplace(name, it->second);
      }
    }
    try {
      values[r] = metric(sample);
    } catch (const std::exception&) {
      values[r].reset();
    }
  };

  const std::size_t threads = std::min(parallelism, resamples);
  if (threads <= 1) {
    for (std::size_t r = 0; r < resamples; ++r) run(r);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t r = t; r < resamples; r += threads) run(r);
      });
    }
  }

  std::vector<double> sorted;
  sorted.reserve(resamples);
  for (const auto& v : values) {
    if (v) sorted.push_back(*v);
  }
  BootstrapInterval out;
  out.used = sorted.size();
  out.skipped = resamples - sorted.size();
  if (sorted.empty()) throw DataError("the metric failed on every resample");
  std::sort(sorted.begin(), sorted.end());
  std::tie(out.low_rank, out.high_rank) = nearest_rank_bounds(sorted.size(), level);
  out.low = sorted[out.low_rank - 1];
  out.high = sorted[out.high_rank - 1];
  return out;
}

}  // namespace workgraph
