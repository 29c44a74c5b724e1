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

// Roll-up of item assignments through the hierarchy. An item placed under
// several parents reaches a shared ancestor along several routes; the
// ancestor still counts it once.

#ifndef WORKGRAPH_AGGREGATION_H_
#define WORKGRAPH_AGGREGATION_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "workgraph/classify.h"
#include "workgraph/ontology.h"
#include "workgraph/records.h"

namespace workgraph {

struct Assignment {
  std::string item;
  std::string node;  // node id
  double weight = 1.0;
  std::optional<int> year;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct NodeTally {
  NodeIndex node;
  double direct = 0.0;      // weight of items assigned exactly here
  double aggregated = 0.0;  // weight of distinct items here or below
  std::size_t direct_items = 0;
  std::size_t item_set_size = 0;  // distinct items here or below
};

class Tally {
 public:
  Tally() = default;
  Tally(std::vector<NodeTally> nodes, double total, std::size_t items)
      : nodes_(std::move(nodes)), total_(total), items_(items) {}

  // One entry per snapshot node, indexed by NodeIndex.
  const std::vector<NodeTally>& nodes() const { return nodes_; }
  const NodeTally& at(NodeIndex node) const { return nodes_.at(node.value); }
  // Weight of all distinct items.
  double total() const { return total_; }
  std::size_t items() const { return items_; }

 private:
  std::vector<NodeTally> nodes_;
  double total_ = 0.0;
  std::size_t items_ = 0;
};

// Throws UnknownNodeError for an assignment to a missing node, DataError for
// a negative or non-finite weight, or for one item carrying two weights.
// A repeated (item, node) pair counts once.
Tally tally(const ActivitySnapshot& snapshot, const std::vector<Assignment>& assignments);

// aggregated / total for each node, indexed by NodeIndex. Throws
// InvalidArgument unless total > 0.
std::vector<double> percentages(const Tally& tally, double total);

// Share of generic and atomic nodes with at least one directly assigned
// item. 0 for an empty assignment list. Throws UnknownNodeError.
double coverage(const ActivitySnapshot& snapshot, const std::vector<Assignment>& assignments);

// Buckets by year; cumulative buckets hold every earlier year as well. Only
// years that occur become keys. Throws DataError when an assignment has no
// year.
std::map<int, std::vector<Assignment>> slice_by_year(
    const std::vector<Assignment>& assignments, bool cumulative);

enum class Measure { kDirect, kAggregated };

// Descending by the measure, ties by title; nodes where the measure is zero
// are left out. Throws InvalidArgument when n == 0.
std::vector<NodeTally> top_activities(const ActivitySnapshot& snapshot, const Tally& tally,
                                      std::size_t n, Measure by);

// Unit-weight assignments for non-hallucinated results. When `records` is
// given, the year comes from the matching record's launch date and
// `use_prices` replaces the unit weight with the record's price.
std::vector<Assignment> assignments_from_results(
    const ActivitySnapshot& snapshot, const std::vector<ClassificationResult>& results,
    const std::vector<AppRecord>* records = nullptr, bool use_prices = false);

// CSV with header item,node,weight,year; weight and year may be blank
// (weight then defaults to 1). `node` is an id, or failing that an exact
// title. Throws SchemaError, UnknownNodeError, DataError.
std::vector<Assignment> load_assignments(const ActivitySnapshot& snapshot,
                                         std::string_view bytes);
std::string save_assignments(const std::vector<Assignment>& assignments);

// CSV with header node_id,title,direct,aggregated,percent, rows in node-id
// order. percent = 100 * aggregated / total (0 when total is 0).
std::string tally_to_csv(const ActivitySnapshot& snapshot, const Tally& tally);

// Per-node aggregated values read back from a tally CSV, indexed by
// NodeIndex; nodes absent from the file get 0.
struct TallyColumns {
  std::vector<double> direct;
  std::vector<double> aggregated;
  std::vector<double> percent;
};
TallyColumns load_tally(const ActivitySnapshot& snapshot, std::string_view bytes);

}  // namespace workgraph

#endif  // WORKGRAPH_AGGREGATION_H_
