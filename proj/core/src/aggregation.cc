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

#include "workgraph/aggregation.h"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <unordered_map>

#include <fmt/format.h>

#include "workgraph/csv.h"
#include "workgraph/error.h"

namespace workgraph {

namespace {

NodeIndex resolve(const ActivitySnapshot& snapshot, std::string_view label) {
  if (auto node = snapshot.find(label)) return *node;
  if (auto node = snapshot.find_by_title(label)) return *node;
  throw UnknownNodeError(std::string(label));
}

double parse_real(std::string_view text, std::size_t line, std::string_view column) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw DataError(fmt::format("line {}: {} '{}' is not a number", line, column, text));
  }
  return value;
}

}  // namespace

Tally tally(const ActivitySnapshot& snapshot, const std::vector<Assignment>& assignments) {
  struct Item {
    double weight = 0.0;
    std::vector<NodeIndex> nodes;
  };
  // Ordered so that floating-point sums do not depend on input order.
  std::map<std::string_view, Item> items;
  for (const auto& a : assignments) {
    if (!std::isfinite(a.weight) || a.weight < 0.0) {
      throw DataError(fmt::format("item '{}' has invalid weight {}", a.item, a.weight));
    }
    const auto node = snapshot.require(a.node);
    auto [it, fresh] = items.try_emplace(a.item, Item{a.weight, {}});
    if (!fresh && it->second.weight != a.weight) {
      throw DataError(fmt::format("item '{}' carries weights {} and {}", a.item,
                                  it->second.weight, a.weight));
    }
    it->second.nodes.push_back(node);
  }

  std::vector<NodeTally> nodes(snapshot.size());
  for (std::uint32_t i = 0; i < nodes.size(); ++i) nodes[i].node = NodeIndex{i};

  // stamp[n] == current item marks n as already credited for that item.
  std::vector<std::size_t> stamp(snapshot.size(), 0);
  std::vector<NodeIndex> stack;
  double total = 0.0;
  std::size_t serial = 0;
  for (auto& [name, item] : items) {
    ++serial;
    total += item.weight;
    std::sort(item.nodes.begin(), item.nodes.end());
    item.nodes.erase(std::unique(item.nodes.begin(), item.nodes.end()), item.nodes.end());
    for (const auto node : item.nodes) {
      nodes[node.value].direct += item.weight;
      ++nodes[node.value].direct_items;
      if (stamp[node.value] != serial) {
        stamp[node.value] = serial;
        stack.push_back(node);
      }
    }
    while (!stack.empty()) {
      const auto node = stack.back();
      stack.pop_back();
      nodes[node.value].aggregated += item.weight;
      ++nodes[node.value].item_set_size;
      for (const auto& link : snapshot.parents(node)) {
        if (stamp[link.node.value] == serial) continue;
        stamp[link.node.value] = serial;
        stack.push_back(link.node);
      }
    }
  }
  return Tally(std::move(nodes), total, items.size());
}

std::vector<double> percentages(const Tally& tally, double total) {
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw InvalidArgument("percentages need a positive total");
  }
  std::vector<double> out;
  out.reserve(tally.nodes().size());
  for (const auto& t : tally.nodes()) out.push_back(t.aggregated / total);
  return out;
}

double coverage(const ActivitySnapshot& snapshot, const std::vector<Assignment>& assignments) {
  std::vector<bool> hit(snapshot.size(), false);
  for (const auto& a : assignments) hit[snapshot.require(a.node).value] = true;
  std::size_t activities = 0, covered = 0;
  for (std::uint32_t i = 0; i < snapshot.size(); ++i) {
    if (snapshot.node(NodeIndex{i}).kind == NodeKind::kSourceTask) continue;
    ++activities;
    covered += hit[i];
  }
  if (activities == 0) return 0.0;
  return static_cast<double>(covered) / static_cast<double>(activities);
}

std::map<int, std::vector<Assignment>> slice_by_year(
    const std::vector<Assignment>& assignments, bool cumulative) {
  std::map<int, std::vector<Assignment>> buckets;
  for (const auto& a : assignments) {
    if (!a.year) throw DataError(fmt::format("item '{}' has no year", a.item));
    buckets[*a.year].push_back(a);
  }
  if (!cumulative) return buckets;
  std::map<int, std::vector<Assignment>> out;
  std::vector<Assignment> running;
  for (const auto& [year, bucket] : buckets) {
    running.insert(running.end(), bucket.begin(), bucket.end());
    out.emplace(year, running);
  }
  return out;
}

std::vector<NodeTally> top_activities(const ActivitySnapshot& snapshot, const Tally& tally,
                                      std::size_t n, Measure by) {
  if (n == 0) throw InvalidArgument("top_activities needs n >= 1");
  const auto measure = [by](const NodeTally& t) {
    return by == Measure::kDirect ? t.direct : t.aggregated;
  };
  std::vector<NodeTally> ranked;
  for (const auto& t : tally.nodes()) {
    if (measure(t) > 0.0) ranked.push_back(t);
  }
  const auto before = [&](const NodeTally& a, const NodeTally& b) {
    if (measure(a) != measure(b)) return measure(a) > measure(b);
    return snapshot.node(a.node).title < snapshot.node(b.node).title;
  };
  if (ranked.size() > n) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n),
                      ranked.end(), before);
    ranked.resize(n);
  } else {
    std::sort(ranked.begin(), ranked.end(), before);
  }
  return ranked;
}

std::vector<Assignment> assignments_from_results(
    const ActivitySnapshot& snapshot, const std::vector<ClassificationResult>& results,
    const std::vector<AppRecord>* records, bool use_prices) {
  std::unordered_map<std::string_view, const AppRecord*> by_name;
  if (records) {
    for (const auto& r : *records) by_name.emplace(r.name, &r);
  }
  std::vector<Assignment> out;
  for (const auto& result : results) {
    if (result.hallucinated) continue;
    const auto node = snapshot.find_by_title(result.node_title);
    if (!node) throw UnknownNodeError(result.node_title);
    Assignment a{result.record, snapshot.node(*node).id, 1.0, std::nullopt};
    if (records) {
      const auto it = by_name.find(result.record);
      if (it == by_name.end()) {
        throw DataError(fmt::format("no record named '{}'", result.record));
      }
      if (it->second->launch_date.ok()) {
        a.year = static_cast<int>(it->second->launch_date.year());
      }
      if (use_prices) a.weight = it->second->price.dollars();
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Assignment> load_assignments(const ActivitySnapshot& snapshot,
                                         std::string_view bytes) {
  const auto rows = parse_csv(bytes);
  const std::vector<std::string> expected{"item", "node", "weight", "year"};
  if (rows.empty()) throw SchemaError("assignment file is empty");
  auto header = rows.front().cells;
  std::vector<std::size_t> col(expected.size());
  {
    auto sorted = header;
    std::sort(sorted.begin(), sorted.end());
    auto want = expected;
    std::sort(want.begin(), want.end());
    if (sorted != want) {
      throw SchemaError("assignment files need the columns item,node,weight,year");
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
      col[i] = static_cast<std::size_t>(
          std::find(header.begin(), header.end(), expected[i]) - header.begin());
    }
  }
  std::vector<Assignment> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != expected.size()) {
      throw DataError(fmt::format("line {}: expected {} cells, found {}", row.line,
                                  expected.size(), row.cells.size()));
    }
    Assignment a;
    a.item = row.cells[col[0]];
    if (a.item.empty()) throw DataError(fmt::format("line {}: empty item", row.line));
    a.node = snapshot.node(resolve(snapshot, row.cells[col[1]])).id;
    const auto& weight = row.cells[col[2]];
    if (!weight.empty()) a.weight = parse_real(weight, row.line, "weight");
    const auto& year = row.cells[col[3]];
    if (!year.empty()) {
      int value = 0;
      const auto [ptr, ec] = std::from_chars(year.data(), year.data() + year.size(), value);
      if (ec != std::errc() || ptr != year.data() + year.size()) {
        throw DataError(fmt::format("line {}: year '{}' is not an integer", row.line, year));
      }
      a.year = value;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string save_assignments(const std::vector<Assignment>& assignments) {
  CsvWriter out({"item", "node", "weight", "year"});
  for (const auto& a : assignments) {
    out.row({a.item, a.node, fmt::format("{}", a.weight),
             a.year ? std::to_string(*a.year) : std::string()});
  }
  return out.str();
}

std::string tally_to_csv(const ActivitySnapshot& snapshot, const Tally& tally) {
  CsvWriter out({"node_id", "title", "direct", "aggregated", "percent"});
  for (const auto& t : tally.nodes()) {
    const auto& node = snapshot.node(t.node);
    const double percent = tally.total() > 0.0 ? 100.0 * t.aggregated / tally.total() : 0.0;
    out.row({node.id, node.title, fmt::format("{}", t.direct),
             fmt::format("{}", t.aggregated), fmt::format("{}", percent)});
  }
  return out.str();
}

TallyColumns load_tally(const ActivitySnapshot& snapshot, std::string_view bytes) {
  const auto rows = parse_csv(bytes);
  const std::vector<std::string> expected{"node_id", "title", "direct", "aggregated",
                                          "percent"};
  if (rows.empty() || rows.front().cells != expected) {
    throw SchemaError("tally files need the header node_id,title,direct,aggregated,percent");
  }
  TallyColumns out;
  out.direct.assign(snapshot.size(), 0.0);
  out.aggregated.assign(snapshot.size(), 0.0);
  out.percent.assign(snapshot.size(), 0.0);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != expected.size()) {
      throw DataError(fmt::format("line {}: expected {} cells", row.line, expected.size()));
    }
    const auto node = snapshot.require(row.cells[0]);
    out.direct[node.value] = parse_real(row.cells[2], row.line, "direct");
    out.aggregated[node.value] = parse_real(row.cells[3], row.line, "aggregated");
    out.percent[node.value] = parse_real(row.cells[4], row.line, "percent");
  }
  return out;
}

}  // namespace workgraph
