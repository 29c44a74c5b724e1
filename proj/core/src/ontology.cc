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

#include "workgraph/ontology.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "workgraph/error.h"

namespace workgraph {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kGeneric:
      return "generic";
    case NodeKind::kAtomic:
      return "atomic";
    case NodeKind::kSourceTask:
      return "source_task";
  }
  return "generic";
}

NodeKind parse_node_kind(std::string_view text) {
  if (text == "generic") return NodeKind::kGeneric;
  if (text == "atomic") return NodeKind::kAtomic;
  if (text == "source_task") return NodeKind::kSourceTask;
  throw SchemaError(fmt::format("unknown node kind '{}'", text));
}

// ---------------------------------------------------------------------------
// ActivitySnapshot

ActivitySnapshot::ActivitySnapshot(std::string version,
                                   std::vector<ActivityNode> nodes,
                                   std::vector<SpecializationEdge> edges,
                                   std::string root) {
  auto data = std::make_shared<Data>();
  data->version = std::move(version);
  data->root_id = std::move(root);
  data->nodes = std::move(nodes);
  data->edges = std::move(edges);

  std::stable_sort(data->nodes.begin(), data->nodes.end(),
                   [](const ActivityNode& a, const ActivityNode& b) {
                     return a.id < b.id;
                   });
  std::sort(data->edges.begin(), data->edges.end());

  const auto n = static_cast<std::uint32_t>(data->nodes.size());
  data->by_id.reserve(n);
  data->by_title.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    // First occurrence wins; duplicates are reported by validate().
    data->by_id.emplace(data->nodes[i].id, NodeIndex{i});
    data->by_title.emplace(data->nodes[i].title, NodeIndex{i});
  }
  if (auto it = data->by_id.find(data->root_id); it != data->by_id.end()) {
    data->root = it->second;
  }

  data->parents.resize(n);
  data->children.resize(n);
  for (std::uint32_t e = 0; e < data->edges.size(); ++e) {
    const auto& edge = data->edges[e];
    auto p = data->by_id.find(edge.parent);
    auto c = data->by_id.find(edge.child);
    if (p == data->by_id.end() || c == data->by_id.end()) continue;
    data->children[p->second.value].push_back(Link{c->second, e});
    data->parents[c->second.value].push_back(Link{p->second, e});
  }
  auto by_node = [](const Link& a, const Link& b) {
    return a.node < b.node || (a.node == b.node && a.edge < b.edge);
  };
  for (auto& links : data->children) std::sort(links.begin(), links.end(), by_node);
  for (auto& links : data->parents) std::sort(links.begin(), links.end(), by_node);

  // Kahn's algorithm; smallest index first keeps the order deterministic.
  std::vector<std::uint32_t> indegree(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    indegree[i] = static_cast<std::uint32_t>(data->parents[i].size());
  }
  std::set<std::uint32_t> ready;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  data->topo.reserve(n);
  while (!ready.empty()) {
    const std::uint32_t next = *ready.begin();
    ready.erase(ready.begin());
    data->topo.push_back(NodeIndex{next});
    for (const Link& child : data->children[next]) {
      if (--indegree[child.node.value] == 0) ready.insert(child.node.value);
    }
  }
  data->acyclic = data->topo.size() == n;
  if (!data->acyclic) data->topo.clear();

  data->depth.assign(n, 0);
  if (data->acyclic && data->root) {
    data->depth[data->root->value] = 1;
    for (NodeIndex u : data->topo) {
      const int du = data->depth[u.value];
      if (du == 0) continue;
      for (const Link& child : data->children[u.value]) {
        data->depth[child.node.value] =
            std::max(data->depth[child.node.value], du + 1);
      }
    }
  }
  data_ = std::move(data);
}

bool operator==(const ActivitySnapshot& a, const ActivitySnapshot& b) {
  if (a.data_ == b.data_) return true;
  return a.version() == b.version() && a.root_id() == b.root_id() &&
         a.nodes() == b.nodes() && a.edges() == b.edges();
}

void ActivitySnapshot::check(NodeIndex index) const {
  if (index.value >= data_->nodes.size()) {
    throw UnknownNodeError(fmt::format("index {}", index.value));
  }
}

NodeIndex ActivitySnapshot::root() const {
  if (!data_->root) throw UnknownNodeError(data_->root_id);
  return *data_->root;
}

const ActivityNode& ActivitySnapshot::node(NodeIndex index) const {
  check(index);
  return data_->nodes[index.value];
}

std::optional<NodeIndex> ActivitySnapshot::find(std::string_view id) const {
  auto it = data_->by_id.find(id);
  if (it == data_->by_id.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeIndex> ActivitySnapshot::find_by_title(
    std::string_view title) const {
  auto it = data_->by_title.find(title);
  if (it == data_->by_title.end()) return std::nullopt;
  return it->second;
}

NodeIndex ActivitySnapshot::require(std::string_view id) const {
  if (auto found = find(id)) return *found;
  throw UnknownNodeError(std::string(id));
}

NodeIndex ActivitySnapshot::require_title(std::string_view title) const {
  if (auto found = find_by_title(title)) return *found;
  throw UnknownNodeError(fmt::format("title '{}'", title));
}

std::span<const Link> ActivitySnapshot::parents(NodeIndex index) const {
  check(index);
  return data_->parents[index.value];
}

std::span<const Link> ActivitySnapshot::children(NodeIndex index) const {
  check(index);
  return data_->children[index.value];
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Iterative Tarjan. Returns components that contain a cycle: size > 1, or a
// single node with a self edge.
std::vector<std::vector<std::uint32_t>> cyclic_components(
    const ActivitySnapshot& snapshot) {
  const auto n = static_cast<std::uint32_t>(snapshot.size());
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> result;
  std::uint32_t counter = 0;

  struct Frame {
    std::uint32_t node;
    std::size_t next_child;
  };
  for (std::uint32_t start = 0; start < n; ++start) {
    if (index[start] != kUnvisited) continue;
    std::vector<Frame> frames{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      Frame& frame = frames.back();
      auto children = snapshot.children(NodeIndex{frame.node});
      if (frame.next_child < children.size()) {
        const std::uint32_t w = children[frame.next_child++].node.value;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[frame.node] = std::min(low[frame.node], index[w]);
        }
        continue;
      }
      const std::uint32_t v = frame.node;
      frames.pop_back();
      if (!frames.empty()) {
        low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      }
      if (low[v] != index[v]) continue;
      std::vector<std::uint32_t> component;
      std::uint32_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      bool self_loop = false;
      if (component.size() == 1) {
        for (const Link& c : snapshot.children(NodeIndex{v})) {
          if (c.node.value == v) self_loop = true;
        }
      }
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        result.push_back(std::move(component));
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    out += fmt::format("{}: {}\n", v.rule, v.subject);
  }
  return out;
}

ValidationReport validate(const ActivitySnapshot& snapshot) {
  ValidationReport report;
  auto add = [&](std::string rule, std::string subject) {
    report.violations.push_back({std::move(rule), std::move(subject)});
  };
  const auto& nodes = snapshot.nodes();
  const auto n = static_cast<std::uint32_t>(nodes.size());

  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    if (nodes[i].id == nodes[i + 1].id) add("duplicate-id", nodes[i].id);
  }
  std::map<std::string_view, std::vector<std::string_view>> titles;
  for (const auto& node : nodes) {
    if (node.title.empty()) add("empty-title", node.id);
    titles[node.title].push_back(node.id);
  }
  for (const auto& [title, ids] : titles) {
    if (title.empty() || ids.size() < 2) continue;
    add("duplicate-title", fmt::format("'{}' ({})", title, fmt::join(ids, ", ")));
  }

  if (!snapshot.has_root()) add("missing-root", snapshot.root_id());

  const auto& edges = snapshot.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    const bool known_parent = snapshot.find(edge.parent).has_value();
    const bool known_child = snapshot.find(edge.child).has_value();
    if (!known_parent || !known_child) {
      add("dangling-edge", fmt::format("{} -> {}", edge.parent, edge.child));
    }
    if (e > 0 && edges[e - 1].parent == edge.parent &&
        edges[e - 1].child == edge.child) {
      add("duplicate-edge", fmt::format("{} -> {}", edge.parent, edge.child));
    }
  }

  for (const auto& component : cyclic_components(snapshot)) {
    std::vector<std::string_view> ids;
    for (auto v : component) ids.push_back(nodes[v].id);
    add("cycle", fmt::format("{}", fmt::join(ids, ", ")));
  }

  // Reachability from the root.
  std::vector<bool> reached(n, false);
  if (snapshot.has_root()) {
    std::deque<std::uint32_t> queue{snapshot.root().value};
    reached[snapshot.root().value] = true;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (const Link& c : snapshot.children(NodeIndex{u})) {
        if (!reached[c.node.value]) {
          reached[c.node.value] = true;
          queue.push_back(c.node.value);
        }
      }
    }
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    const NodeIndex idx{i};
    const bool is_root = snapshot.has_root() && snapshot.root() == idx;
    const auto parents = snapshot.parents(idx);
    if (is_root && !parents.empty()) {
      add("root-has-parent", nodes[i].id);
    } else if (!is_root && parents.empty()) {
      add("orphan", nodes[i].id);
    } else if (snapshot.has_root() && !reached[i]) {
      add("unreachable", nodes[i].id);
    }

    for (const Link& c : snapshot.children(idx)) {
      const auto& child = nodes[c.node.value];
      if (nodes[i].kind == NodeKind::kSourceTask) {
        add("source-task-child",
            fmt::format("{} -> {}", nodes[i].id, child.id));
      } else if (nodes[i].kind == NodeKind::kAtomic &&
                 child.kind != NodeKind::kSourceTask) {
        add("atomic-child-kind", fmt::format("{} -> {}", nodes[i].id, child.id));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Queries

std::vector<NodeIndex> closure(const ActivitySnapshot& snapshot, NodeIndex node,
                               Direction direction) {
  snapshot.node(node);  // range check
  std::vector<bool> seen(snapshot.size(), false);
  std::vector<NodeIndex> result;
  std::vector<NodeIndex> stack{node};
  seen[node.value] = true;
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    auto links = direction == Direction::kAncestors ? snapshot.parents(u)
                                                    : snapshot.children(u);
    for (const Link& l : links) {
      if (seen[l.node.value]) continue;
      seen[l.node.value] = true;
      result.push_back(l.node);
      stack.push_back(l.node);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

int depth(const ActivitySnapshot& snapshot, NodeIndex node) {
  snapshot.node(node);
  if (!snapshot.acyclic()) {
    throw DataError("depth is undefined on a cyclic snapshot");
  }
  const int d = snapshot.data_->depth[node.value];
  if (d == 0) {
    throw DataError(fmt::format("node '{}' is not reachable from the root",
                                snapshot.node(node).id));
  }
  return d;
}

PropertyResolution resolve_property(const ActivitySnapshot& snapshot,
                                    NodeIndex node, std::string_view key) {
  if (key.empty()) throw InvalidArgument("property key must not be empty");
  const auto& self = snapshot.node(node);
  if (auto it = self.properties.find(std::string(key));
      it != self.properties.end()) {
    return PropertyValue{std::string(key), it->second, PropertyOrigin::kAssigned,
                         node};
  }

  // Breadth-first over generalizations, one distance level at a time.
  std::vector<bool> seen(snapshot.size(), false);
  seen[node.value] = true;
  std::vector<NodeIndex> frontier{node};
  while (!frontier.empty()) {
    std::vector<NodeIndex> next;
    for (NodeIndex u : frontier) {
      for (const Link& p : snapshot.parents(u)) {
        if (!seen[p.node.value]) {
          seen[p.node.value] = true;
          next.push_back(p.node);
        }
      }
    }
    std::vector<PropertyValue> found;
    for (NodeIndex u : next) {
      const auto& props = snapshot.node(u).properties;
      if (auto it = props.find(std::string(key)); it != props.end()) {
        found.push_back(PropertyValue{std::string(key), it->second,
                                      PropertyOrigin::kInherited, u});
      }
    }
    if (!found.empty()) {
      std::sort(found.begin(), found.end(),
                [&](const PropertyValue& a, const PropertyValue& b) {
                  return snapshot.node(a.source).title <
                         snapshot.node(b.source).title;
                });
      const bool agree =
          std::all_of(found.begin(), found.end(), [&](const PropertyValue& v) {
            return v.value == found.front().value;
          });
      if (agree) return found.front();
      return PropertyConflict{std::string(key), std::move(found)};
    }
    frontier = std::move(next);
  }
  return std::monostate{};
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t sum = a + b;
  return sum < a ? std::numeric_limits<std::uint64_t>::max() : sum;
}

}  // namespace

DepthStats snapshot_stats(const ActivitySnapshot& snapshot) {
  DepthStats stats;
  bool has_source_tasks = false;
  for (std::uint32_t i = 0; i < snapshot.size(); ++i) {
    const auto& node = snapshot.node(NodeIndex{i});
    switch (node.kind) {
      case NodeKind::kGeneric:
        ++stats.generic;
        break;
      case NodeKind::kAtomic:
        ++stats.atomic;
        break;
      case NodeKind::kSourceTask:
        ++stats.source_task;
        has_source_tasks = true;
        break;
    }
    if (snapshot.parents(NodeIndex{i}).size() >= 2) ++stats.multiple_inheritance;
  }
  if (!snapshot.acyclic() || !snapshot.has_root()) {
    throw DataError("snapshot_stats requires an acyclic snapshot with a root");
  }

  // paths[v][len] = number of distinct root paths of `len` nodes ending at v.
  const std::size_t n = snapshot.size();
  std::vector<std::vector<std::uint64_t>> paths(n);
  paths[snapshot.root().value] = {0, 1};
  for (NodeIndex u : snapshot.topological_order()) {
    const auto& from = paths[u.value];
    if (from.empty()) continue;
    for (const Link& c : snapshot.children(u)) {
      auto& to = paths[c.node.value];
      if (to.size() < from.size() + 1) to.resize(from.size() + 1, 0);
      for (std::size_t len = 1; len < from.size(); ++len) {
        to[len + 1] = saturating_add(to[len + 1], from[len]);
      }
    }
  }

  std::map<int, std::uint64_t> histogram;
  for (std::uint32_t i = 0; i < n; ++i) {
    const NodeIndex idx{i};
    const bool target = has_source_tasks
                            ? snapshot.node(idx).kind == NodeKind::kSourceTask
                            : snapshot.children(idx).empty();
    if (!target) continue;
    const auto& counts = paths[i];
    for (std::size_t len = 1; len < counts.size(); ++len) {
      if (counts[len] == 0) continue;
      histogram[static_cast<int>(len)] =
          saturating_add(histogram[static_cast<int>(len)], counts[len]);
    }
  }
  if (histogram.empty()) return stats;

  stats.min_path_length = histogram.begin()->first;
  stats.max_path_length = histogram.rbegin()->first;
  for (const auto& [len, count] : histogram) {
    stats.path_count = saturating_add(stats.path_count, count);
  }
  // Median of the multiset; mean of the two middle values when even.
  auto nth = [&](std::uint64_t rank) {  // 0-based
    std::uint64_t seen = 0;
    for (const auto& [len, count] : histogram) {
      if (rank < seen + count) return len;
      seen += count;
    }
    return histogram.rbegin()->first;
  };
  const std::uint64_t total = stats.path_count;
  if (total % 2 == 1) {
    stats.median_path_length = nth(total / 2);
  } else {
    stats.median_path_length = (nth(total / 2 - 1) + nth(total / 2)) / 2.0;
  }
  return stats;
}

}  // namespace workgraph
