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

// Activity ontology: an immutable multiple-inheritance DAG of work
// activities.
//
// A snapshot holds nodes (activities) and specialization edges
// (parent = generalization, child = specialization). Edges may carry a
// collection label that groups sibling specializations under the same parent;
// collections are labels, not nodes, so they never contribute to depth or to
// node counts.
//
// On construction the node list is sorted by id and the edge list by
// (parent, child, collection). Dense NodeIndex handles follow that order, so
// two snapshots built from permutations of the same input are identical.
// Structural problems (cycles, orphans, dangling edges, ...) never throw at
// construction; they are reported by validate().

#ifndef WORKGRAPH_ONTOLOGY_H_
#define WORKGRAPH_ONTOLOGY_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace workgraph {

enum class NodeKind { kGeneric, kAtomic, kSourceTask };

std::string_view to_string(NodeKind kind);
// Accepts "generic", "atomic" and "source_task"; throws SchemaError otherwise.
NodeKind parse_node_kind(std::string_view text);

// A property value is either numeric or a categorical tag.
using PropertyDatum = std::variant<double, std::string>;

struct ActivityNode {
  std::string id;
  std::string title;
  NodeKind kind = NodeKind::kGeneric;
  std::optional<std::string> definition;
  std::vector<std::string> synonyms;
  // Values assigned at this node. Inherited values are computed on demand.
  std::map<std::string, PropertyDatum> properties;

  friend bool operator==(const ActivityNode&, const ActivityNode&) = default;
};

struct SpecializationEdge {
  std::string parent;
  std::string child;
  std::optional<std::string> collection;

  friend bool operator==(const SpecializationEdge&,
                         const SpecializationEdge&) = default;
  friend auto operator<=>(const SpecializationEdge&,
                          const SpecializationEdge&) = default;
};

// Dense handle into one snapshot. Meaningless across snapshots.
struct NodeIndex {
  std::uint32_t value = 0;

  friend bool operator==(NodeIndex, NodeIndex) = default;
  friend auto operator<=>(NodeIndex, NodeIndex) = default;
};

// One adjacency entry: the node on the other end and the edge it came from.
struct Link {
  NodeIndex node;
  std::uint32_t edge = 0;
};

class ActivitySnapshot {
 public:
  ActivitySnapshot(std::string version, std::vector<ActivityNode> nodes,
                   std::vector<SpecializationEdge> edges, std::string root);

  const std::string& version() const { return data_->version; }
  const std::string& root_id() const { return data_->root_id; }
  const std::vector<ActivityNode>& nodes() const { return data_->nodes; }
  const std::vector<SpecializationEdge>& edges() const { return data_->edges; }
  std::size_t size() const { return data_->nodes.size(); }

  bool has_root() const { return data_->root.has_value(); }
  // Throws UnknownNodeError when the declared root id is not a node.
  NodeIndex root() const;

  const ActivityNode& node(NodeIndex index) const;
  const SpecializationEdge& edge(std::uint32_t index) const {
    return data_->edges.at(index);
  }

  std::optional<NodeIndex> find(std::string_view id) const;
  std::optional<NodeIndex> find_by_title(std::string_view title) const;
  // Like find()/find_by_title() but throw UnknownNodeError.
  NodeIndex require(std::string_view id) const;
  NodeIndex require_title(std::string_view title) const;

  // Adjacency over edges whose endpoints both exist. Sorted by node index.
  std::span<const Link> parents(NodeIndex index) const;
  std::span<const Link> children(NodeIndex index) const;

  bool acyclic() const { return data_->acyclic; }
  // Kahn order over every node; empty when the graph has a cycle.
  std::span<const NodeIndex> topological_order() const { return data_->topo; }

  friend bool operator==(const ActivitySnapshot& a,
                         const ActivitySnapshot& b);

 private:
  friend int depth(const ActivitySnapshot&, NodeIndex);

  // Shared and never mutated after construction; copies are cheap and
  // safe to read from any number of threads.
  struct Data {
    std::string version;
    std::string root_id;
    std::vector<ActivityNode> nodes;
    std::vector<SpecializationEdge> edges;
    std::optional<NodeIndex> root;
    std::unordered_map<std::string_view, NodeIndex> by_id;
    std::unordered_map<std::string_view, NodeIndex> by_title;
    std::vector<std::vector<Link>> parents;
    std::vector<std::vector<Link>> children;
    std::vector<NodeIndex> topo;
    // Longest root path in nodes; 0 for nodes the root cannot reach.
    std::vector<int> depth;
    bool acyclic = false;
  };

  void check(NodeIndex index) const;

  std::shared_ptr<const Data> data_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  // Stable rule name: "empty-title", "duplicate-title", "duplicate-id",
  // "missing-root", "root-has-parent", "dangling-edge", "duplicate-edge",
  // "cycle", "orphan", "unreachable", "atomic-child-kind",
  // "source-task-child".
  std::string rule;
  // The offending node id(s) or edge, as text.
  std::string subject;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  // "<rule>: <subject>" per line.
  std::string to_string() const;
};

ValidationReport validate(const ActivitySnapshot& snapshot);

// ---------------------------------------------------------------------------
// Structural queries

enum class Direction { kAncestors, kDescendants };

// Transitive closure excluding `node`; each node once, sorted by index.
std::vector<NodeIndex> closure(const ActivitySnapshot& snapshot, NodeIndex node,
                               Direction direction);

// Number of nodes on the longest root-to-node path; depth(root) == 1.
// Throws DataError on a cyclic snapshot or a node the root cannot reach.
int depth(const ActivitySnapshot& snapshot, NodeIndex node);

// ---------------------------------------------------------------------------
// Property inheritance

enum class PropertyOrigin { kAssigned, kInherited };

struct PropertyValue {
  std::string key;
  PropertyDatum value;
  PropertyOrigin origin = PropertyOrigin::kAssigned;
  // Node that carries the assignment.
  NodeIndex source;

  friend bool operator==(const PropertyValue&, const PropertyValue&) = default;
};

// Equidistant ancestors assigning different values.
struct PropertyConflict {
  std::string key;
  std::vector<PropertyValue> candidates;

  friend bool operator==(const PropertyConflict&,
                         const PropertyConflict&) = default;
};

// monostate: no node on any root path assigns the key.
using PropertyResolution =
    std::variant<std::monostate, PropertyValue, PropertyConflict>;

// The node's own assignment wins. Otherwise the nearest assigning ancestors
// (minimum edge distance) decide; if they disagree the result is a conflict
// listing every candidate ordered by source title. Throws InvalidArgument on
// an empty key.
PropertyResolution resolve_property(const ActivitySnapshot& snapshot,
                                    NodeIndex node, std::string_view key);

// ---------------------------------------------------------------------------
// Statistics

struct DepthStats {
  std::size_t generic = 0;
  std::size_t atomic = 0;
  std::size_t source_task = 0;
  // Number of maximal root paths measured (saturates at UINT64_MAX).
  std::uint64_t path_count = 0;
  int min_path_length = 0;
  int max_path_length = 0;
  double median_path_length = 0.0;
  // Nodes with two or more parents.
  std::size_t multiple_inheritance = 0;
};

// Path lengths count nodes. Paths end at source-task nodes when the snapshot
// has any, otherwise at sinks. Every distinct root path is counted, so a node
// reachable along two routes contributes two paths.
DepthStats snapshot_stats(const ActivitySnapshot& snapshot);

}  // namespace workgraph

#endif  // WORKGRAPH_ONTOLOGY_H_
