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

#include "workgraph/snapshot_io.h"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"

namespace workgraph {

using nlohmann::json;

ValidationError::ValidationError(ValidationReport report)
    : DataError(fmt::format("snapshot failed validation ({} violations):\n{}",
                            report.violations.size(), report.to_string())),
      report_(std::move(report)) {}

namespace {

const json& member(const json& object, const char* key, const char* where) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw SchemaError(fmt::format("{}: missing required field '{}'", where, key));
  }
  return *it;
}

std::string string_member(const json& object, const char* key,
                          const char* where) {
  const json& value = member(object, key, where);
  if (!value.is_string()) {
    throw SchemaError(fmt::format("{}: field '{}' must be a string", where, key));
  }
  return value.get<std::string>();
}

std::optional<std::string> optional_string(const json& object, const char* key,
                                           const char* where) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw SchemaError(fmt::format("{}: field '{}' must be a string", where, key));
  }
  return it->get<std::string>();
}

ActivityNode parse_node(const json& doc, std::size_t position) {
  const std::string where = fmt::format("nodes[{}]", position);
  if (!doc.is_object()) throw SchemaError(where + ": expected an object");
  ActivityNode node;
  node.id = string_member(doc, "id", where.c_str());
  node.title = string_member(doc, "title", where.c_str());
  node.kind = parse_node_kind(string_member(doc, "kind", where.c_str()));
  node.definition = optional_string(doc, "definition", where.c_str());
  if (auto it = doc.find("synonyms"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError(where + ": 'synonyms' must be an array");
    for (const auto& s : *it) {
      if (!s.is_string()) throw SchemaError(where + ": synonyms must be strings");
      node.synonyms.push_back(s.get<std::string>());
    }
  }
  if (auto it = doc.find("properties"); it != doc.end()) {
    if (!it->is_object()) {
      throw SchemaError(where + ": 'properties' must be an object");
    }
    for (const auto& [key, value] : it->items()) {
      if (value.is_number()) {
        node.properties.emplace(key, value.get<double>());
      } else if (value.is_string()) {
        node.properties.emplace(key, value.get<std::string>());
      } else {
        throw SchemaError(fmt::format(
            "{}: property '{}' must be a number or a string", where, key));
      }
    }
  }
  return node;
}

SpecializationEdge parse_edge(const json& doc, std::size_t position) {
  const std::string where = fmt::format("edges[{}]", position);
  if (!doc.is_object()) throw SchemaError(where + ": expected an object");
  SpecializationEdge edge;
  edge.parent = string_member(doc, "parent", where.c_str());
  edge.child = string_member(doc, "child", where.c_str());
  edge.collection = optional_string(doc, "collection", where.c_str());
  return edge;
}

}  // namespace

ActivitySnapshot load_snapshot(std::string_view bytes, LoadOptions options) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(fmt::format("malformed snapshot document: {}", e.what()));
  }
  if (!doc.is_object()) throw SchemaError("snapshot document must be an object");

  const std::string schema = string_member(doc, "schema", "snapshot");
  if (schema != kSnapshotSchema) {
    throw SchemaError(fmt::format("unsupported snapshot schema '{}' (expected '{}')",
                                  schema, kSnapshotSchema));
  }
  std::string version = string_member(doc, "version", "snapshot");
  std::string root = string_member(doc, "root", "snapshot");

  const json& nodes_doc = member(doc, "nodes", "snapshot");
  const json& edges_doc = member(doc, "edges", "snapshot");
  if (!nodes_doc.is_array()) throw SchemaError("snapshot: 'nodes' must be an array");
  if (!edges_doc.is_array()) throw SchemaError("snapshot: 'edges' must be an array");

  std::vector<ActivityNode> nodes;
  nodes.reserve(nodes_doc.size());
  for (std::size_t i = 0; i < nodes_doc.size(); ++i) {
    nodes.push_back(parse_node(nodes_doc[i], i));
  }
  std::vector<SpecializationEdge> edges;
  edges.reserve(edges_doc.size());
  for (std::size_t i = 0; i < edges_doc.size(); ++i) {
    edges.push_back(parse_edge(edges_doc[i], i));
  }

  ActivitySnapshot snapshot(std::move(version), std::move(nodes),
                            std::move(edges), std::move(root));
  if (options.validate) {
    ValidationReport report = validate(snapshot);
    if (!report.ok()) throw ValidationError(std::move(report));
  }
  return snapshot;
}

std::string save_snapshot(const ActivitySnapshot& snapshot) {
  json nodes = json::array();
  for (const auto& node : snapshot.nodes()) {
    json entry = {{"id", node.id},
                  {"title", node.title},
                  {"kind", std::string(to_string(node.kind))},
                  {"synonyms", node.synonyms}};
    if (node.definition) entry["definition"] = *node.definition;
    json properties = json::object();
    for (const auto& [key, value] : node.properties) {
      std::visit([&](const auto& v) { properties[key] = v; }, value);
    }
    entry["properties"] = std::move(properties);
    nodes.push_back(std::move(entry));
  }
  json edges = json::array();
  for (const auto& edge : snapshot.edges()) {
    json entry = {{"parent", edge.parent}, {"child", edge.child}};
    if (edge.collection) entry["collection"] = *edge.collection;
    edges.push_back(std::move(entry));
  }
  json doc = {{"schema", std::string(kSnapshotSchema)},
              {"version", snapshot.version()},
              {"root", snapshot.root_id()},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Prompt form

namespace {

using ordered = nlohmann::ordered_json;

ordered prompt_subtree(const ActivitySnapshot& snapshot, NodeIndex node,
                       std::vector<bool>& on_path) {
  ordered out = ordered::object();
  std::vector<std::pair<std::string_view, NodeIndex>> loose;
  std::map<std::string_view, std::vector<std::pair<std::string_view, NodeIndex>>>
      collections;
  for (const Link& link : snapshot.children(node)) {
    const auto& child = snapshot.node(link.node);
    if (child.kind == NodeKind::kSourceTask) continue;
    const auto& label = snapshot.edge(link.edge).collection;
    if (label) {
      collections[*label].emplace_back(child.title, link.node);
    } else {
      loose.emplace_back(child.title, link.node);
    }
  }
  auto emit = [&](ordered& target,
                  std::vector<std::pair<std::string_view, NodeIndex>>& members) {
    std::sort(members.begin(), members.end());
    for (const auto& [title, index] : members) {
      if (on_path[index.value]) continue;  // cyclic input; validate() reports it
      on_path[index.value] = true;
      target[std::string(title)] = prompt_subtree(snapshot, index, on_path);
      on_path[index.value] = false;
    }
  };
  emit(out, loose);
  for (auto& [label, members] : collections) {
    ordered group = ordered::object();
    emit(group, members);
    out["[" + std::string(label) + "]"] = std::move(group);
  }
  return out;
}

}  // namespace

std::string emit_prompt_ontology(const ActivitySnapshot& snapshot) {
  std::vector<bool> on_path(snapshot.size(), false);
  const NodeIndex root = snapshot.root();
  on_path[root.value] = true;
  ordered doc = ordered::object();
  doc[snapshot.node(root).title] = prompt_subtree(snapshot, root, on_path);
  return doc.dump();
}

std::string emit_prompt_shortlist(const ActivitySnapshot& snapshot,
                                  std::span<const NodeIndex> nodes) {
  ordered doc = ordered::object();
  for (NodeIndex index : nodes) {
    doc[snapshot.node(index).title] = ordered::object();
  }
  return doc.dump();
}

}  // namespace workgraph
