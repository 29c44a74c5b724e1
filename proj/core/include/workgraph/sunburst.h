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

// Sunburst rendering of a tally: the hierarchy is unrolled into a tree from
// the root, one ring per level, and a node with several parents appears once
// under each of them.

#ifndef WORKGRAPH_SUNBURST_H_
#define WORKGRAPH_SUNBURST_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "workgraph/ontology.h"

namespace workgraph {

enum class ArcWeighting {
  kDescendants,  // distinct descendant activities + 1
  kLeaves,       // distinct leaf activities below (1 for a leaf)
};

struct SunburstOptions {
  int max_depth = 5;               // rings drawn, the root ring included
  double color_scale_max = 1.0;    // fraction at which intensity saturates
  ArcWeighting weighting = ArcWeighting::kDescendants;
};

struct Arc {
  std::string node_id;  // empty for collection separators
  std::string title;    // collection label for separators
  int ring = 0;
  double start = 0.0;  // degrees, clockwise from 12 o'clock
  double end = 0.0;
  double percent = 0.0;
  double intensity = 0.0;  // min(percent / 100 / color_scale_max, 1)
  bool dashed = false;     // node drawn under two or more parents
  bool gray = false;       // percent == 0
  bool collection = false;
  int parent = -1;  // index into arcs; -1 for the root

  double span() const { return end - start; }
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct SunburstModel {
  // Pre-order: an arc, its collection separators, then its child subtrees.
  std::vector<Arc> arcs;
  int max_depth = 0;
  double color_scale_max = 1.0;
  ArcWeighting weighting = ArcWeighting::kDescendants;

  friend bool operator==(const SunburstModel&, const SunburstModel&) = default;
};

// `percent` holds each node's aggregated share in percent, indexed by
// NodeIndex. Children are ordered by (collection label, title), unlabelled
// children first, and share the parent's span in proportion to their
// weight. Throws InvalidArgument on max_depth < 1, color_scale_max <= 0, or
// a percent vector of the wrong size; DataError for a snapshot without a
// root.
SunburstModel build_sunburst(const ActivitySnapshot& snapshot,
                             const std::vector<double>& percent,
                             const SunburstOptions& options = {});

struct SvgOptions {
  int size = 800;                  // width and height in px
  double label_min_degrees = 3.0;  // narrower arcs stay unlabelled
};

// Self-contained SVG 1.1: one <path> per arc (the root is a disc) and a
// <text> per labelled arc. Deterministic bytes for a given model.
std::string emit_svg(const SunburstModel& model, const SvgOptions& options = {});

// JSON document, schema "workgraph-sunburst/1", nesting arcs as in the
// tree. parse_doc(emit_doc(m)) == m. parse_doc throws SchemaError.
std::string emit_doc(const SunburstModel& model);
SunburstModel parse_doc(std::string_view bytes);

}  // namespace workgraph

#endif  // WORKGRAPH_SUNBURST_H_
