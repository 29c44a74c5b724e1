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

// Snapshot documents ("workgraph-snapshot/1").
//
//   {
//     "schema": "workgraph-snapshot/1",
//     "version": "<tag>",
//     "root": "<node id>",
//     "nodes": [{"id", "title", "kind", "definition"?, "synonyms": [],
//                "properties": {"<key>": <number or string>}}],
//     "edges": [{"parent", "child", "collection"?}]
//   }
//
// save_snapshot() writes canonical bytes: object keys sorted, nodes sorted by
// id, edges by (parent, child, collection), two-space indent, trailing
// newline.

#ifndef WORKGRAPH_SNAPSHOT_IO_H_
#define WORKGRAPH_SNAPSHOT_IO_H_

#include <span>
#include <string>
#include <string_view>

#include "workgraph/error.h"
#include "workgraph/ontology.h"

namespace workgraph {

inline constexpr std::string_view kSnapshotSchema = "workgraph-snapshot/1";

// Thrown by load_snapshot() when the document parses but fails validate().
class ValidationError : public DataError {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct LoadOptions {
  bool validate = true;
};

// Throws SchemaError for malformed documents or a schema mismatch and
// ValidationError when validation is requested and fails.
ActivitySnapshot load_snapshot(std::string_view bytes, LoadOptions options = {});
std::string save_snapshot(const ActivitySnapshot& snapshot);

// Nested prompt form: every title is a key whose value is the sub-ontology
// below it; collection labels appear as "[label]" keys wrapping their
// members. Children are ordered by title, uncollected children before
// collections, collections by label. A multiply-inherited node is repeated
// under each parent. Source-task nodes are omitted. Compact output.
std::string emit_prompt_ontology(const ActivitySnapshot& snapshot);

// Flat prompt form for a retrieved shortlist: {"<title>": {}, ...} in the
// given order.
std::string emit_prompt_shortlist(const ActivitySnapshot& snapshot,
                                  std::span<const NodeIndex> nodes);

}  // namespace workgraph

#endif  // WORKGRAPH_SNAPSHOT_IO_H_
