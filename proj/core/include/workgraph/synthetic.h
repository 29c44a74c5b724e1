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

// Seeded generators for large test and benchmark inputs. Output depends only
// on the arguments, on every platform.

#ifndef WORKGRAPH_SYNTHETIC_H_
#define WORKGRAPH_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "workgraph/ontology.h"
#include "workgraph/records.h"

namespace workgraph {

struct SyntheticOntologyOptions {
  std::size_t nodes = 40'000;
  std::uint64_t seed = 1;
  // Share of atomic nodes given a second generic parent.
  double multi_parent_rate = 0.02;
  // Share of edges placed in a labelled collection.
  double collection_rate = 0.1;
};

// Roughly 30% generic, 50% atomic, 20% source-task nodes under a root
// titled "Act". Generic nodes form a random recursive tree; atomic nodes
// hang off generic ones; source tasks hang off atomic ones. The result
// passes validate(). Throws InvalidArgument when nodes < 4.
ActivitySnapshot synthetic_snapshot(const SyntheticOntologyOptions& options = {});

// Records named "app-000001" ... with launch dates between 2015 and 2024.
std::vector<AppRecord> synthetic_apps(std::size_t count, std::uint64_t seed);

// Stub script (see ScriptedModelClient) answering every record with a
// random non-source-task title; a `hallucination_rate` share of answers
// names a title that does not exist.
std::string synthetic_stub_script(const ActivitySnapshot& snapshot,
                                  const std::vector<AppRecord>& records, std::uint64_t seed,
                                  double hallucination_rate = 0.0);

}  // namespace workgraph

#endif  // WORKGRAPH_SYNTHETIC_H_
