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

// Run manifests: what went in, what came out, with which settings.

#ifndef WORKGRAPH_TOOLS_MANIFEST_H_
#define WORKGRAPH_TOOLS_MANIFEST_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace workgraph::cli {

std::string sha256_hex(std::string_view bytes);

// ISO-8601 UTC. SOURCE_DATE_EPOCH, when set to an integer, replaces the
// clock so that manifests can be reproduced byte for byte.
std::string manifest_timestamp();

class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv);

  void add_input(const std::string& path, std::string_view bytes);
  void add_output(const std::string& path, std::string_view bytes);
  void set_snapshot_version(std::string version) { snapshot_version_ = std::move(version); }
  nlohmann::ordered_json& config() { return config_; }

  // Pretty JSON with a trailing newline; keys in a fixed order.
  std::string to_json() const;

 private:
  struct Entry {
    std::string path;
    std::string sha256;
    std::size_t bytes;
  };

  std::string command_;
  std::vector<std::string> argv_;
  std::vector<Entry> inputs_;
  std::vector<Entry> outputs_;
  std::string snapshot_version_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
};

}  // namespace workgraph::cli

#endif  // WORKGRAPH_TOOLS_MANIFEST_H_
