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

#include "manifest.h"

#include <chrono>
#include <cstdlib>
#include <ctime>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "workgraph/error.h"

#ifndef WORKGRAPH_VERSION
#define WORKGRAPH_VERSION "0.0.0"
#endif

namespace workgraph::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string manifest_timestamp() {
  std::time_t seconds = 0;
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  char* end = nullptr;
  const long long parsed = epoch ? std::strtoll(epoch, &end, 10) : 0;
  if (epoch && *epoch && end && *end == '\0') {
    seconds = static_cast<std::time_t>(parsed);
  } else {
    seconds = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char text[32];
  std::strftime(text, sizeof text, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return text;
}

Manifest::Manifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)) {}

void Manifest::add_input(const std::string& path, std::string_view bytes) {
  inputs_.push_back({path, sha256_hex(bytes), bytes.size()});
}

void Manifest::add_output(const std::string& path, std::string_view bytes) {
  outputs_.push_back({path, sha256_hex(bytes), bytes.size()});
}

std::string Manifest::to_json() const {
  using nlohmann::ordered_json;
  const auto entries = [](const std::vector<Entry>& list) {
    ordered_json array = ordered_json::array();
    for (const auto& e : list) {
      array.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    }
    return array;
  };
  ordered_json doc;
  doc["tool"] = "workgraph";
  doc["tool_version"] = WORKGRAPH_VERSION;
  doc["command"] = command_;
  doc["argv"] = argv_;
  doc["inputs"] = entries(inputs_);
  doc["outputs"] = entries(outputs_);
  if (!snapshot_version_.empty()) doc["snapshot_version"] = snapshot_version_;
  doc["config"] = config_;
  doc["timestamp"] = manifest_timestamp();
  return doc.dump(2) + "\n";
}

}  // namespace workgraph::cli
