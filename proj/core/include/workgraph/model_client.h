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

// Completion backends. The classifier only needs a text-in, text-out call
// with a deadline; everything else about the remote model stays behind this
// interface.

#ifndef WORKGRAPH_MODEL_CLIENT_H_
#define WORKGRAPH_MODEL_CLIENT_H_

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "workgraph/error.h"

namespace workgraph {

class ModelError : public DataError {
 public:
  using DataError::DataError;
};

class ModelTimeout : public ModelError {
 public:
  using ModelError::ModelError;
};

class ModelClient {
 public:
  virtual ~ModelClient() = default;

  // Returns the completion or throws ModelTimeout once `deadline` has
  // elapsed; other failures throw ModelError. Must be safe to call from
  // several threads at once.
  virtual std::string complete(const std::string& system_prompt,
                               const std::string& user_prompt,
                               std::chrono::milliseconds deadline) = 0;
};

// Deterministic replies keyed by record name, for tests and offline runs.
//
// Script format, one entry per line, tab separated, '#' starts a comment:
//
//   <record name> TAB <reply>
//   <record name> TAB <stage> TAB <reply>
//
// stage is "extract", "select" or "reask"; two-column rows answer any stage
// that has no specific row. The stage is read off the prompt: a system
// prompt asking for "most_appropriate_node" is a selection, anything else an
// extraction, and a user prompt carrying a correction block is a re-ask.
// The record name is the text following "Application Title:" in the user
// prompt.
//
// Replies are JSON text with no tabs or newlines, or one of:
//   !timeout              raise ModelTimeout
//   !error <message>      raise ModelError
//   !delay <ms> <reply>   sleep, then answer (timeout if ms >= deadline)
class ScriptedModelClient final : public ModelClient {
 public:
  // Throws DataError on a malformed script.
  static ScriptedModelClient parse(std::string_view script);

  std::string complete(const std::string& system_prompt,
                       const std::string& user_prompt,
                       std::chrono::milliseconds deadline) override;

  std::size_t size() const { return replies_.size(); }

 private:
  // Key: (record name, stage); stage "" is the fallback.
  std::map<std::pair<std::string, std::string>, std::string, std::less<>> replies_;
};

// POSTs {"system_prompt": ..., "user_prompt": ...} as JSON and reads the
// "completion" string from a JSON response. Plain http only. A bearer token
// is sent when `token` is non-empty.
class HttpModelClient final : public ModelClient {
 public:
  // `endpoint` is "http://host[:port][/path]"; throws InvalidArgument on
  // anything else.
  explicit HttpModelClient(std::string_view endpoint, std::string token = {});
  ~HttpModelClient() override;

  std::string complete(const std::string& system_prompt,
                       const std::string& user_prompt,
                       std::chrono::milliseconds deadline) override;

 private:
  std::string host_;
  int port_ = 80;
  std::string path_;
  std::string token_;
};

// "stub:<script file>" or "http:<endpoint>". The http token is read from
// WORKGRAPH_MODEL_TOKEN. Throws InvalidArgument on an unknown scheme and
// DataError when the stub script cannot be read.
std::unique_ptr<ModelClient> make_model_client(std::string_view spec);

}  // namespace workgraph

#endif  // WORKGRAPH_MODEL_CLIENT_H_
