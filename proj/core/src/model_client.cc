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

#include "workgraph/model_client.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "httplib.h"
#include "json.hpp"

namespace workgraph {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Text after "Application Title:" up to the end of its line; the classify
// prompts put the title on the following line, the extraction prompt on the
// same line.
std::string prompt_title(std::string_view user_prompt) {
  constexpr std::string_view kMarker = "Application Title:";
  const auto at = user_prompt.find(kMarker);
  if (at == std::string_view::npos) return {};
  auto rest = user_prompt.substr(at + kMarker.size());
  const auto start = rest.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos) return {};
  rest = rest.substr(start);
  return std::string(trim(rest.substr(0, rest.find('\n'))));
}

std::string_view prompt_stage(std::string_view system_prompt,
                              std::string_view user_prompt) {
  if (user_prompt.find("## Correction:") != std::string_view::npos) return "reask";
  if (system_prompt.find("\"most_appropriate_node\"") != std::string_view::npos) {
    return "select";
  }
  return "extract";
}

}  // namespace

ScriptedModelClient ScriptedModelClient::parse(std::string_view script) {
  ScriptedModelClient client;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= script.size()) {
    auto end = script.find('\n', pos);
    if (end == std::string_view::npos) end = script.size();
    const auto line = script.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t from = 0;
    for (;;) {
      const auto tab = line.find('\t', from);
      fields.push_back(line.substr(from, tab - from));
      if (tab == std::string_view::npos) break;
      from = tab + 1;
    }
    std::string stage;
    std::string_view reply;
    if (fields.size() == 2) {
      reply = fields[1];
    } else if (fields.size() == 3) {
      stage = std::string(trim(fields[1]));
      if (stage != "extract" && stage != "select" && stage != "reask") {
        throw DataError(fmt::format("stub script line {}: unknown stage '{}'", line_no, stage));
      }
      reply = fields[2];
    } else {
      throw DataError(fmt::format(
          "stub script line {}: expected 2 or 3 tab-separated fields", line_no));
    }
    auto key = std::make_pair(std::string(trim(fields[0])), stage);
    if (key.first.empty()) {
      throw DataError(fmt::format("stub script line {}: empty record name", line_no));
    }
    if (!client.replies_.emplace(key, std::string(trim(reply))).second) {
      throw DataError(fmt::format("stub script line {}: duplicate entry for '{}'",
                                  line_no, key.first));
    }
  }
  return client;
}

std::string ScriptedModelClient::complete(const std::string& system_prompt,
                                          const std::string& user_prompt,
                                          std::chrono::milliseconds deadline) {
  const auto title = prompt_title(user_prompt);
  const auto stage = std::string(prompt_stage(system_prompt, user_prompt));
  auto it = replies_.find(std::make_pair(title, stage));
  if (it == replies_.end()) it = replies_.find(std::make_pair(title, std::string()));
  if (it == replies_.end()) {
    throw ModelError(fmt::format("stub has no reply for '{}' ({})", title, stage));
  }
  std::string_view reply = it->second;

  if (reply.starts_with("!delay ")) {
    reply.remove_prefix(7);
    const auto space = reply.find(' ');
    long long ms = 0;
    try {
      ms = std::stoll(std::string(reply.substr(0, space)));
    } catch (const std::exception&) {
      throw ModelError(fmt::format("stub reply for '{}' has a bad delay", title));
    }
    reply = space == std::string_view::npos ? std::string_view{} : reply.substr(space + 1);
    if (ms >= deadline.count()) {
      std::this_thread::sleep_for(deadline);
      throw ModelTimeout(fmt::format("no reply for '{}' within {} ms", title,
                                     deadline.count()));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
  }
  if (reply == "!timeout") {
    throw ModelTimeout(fmt::format("no reply for '{}' within {} ms", title,
                                   deadline.count()));
  }
  if (reply.starts_with("!error")) {
    throw ModelError(std::string(trim(reply.substr(6))));
  }
  return std::string(reply);
}

// ---------------------------------------------------------------------------
// HTTP

HttpModelClient::HttpModelClient(std::string_view endpoint, std::string token)
    : token_(std::move(token)) {
  constexpr std::string_view kScheme = "http://";
  if (!endpoint.starts_with(kScheme)) {
    throw InvalidArgument(fmt::format("model endpoint '{}' must start with http://",
                                      endpoint));
  }
  auto rest = endpoint.substr(kScheme.size());
  const auto slash = rest.find('/');
  auto authority = rest.substr(0, slash);
  path_ = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    try {
      std::size_t used = 0;
      const std::string digits(authority.substr(colon + 1));
      port_ = std::stoi(digits, &used);
      if (used != digits.size() || port_ <= 0 || port_ > 65535) throw std::out_of_range("");
    } catch (const std::exception&) {
      throw InvalidArgument(fmt::format("bad port in model endpoint '{}'", endpoint));
    }
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) {
    throw InvalidArgument(fmt::format("model endpoint '{}' has no host", endpoint));
  }
  host_ = std::string(authority);
}

HttpModelClient::~HttpModelClient() = default;

std::string HttpModelClient::complete(const std::string& system_prompt,
                                      const std::string& user_prompt,
                                      std::chrono::milliseconds deadline) {
  // One connection per call keeps the client free of shared mutable state.
  httplib::Client client(host_, port_);
  client.set_connection_timeout(deadline);
  client.set_read_timeout(deadline);
  client.set_write_timeout(deadline);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  const nlohmann::json body{{"system_prompt", system_prompt},
                            {"user_prompt", user_prompt}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const auto what = fmt::format("model request to {}:{} failed: {}", host_, port_,
                                  httplib::to_string(err));
    if (err == httplib::Error::Read || err == httplib::Error::Write ||
        err == httplib::Error::ConnectionTimeout) {
      throw ModelTimeout(what);
    }
    throw ModelError(what);
  }
  if (res->status != 200) {
    throw ModelError(fmt::format("model endpoint answered HTTP {}", res->status));
  }
  const auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (!reply.is_object() || !reply.contains("completion") ||
      !reply["completion"].is_string()) {
    throw ModelError("model endpoint reply lacks a \"completion\" string");
  }
  return reply["completion"].get<std::string>();
}

std::unique_ptr<ModelClient> make_model_client(std::string_view spec) {
  if (spec.starts_with("stub:")) {
    const std::string path(spec.substr(5));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(fmt::format("cannot read stub script '{}'", path));
    std::ostringstream text;
    text << in.rdbuf();
    return std::make_unique<ScriptedModelClient>(ScriptedModelClient::parse(text.str()));
  }
  if (spec.starts_with("http:")) {
    std::string endpoint(spec.starts_with("http://") ? spec : spec.substr(5));
    if (!endpoint.starts_with("http://")) endpoint = "http://" + endpoint;
    const char* token = std::getenv("WORKGRAPH_MODEL_TOKEN");
    return std::make_unique<HttpModelClient>(endpoint, token ? token : "");
  }
  throw InvalidArgument(fmt::format(
      "model must be stub:<script> or http:<endpoint>, got '{}'", spec));
}

}  // namespace workgraph
