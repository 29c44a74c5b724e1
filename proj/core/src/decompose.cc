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

#include "workgraph/decompose.h"

#include <algorithm>
#include <cctype>

namespace workgraph {

namespace {

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string join(const std::vector<std::string>& tokens, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

VerbObject single_pair(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return {};
  return {lower(tokens.front()), join(tokens, 1)};
}

struct Piece {
  std::vector<std::string> tokens;
  // Separator that precedes this piece: "", ",", "and" or ", and".
  std::string separator;
};

std::vector<Piece> split_coordination(const std::vector<std::string>& tokens) {
  std::vector<Piece> pieces(1);
  std::string pending;
  for (std::string token : tokens) {
    bool comma = false;
    if (token.size() > 1 && token.back() == ',') {
      token.pop_back();
      comma = true;
    } else if (token == ",") {
      pending += ",";
      continue;
    }
    if (lower(token) == "and") {
      pending += pending.empty() ? "and" : " and";
      continue;
    }
    if (!pending.empty()) {
      pieces.push_back(Piece{{}, pending});
      pending.clear();
    }
    pieces.back().tokens.push_back(token);
    if (comma) pending = ",";
  }
  return pieces;
}

}  // namespace

std::string VerbObject::to_string() const {
  return object.empty() ? verb : verb + " " + object;
}

std::vector<VerbObject> decompose_task(std::string_view text) {
  const auto tokens = words(text);
  if (tokens.empty()) return {};
  const auto pieces = split_coordination(tokens);
  const bool well_formed =
      pieces.size() >= 2 &&
      std::all_of(pieces.begin(), pieces.end(),
                  [](const Piece& p) { return !p.tokens.empty(); });
  if (!well_formed) return {single_pair(tokens)};

  // Shared trailing object: "Acquire, distribute and store supplies".
  const auto& last = pieces.back().tokens;
  const bool leading_verbs =
      std::all_of(pieces.begin(), pieces.end() - 1,
                  [](const Piece& p) { return p.tokens.size() == 1; });
  if (leading_verbs && last.size() >= 2) {
    const std::string object = join(last, 1);
    std::vector<VerbObject> out;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      out.push_back({lower(pieces[i].tokens.front()), object});
    }
    out.push_back({lower(last.front()), object});
    return out;
  }

  // Canonical pair list: "plan methods, and develop methods".
  const bool pair_list =
      std::all_of(pieces.begin() + 1, pieces.end(),
                  [](const Piece& p) { return p.separator == ", and"; }) &&
      std::all_of(pieces.begin(), pieces.end(),
                  [](const Piece& p) { return p.tokens.size() >= 2; });
  if (pair_list) {
    std::vector<VerbObject> out;
    for (const auto& piece : pieces) out.push_back(single_pair(piece.tokens));
    return out;
  }
  return {single_pair(tokens)};
}

std::string join_pairs(const std::vector<VerbObject>& pairs) {
  std::string out;
  for (const auto& pair : pairs) {
    if (!out.empty()) out += ", and ";
    out += pair.to_string();
  }
  return out;
}

}  // namespace workgraph
