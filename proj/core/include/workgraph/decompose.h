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

#ifndef WORKGRAPH_DECOMPOSE_H_
#define WORKGRAPH_DECOMPOSE_H_

#include <string>
#include <string_view>
#include <vector>

namespace workgraph {

struct VerbObject {
  std::string verb;    // lower case
  std::string object;  // as written, may be empty

  std::string to_string() const;
  friend bool operator==(const VerbObject&, const VerbObject&) = default;
};

// Rule-based split of a compound task into verb-object pairs.
//
// The text is cut at commas and at the word "and":
//  * "Acquire, distribute and store supplies": every piece but the last is a
//    single word, so each is a verb sharing the last piece's object.
//  * "acquire supplies, and distribute supplies": when every separator is
//    ", and" and every piece has an object, each piece is its own pair. This
//    is the form join_pairs() produces.
//  * anything else is one pair: first word is the verb, the rest the object.
std::vector<VerbObject> decompose_task(std::string_view text);

// "v1 o1, and v2 o2, ..." ; decompose_task(join_pairs(p)) == p.
std::string join_pairs(const std::vector<VerbObject>& pairs);

}  // namespace workgraph

#endif  // WORKGRAPH_DECOMPOSE_H_
