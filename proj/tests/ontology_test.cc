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

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"
#include "workgraph/error.h"
#include "workgraph/ontology.h"

namespace workgraph {
namespace {

using testing::chain;
using testing::diamond;
using testing::make_snapshot;

std::set<std::string> ids(const ActivitySnapshot& s, const std::vector<NodeIndex>& list) {
  std::set<std::string> out;
  for (auto n : list) out.insert(s.node(n).id);
  return out;
}

bool has_rule(const ValidationReport& report, const std::string& rule,
              const std::string& subject = {}) {
  return std::any_of(report.violations.begin(), report.violations.end(), [&](const auto& v) {
    return v.rule == rule && (subject.empty() || v.subject == subject);
  });
}

TEST(ValidateTest, SingleRootIsClean) {
  EXPECT_TRUE(validate(make_snapshot({{"Act"}}, {})).ok());
}

TEST(ValidateTest, TwoNodeCycle) {
  const auto s = make_snapshot({{"Act"}, {"A"}, {"B"}}, {{"Act", "A"}, {"A", "B"}, {"B", "A"}});
  EXPECT_TRUE(has_rule(validate(s), "cycle"));
  EXPECT_FALSE(s.acyclic());
  EXPECT_TRUE(s.topological_order().empty());
}

TEST(ValidateTest, Orphan) {
  const auto s = make_snapshot({{"Act"}, {"C"}}, {});
  EXPECT_TRUE(has_rule(validate(s), "orphan", "C"));
}

TEST(ValidateTest, DanglingAndDuplicateEdges) {
  const auto s = make_snapshot({{"Act"}, {"A"}}, {{"Act", "A"}, {"Act", "A"}, {"A", "ghost"}});
  const auto report = validate(s);
  EXPECT_TRUE(has_rule(report, "duplicate-edge"));
  EXPECT_TRUE(has_rule(report, "dangling-edge"));
}

TEST(ValidateTest, KindRules) {
  const auto s = make_snapshot(
      {{"Act"}, {"a", NodeKind::kAtomic}, {"g"}, {"t", NodeKind::kSourceTask}, {"u"}},
      {{"Act", "a"}, {"a", "g"}, {"Act", "t"}, {"t", "u"}});
  const auto report = validate(s);
  EXPECT_TRUE(has_rule(report, "atomic-child-kind", "a -> g"));
  EXPECT_TRUE(has_rule(report, "source-task-child", "t -> u"));
}

TEST(ValidateTest, MissingRootAndDuplicateTitle) {
  std::vector<ActivityNode> nodes{{"a", "Same", NodeKind::kGeneric, {}, {}, {}},
                                  {"b", "Same", NodeKind::kGeneric, {}, {}, {}}};
  const ActivitySnapshot s("v", nodes, {{"a", "b", std::nullopt}}, "zzz");
  const auto report = validate(s);
  EXPECT_TRUE(has_rule(report, "missing-root"));
  EXPECT_TRUE(has_rule(report, "duplicate-title"));
  EXPECT_THROW(s.root(), UnknownNodeError);
}

TEST(ClosureTest, ChainAncestors) {
  const auto s = make_snapshot({{"Act"}, {"A"}, {"B"}}, {{"Act", "A"}, {"A", "B"}});
  EXPECT_EQ(ids(s, closure(s, s.require("B"), Direction::kAncestors)),
            (std::set<std::string>{"A", "Act"}));
}

TEST(ClosureTest, DiamondAncestorsOnce) {
  const auto s = diamond();
  const auto up = closure(s, s.require("D"), Direction::kAncestors);
  EXPECT_EQ(up.size(), 3u);
  EXPECT_EQ(ids(s, up), (std::set<std::string>{"A", "B", "C"}));
}

TEST(DepthTest, ChainAndLongestPath) {
  const auto c = make_snapshot({{"Act"}, {"A"}, {"B"}}, {{"Act", "A"}, {"A", "B"}});
  EXPECT_EQ(depth(c, c.require("B")), 3);
  const auto d = make_snapshot({{"Act"}, {"B"}, {"D"}}, {{"Act", "B"}, {"B", "D"}, {"Act", "D"}});
  EXPECT_EQ(depth(d, d.require("D")), 3);
}

TEST(DepthTest, UnreachableThrows) {
  const auto s = make_snapshot({{"Act"}, {"C"}}, {});
  EXPECT_THROW(depth(s, s.require("C")), DataError);
}

ActivitySnapshot with_properties(const ActivitySnapshot& s,
                                 const std::map<std::string, PropertyDatum>& values,
                                 const std::string& key = "ai_applicability") {
  auto nodes = s.nodes();
  for (auto& n : nodes) {
    if (auto it = values.find(n.id); it != values.end()) n.properties[key] = it->second;
  }
  return ActivitySnapshot(s.version(), nodes, s.edges(), s.root_id());
}

TEST(PropertyTest, InheritedFromRoot) {
  const auto s = with_properties(chain(3), {{"n0", std::string("high")}});
  const auto r = resolve_property(s, s.require("n2"), "ai_applicability");
  const auto* v = std::get_if<PropertyValue>(&r);
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(std::get<std::string>(v->value), "high");
  EXPECT_EQ(v->origin, PropertyOrigin::kInherited);
  EXPECT_EQ(s.node(v->source).id, "n0");
}

TEST(PropertyTest, OverrideWins) {
  const auto s =
      with_properties(chain(3), {{"n0", std::string("high")}, {"n1", std::string("low")}});
  const auto r = resolve_property(s, s.require("n2"), "ai_applicability");
  const auto& v = std::get<PropertyValue>(r);
  EXPECT_EQ(std::get<std::string>(v.value), "low");
  EXPECT_EQ(v.origin, PropertyOrigin::kInherited);
}

TEST(PropertyTest, EquidistantConflictSurfacesBoth) {
  const auto s = with_properties(diamond(), {{"B", 1.0}, {"C", 2.0}});
  const auto r = resolve_property(s, s.require("D"), "ai_applicability");
  const auto* conflict = std::get_if<PropertyConflict>(&r);
  ASSERT_NE(conflict, nullptr);
  ASSERT_EQ(conflict->candidates.size(), 2u);
  EXPECT_EQ(s.node(conflict->candidates[0].source).id, "B");
  EXPECT_EQ(s.node(conflict->candidates[1].source).id, "C");
}

TEST(PropertyTest, UnassignedKeyAndEmptyKey) {
  const auto s = chain(2);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(resolve_property(s, s.root(), "x")));
  EXPECT_THROW(resolve_property(s, s.root(), ""), InvalidArgument);
}

// Random tree: node i > 0 hangs off a uniformly chosen earlier node.
ActivitySnapshot random_tree(std::mt19937_64& rng, int n, std::vector<int>* parent_of) {
  std::vector<testing::NodeSpec> specs;
  std::vector<std::pair<std::string, std::string>> edges;
  parent_of->assign(n, -1);
  for (int i = 0; i < n; ++i) {
    specs.push_back({"t" + std::to_string(i)});
    if (i > 0) {
      const int p = std::uniform_int_distribution<int>(0, i - 1)(rng);
      (*parent_of)[i] = p;
      edges.emplace_back("t" + std::to_string(p), "t" + std::to_string(i));
    }
  }
  return make_snapshot(specs, edges);
}

TEST(PropertyTest, SingleInheritanceMatchesNaiveWalk) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 100; ++round) {
    std::vector<int> parent;
    const int n = std::uniform_int_distribution<int>(1, 100)(rng);
    auto tree = random_tree(rng, n, &parent);
    std::map<std::string, PropertyDatum> values;
    std::vector<int> assigned(n, -1);
    for (int i = 0; i < n; ++i) {
      if (rng() % 4 == 0) {
        assigned[i] = static_cast<int>(rng() % 3);
        values["t" + std::to_string(i)] = static_cast<double>(assigned[i]);
      }
    }
    tree = with_properties(tree, values);
    for (int i = 0; i < n; ++i) {
      int walk = i;
      while (walk >= 0 && assigned[walk] < 0) walk = parent[walk];
      const auto r = resolve_property(tree, tree.require("t" + std::to_string(i)),
                                      "ai_applicability");
      if (walk < 0) {
        EXPECT_TRUE(std::holds_alternative<std::monostate>(r));
        continue;
      }
      const auto& v = std::get<PropertyValue>(r);
      EXPECT_EQ(std::get<double>(v.value), assigned[walk]);
      EXPECT_EQ(tree.node(v.source).id, "t" + std::to_string(walk));
      EXPECT_EQ(v.origin, walk == i ? PropertyOrigin::kAssigned : PropertyOrigin::kInherited);
    }
  }
}

TEST(PropertyTest, AssignedValueDominatesAncestors) {
  const auto s = with_properties(diamond(), {{"A", 1.0}, {"B", 2.0}, {"C", 3.0}, {"D", 4.0}});
  const auto& v = std::get<PropertyValue>(resolve_property(s, s.require("D"), "ai_applicability"));
  EXPECT_EQ(std::get<double>(v.value), 4.0);
  EXPECT_EQ(v.origin, PropertyOrigin::kAssigned);
}

// Random DAG: every node after the root gets 1-3 earlier parents.
ActivitySnapshot random_dag(std::mt19937_64& rng, int n) {
  std::vector<testing::NodeSpec> specs;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) {
    specs.push_back({"d" + std::to_string(i)});
    if (i == 0) continue;
    std::set<int> parents;
    const int count = std::min(i, 1 + static_cast<int>(rng() % 3));
    while (static_cast<int>(parents.size()) < count) {
      parents.insert(std::uniform_int_distribution<int>(0, i - 1)(rng));
    }
    for (int p : parents) edges.emplace_back("d" + std::to_string(p), "d" + std::to_string(i));
  }
  return make_snapshot(specs, edges);
}

TEST(ClosureTest, AncestorDescendantDuality) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 30; ++round) {
    const auto s = random_dag(rng, 25);
    for (std::uint32_t a = 0; a < s.size(); ++a) {
      const auto down = closure(s, {a}, Direction::kDescendants);
      EXPECT_EQ(down, closure(s, {a}, Direction::kDescendants));
      for (std::uint32_t b = 0; b < s.size(); ++b) {
        const bool below = std::binary_search(down.begin(), down.end(), NodeIndex{b});
        const auto up = closure(s, {b}, Direction::kAncestors);
        EXPECT_EQ(below, std::binary_search(up.begin(), up.end(), NodeIndex{a}));
      }
    }
  }
}

TEST(DepthTest, MonotoneAlongEdgesAndPermutationInvariant) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    const auto s = random_dag(rng, 30);
    for (const auto& e : s.edges()) {
      EXPECT_GE(depth(s, s.require(e.child)), depth(s, s.require(e.parent)) + 1);
    }
    auto edges = s.edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    const ActivitySnapshot shuffled(s.version(), s.nodes(), edges, s.root_id());
    for (const auto& n : s.nodes()) {
      EXPECT_EQ(depth(s, s.require(n.id)), depth(shuffled, shuffled.require(n.id)));
    }
  }
}

TEST(StatsTest, RootOnly) {
  const auto stats = snapshot_stats(make_snapshot({{"Act"}}, {}));
  EXPECT_EQ(stats.generic, 1u);
  EXPECT_EQ(stats.median_path_length, 1.0);
}

TEST(StatsTest, ChainOfNine) {
  const auto stats = snapshot_stats(chain(9));
  EXPECT_EQ(stats.min_path_length, 9);
  EXPECT_EQ(stats.max_path_length, 9);
  EXPECT_EQ(stats.median_path_length, 9.0);
}

TEST(StatsTest, PathsOfSixAndFourteen) {
  std::vector<testing::NodeSpec> specs{{"root"}};
  std::vector<std::pair<std::string, std::string>> edges;
  for (const int length : {6, 14}) {
    std::string prev = "root";
    for (int i = 1; i < length; ++i) {
      const auto id = "p" + std::to_string(length) + "_" + std::to_string(i);
      specs.push_back({id});
      edges.emplace_back(prev, id);
      prev = id;
    }
  }
  const auto stats = snapshot_stats(make_snapshot(specs, edges));
  EXPECT_EQ(stats.path_count, 2u);
  EXPECT_EQ(stats.min_path_length, 6);
  EXPECT_EQ(stats.max_path_length, 14);
  EXPECT_EQ(stats.median_path_length, 10.0);
}

TEST(StatsTest, CountsMultipleInheritance) {
  const auto stats = snapshot_stats(diamond());
  EXPECT_EQ(stats.multiple_inheritance, 1u);
  EXPECT_EQ(stats.path_count, 2u);
}

}  // namespace
}  // namespace workgraph
