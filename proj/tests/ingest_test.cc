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

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "test_util.h"
#include "workgraph/decompose.h"
#include "workgraph/error.h"
#include "workgraph/records.h"
#include "workgraph/snapshot_io.h"
#include "workgraph/synthetic.h"

namespace workgraph {
namespace {

using testing::read_fixture;

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

TEST(SnapshotIoTest, MinimalDocument) {
  const auto s = load_snapshot(
      R"({"schema":"workgraph-snapshot/1","version":"v1","root":"act",
          "nodes":[{"id":"act","title":"Act","kind":"generic"}],"edges":[]})");
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.node(s.root()).title, "Act");
}

TEST(SnapshotIoTest, DiamondFixture) {
  const auto s = load_snapshot(read_fixture("diamond.json"));
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.edges().size(), 4u);
  EXPECT_TRUE(validate(s).ok());
}

TEST(SnapshotIoTest, MissingVersionIsSchemaError) {
  EXPECT_THROW(load_snapshot(R"({"schema":"workgraph-snapshot/1","root":"a",
                                 "nodes":[{"id":"a","title":"A","kind":"generic"}],
                                 "edges":[]})"),
               SchemaError);
}

TEST(SnapshotIoTest, BadJsonAndWrongSchema) {
  EXPECT_THROW(load_snapshot("{"), SchemaError);
  EXPECT_THROW(load_snapshot(R"({"schema":"other/2","version":"v","root":"a",
                                 "nodes":[],"edges":[]})"),
               SchemaError);
}

TEST(SnapshotIoTest, InvalidSnapshotRaisesValidationError) {
  const std::string doc = R"({"schema":"workgraph-snapshot/1","version":"v","root":"a",
      "nodes":[{"id":"a","title":"A","kind":"generic"},{"id":"b","title":"B","kind":"generic"}],
      "edges":[]})";
  try {
    load_snapshot(doc);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.report().violations.front().rule, "orphan");
  }
  EXPECT_NO_THROW(load_snapshot(doc, {false}));
}

TEST(SnapshotIoTest, RoundTripIsStable) {
  for (const auto* name : {"diamond.json", "workshop.json"}) {
    const auto s = load_snapshot(read_fixture(name));
    const auto bytes = save_snapshot(s);
    EXPECT_EQ(load_snapshot(bytes), s) << name;
    EXPECT_EQ(save_snapshot(load_snapshot(bytes)), bytes) << name;
  }
}

TEST(SnapshotIoTest, RoundTripOnSyntheticSnapshots) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = synthetic_snapshot({2000, seed, 0.05, 0.2});
    ASSERT_TRUE(validate(s).ok());
    const auto bytes = save_snapshot(s);
    EXPECT_EQ(load_snapshot(bytes), s);
    EXPECT_EQ(save_snapshot(load_snapshot(bytes)), bytes);
  }
}

TEST(PromptOntologyTest, Chain) {
  std::vector<ActivityNode> nodes{{"act", "Act", NodeKind::kGeneric, {}, {}, {}},
                                  {"d", "Decide", NodeKind::kGeneric, {}, {}, {}},
                                  {"s", "Select", NodeKind::kGeneric, {}, {}, {}}};
  const ActivitySnapshot s("v", nodes,
                           {{"act", "d", std::nullopt}, {"d", "s", std::nullopt}}, "act");
  EXPECT_EQ(emit_prompt_ontology(s), R"({"Act":{"Decide":{"Select":{}}}})");
}

TEST(PromptOntologyTest, CollectionLabelWrapsMembers) {
  std::vector<ActivityNode> nodes{{"act", "Act", NodeKind::kGeneric, {}, {}, {}},
                                  {"d", "Decide", NodeKind::kGeneric, {}, {}, {}},
                                  {"s", "Select", NodeKind::kGeneric, {}, {}, {}}};
  const ActivitySnapshot s("v", nodes,
                           {{"act", "d", std::nullopt}, {"d", "s", "Decide how?"}}, "act");
  EXPECT_EQ(emit_prompt_ontology(s), R"({"Act":{"Decide":{"[Decide how?]":{"Select":{}}}}})");
}

TEST(PromptOntologyTest, DiamondChildUnderBothParents) {
  const auto text = emit_prompt_ontology(load_snapshot(read_fixture("diamond.json")));
  EXPECT_EQ(count_of(text, "\"Transfer information\""), 2u);
}

TEST(PromptOntologyTest, SourceTasksOmitted) {
  const auto text = emit_prompt_ontology(load_snapshot(read_fixture("workshop.json")));
  EXPECT_EQ(text.find("arc welding"), std::string::npos);
  EXPECT_NE(text.find("\"Weld metal\""), std::string::npos);
}

TEST(RecordsTest, FactsRow) {
  const auto table = load_apps(read_fixture("apps3.csv"));
  ASSERT_TRUE(table.errors.empty());
  ASSERT_EQ(table.records.size(), 3u);
  const auto& facts = table.records[0];
  EXPECT_EQ(facts.name, "&facts");
  EXPECT_EQ(facts.price, Money::from_cents(19900));
  EXPECT_EQ(facts.billing, Billing::kOneTime);
  EXPECT_EQ(facts.saves, 3);
  EXPECT_EQ(facts.launch_date,
            std::chrono::year_month_day(std::chrono::year(2023), std::chrono::June,
                                        std::chrono::day(10)));
}

TEST(RecordsTest, EmptyDataSection) {
  const auto table = load_apps("name,tagline,description,price,billing,saves,launch_date,tags\n");
  EXPECT_TRUE(table.records.empty());
  EXPECT_EQ(table.data_rows, 0u);
}

TEST(RecordsTest, HeaderMismatchThrows) {
  EXPECT_THROW(load_apps("name,price\nx,1\n"), SchemaError);
}

TEST(RecordsTest, SurgicalRobotRow) {
  const auto table = load_robots(
      "name,units,price_low,price_high,segments,ontology_node\n"
      "Surgical, 6612, 600000, 2500000, Medical, Perform Surgery\n");
  ASSERT_EQ(table.records.size(), 1u);
  const auto& r = table.records[0];
  EXPECT_EQ(r.name, "Surgical");
  EXPECT_EQ(r.units, 6612);
  EXPECT_EQ(r.price_low, Money::from_cents(60'000'000));
  EXPECT_EQ(r.price_high, Money::from_cents(250'000'000));
  EXPECT_EQ(r.segments, std::vector<std::string>{"Medical"});
  EXPECT_EQ(r.ontology_node, "Perform Surgery");
}

TEST(RecordsTest, BadRowsAreReportedNotDropped) {
  const auto table = load_robots(
      "name,units,price_low,price_high,segments,ontology_node\n"
      "Ok,10,1,2,Medical,X\n"
      "Inverted,10,5,2,Medical,X\n"
      "NoUnits,,1,2,Medical,X\n"
      "Comma,10,\"1,000\",2000,Medical,X\n");
  EXPECT_EQ(table.data_rows, 4u);
  EXPECT_EQ(table.records.size() + table.errors.size(), table.data_rows);
  EXPECT_EQ(table.records.size(), 1u);
}

TEST(RecordsTest, FreeRecordsMustBeZeroPriced) {
  const auto table = load_apps(
      "name,tagline,description,price,billing,saves,launch_date,tags\n"
      "a,t,d,5,Free,1,2020-01-01,\n"
      "b,t,d,,Free,1,2020-01-01,\n");
  EXPECT_EQ(table.records.size(), 1u);
  EXPECT_EQ(table.errors.size(), 1u);
}

TEST(RecordsTest, SegmentShares) {
  const auto table = load_segments("segment,share\nMedical,29%\nIndustrial,0.71\n");
  ASSERT_EQ(table.records.size(), 2u);
  EXPECT_DOUBLE_EQ(table.records[0].share, 0.29);
  EXPECT_DOUBLE_EQ(table.records[1].share, 0.71);
}

TEST(RecordsTest, SaveLoadApps) {
  const auto table = load_apps(read_fixture("apps3.csv"));
  EXPECT_EQ(load_apps(save_apps(table.records)).records, table.records);
}

TEST(DecomposeTest, SharedObject) {
  EXPECT_EQ(decompose_task("Acquire, distribute and store supplies"),
            (std::vector<VerbObject>{
                {"acquire", "supplies"}, {"distribute", "supplies"}, {"store", "supplies"}}));
}

TEST(DecomposeTest, NoCoordination) {
  EXPECT_EQ(decompose_task("Weld metal"), (std::vector<VerbObject>{{"weld", "metal"}}));
}

TEST(DecomposeTest, TwoVerbs) {
  EXPECT_EQ(decompose_task("Plan and develop instructional methods"),
            (std::vector<VerbObject>{{"plan", "instructional methods"},
                                     {"develop", "instructional methods"}}));
}

TEST(DecomposeTest, JoinedOutputRedecomposes) {
  const std::vector<std::string> verbs{"acquire", "store", "weld", "plan", "inspect"};
  const std::vector<std::string> objects{"supplies", "metal parts", "budgets", "reports"};
  std::mt19937_64 rng(5);
  for (int round = 0; round < 200; ++round) {
    std::vector<VerbObject> pairs;
    const auto n = 1 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      pairs.push_back({verbs[rng() % verbs.size()], objects[rng() % objects.size()]});
    }
    EXPECT_EQ(decompose_task(join_pairs(pairs)), pairs) << join_pairs(pairs);
  }
}

}  // namespace
}  // namespace workgraph
