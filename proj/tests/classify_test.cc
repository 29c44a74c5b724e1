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

#include <mutex>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "test_util.h"
#include "workgraph/classify.h"
#include "workgraph/error.h"
#include "workgraph/model_client.h"
#include "workgraph/records.h"
#include "workgraph/search.h"
#include "workgraph/snapshot_io.h"

namespace workgraph {
namespace {

const ActivitySnapshot& workshop() {
  static const auto s = load_snapshot(testing::read_fixture("workshop.json"));
  return s;
}

const std::vector<AppRecord>& apps3() {
  static const auto records = load_apps(testing::read_fixture("apps3.csv")).records;
  return records;
}

std::string full_reply(const std::string& node, const std::string& activity = "Do it") {
  return fmt::format(
      R"({{"main_activity": "{}", "reasoning_main_activity": "r1", )"
      R"("most_appropriate_node": "{}", "most_appropriate_node_rationale": "r2"}})",
      activity, node);
}

AppRecord app(const std::string& name) {
  AppRecord r;
  r.name = name;
  r.tagline = "tagline of " + name;
  r.description = "description of " + name;
  return r;
}

// Records every prompt; answers from a fixed list, then repeats the last.
class RecordingClient final : public ModelClient {
 public:
  explicit RecordingClient(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(const std::string& system, const std::string& user,
                       std::chrono::milliseconds) override {
    std::lock_guard lock(mu_);
    calls.push_back({system, user});
    const auto i = std::min(calls.size() - 1, replies_.size() - 1);
    return replies_[i];
  }
  std::vector<std::pair<std::string, std::string>> calls;

 private:
  std::mutex mu_;
  std::vector<std::string> replies_;
};

TEST(ScriptedModelClientTest, ParsesStagesAndComments) {
  auto client = ScriptedModelClient::parse(
      "# comment\n"
      "a\t{\"x\": 1}\n"
      "a\tselect\t{\"y\": 2}\n"
      "\n");
  EXPECT_EQ(client.size(), 2u);
  EXPECT_EQ(client.complete("plain", "Application Title: a", std::chrono::seconds(1)),
            "{\"x\": 1}");
  EXPECT_EQ(client.complete("give \"most_appropriate_node\"", "Application Title: a",
                            std::chrono::seconds(1)),
            "{\"y\": 2}");
  EXPECT_THROW(client.complete("s", "Application Title: zz", std::chrono::seconds(1)),
               ModelError);
}

TEST(ScriptedModelClientTest, RejectsMalformedScripts) {
  EXPECT_THROW(ScriptedModelClient::parse("a\tbogus\t{}\n"), DataError);
  EXPECT_THROW(ScriptedModelClient::parse("a\t{}\na\t{}\n"), DataError);
  EXPECT_THROW(ScriptedModelClient::parse("no tab here\n"), DataError);
}

TEST(ScriptedModelClientTest, SpecialReplies) {
  auto client = ScriptedModelClient::parse(
      "t\t!timeout\ne\t!error boom\nd\t!delay 50 {}\n");
  const auto ask = [&](const std::string& name, int ms) {
    return client.complete("s", "Application Title: " + name, std::chrono::milliseconds(ms));
  };
  EXPECT_THROW(ask("t", 1000), ModelTimeout);
  EXPECT_THROW(ask("e", 1000), ModelError);
  EXPECT_EQ(ask("d", 1000), "{}");
  EXPECT_THROW(ask("d", 10), ModelTimeout);
}

TEST(MakeModelClientTest, Schemes) {
  EXPECT_THROW(make_model_client("ftp:x"), InvalidArgument);
  EXPECT_THROW(make_model_client("stub:/nonexistent/file.tsv"), DataError);
  EXPECT_NO_THROW(make_model_client("stub:" + testing::fixture_path("replies.tsv")));
  EXPECT_THROW(HttpModelClient("https://example.com"), InvalidArgument);
  EXPECT_NO_THROW(HttpModelClient("http://127.0.0.1:9/complete"));
}

TEST(HttpModelClientTest, UnreachableEndpointIsModelError) {
  HttpModelClient client("http://127.0.0.1:9/complete");
  EXPECT_THROW(client.complete("s", "u", std::chrono::milliseconds(200)), ModelError);
}

TEST(ClassifyTest, FactsGoesToAnalyzeMarket) {
  auto stub = ScriptedModelClient::parse("&facts\t" + full_reply("Analyze Market") + "\n");
  const auto result = classify(workshop(), apps3()[0], Strategy::kSPFO, stub, nullptr);
  EXPECT_EQ(result.record, "&facts");
  EXPECT_EQ(result.node_title, "Analyze Market");
  EXPECT_FALSE(result.hallucinated);
  EXPECT_EQ(result.specificity, Specificity::kLeaf);
  EXPECT_FALSE(result.k.has_value());
}

TEST(ClassifyTest, UnknownTitleIsHallucinated) {
  auto stub = ScriptedModelClient::parse("x\t" + full_reply("Juggle") + "\n");
  const auto result = classify(workshop(), app("x"), Strategy::kSPFO, stub, nullptr);
  EXPECT_TRUE(result.hallucinated);
  EXPECT_FALSE(result.specificity.has_value());
}

TEST(ClassifyTest, RootEchoIsInternal) {
  auto stub = ScriptedModelClient::parse("x\t" + full_reply("Act") + "\n");
  const auto result = classify(workshop(), app("x"), Strategy::kSPFO, stub, nullptr);
  EXPECT_EQ(result.node_title, "Act");
  EXPECT_EQ(result.specificity, Specificity::kInternal);
}

TEST(ClassifyTest, SpfoPromptCarriesWholeOntology) {
  RecordingClient client({full_reply("Create image")});
  classify(workshop(), apps3()[1], Strategy::kSPFO, client, nullptr);
  ASSERT_EQ(client.calls.size(), 1u);
  EXPECT_NE(client.calls[0].first.find(emit_prompt_ontology(workshop())), std::string::npos);
  EXPECT_NE(client.calls[0].second.find("Pixelmuse"), std::string::npos);
  EXPECT_EQ(client.calls[0].first.find("{{"), std::string::npos);
  EXPECT_EQ(client.calls[0].second.find("{{"), std::string::npos);
}

TEST(ClassifyTest, OneReaskThenSuccess) {
  RecordingClient client({"not json", full_reply("Create image")});
  const auto result = classify(workshop(), app("x"), Strategy::kSPFO, client, nullptr);
  EXPECT_EQ(result.node_title, "Create image");
  ASSERT_EQ(client.calls.size(), 2u);
  EXPECT_NE(client.calls[1].second.find("## Correction:"), std::string::npos);
  EXPECT_NE(client.calls[1].second.find("not a single JSON object"), std::string::npos);
}

TEST(ClassifyTest, SecondFailureCarriesReply) {
  RecordingClient client({R"({"main_activity": ""})"});
  try {
    classify(workshop(), app("x"), Strategy::kSPFO, client, nullptr);
    FAIL() << "expected ClassificationError";
  } catch (const ClassificationError& e) {
    EXPECT_EQ(e.kind(), ClassificationError::Kind::kUnparseable);
    EXPECT_EQ(e.raw_reply(), R"({"main_activity": ""})");
  }
  EXPECT_EQ(client.calls.size(), 2u);
}

TEST(ClassifyTest, TimeoutIsNotRetried) {
  auto stub = ScriptedModelClient::parse("x\t!timeout\n");
  try {
    classify(workshop(), app("x"), Strategy::kSPFO, stub, nullptr);
    FAIL() << "expected ClassificationError";
  } catch (const ClassificationError& e) {
    EXPECT_EQ(e.kind(), ClassificationError::Kind::kTimeout);
  }
}

TEST(ClassifyTest, SppoSelectionComesFromShortlist) {
  const HashEmbedder embedder;
  AppRecord record = app("m");
  record.tagline = "analyze market signals";
  record.description = "market analysis";
  RecordingClient client({full_reply("Analyze Market")});
  const auto result = classify(workshop(), record, Strategy::kSPPO, client, &embedder, 3);
  EXPECT_EQ(result.node_title, "Analyze Market");
  EXPECT_EQ(result.k, 3u);
  EXPECT_NE(client.calls[0].first.find("\"Analyze Market\""), std::string::npos);
}

TEST(ClassifyTest, SppoOffShortlistIsRejectedAfterReask) {
  const HashEmbedder embedder;
  AppRecord record = app("m");
  record.tagline = "analyze market signals";
  RecordingClient client({full_reply("Weld metal")});
  try {
    classify(workshop(), record, Strategy::kSPPO, client, &embedder, 2);
    FAIL() << "expected ClassificationError";
  } catch (const ClassificationError& e) {
    EXPECT_EQ(e.kind(), ClassificationError::Kind::kOffShortlist);
  }
  EXPECT_EQ(client.calls.size(), 2u);
}

TEST(ClassifyTest, MppoExtractsThenSelects) {
  const HashEmbedder embedder;
  RecordingClient client(
      {R"({"main_activity": "Create image", "reasoning_main_activity": "pictures"})",
       R"({"most_appropriate_node": "Create image", "most_appropriate_node_rationale": "ok"})"});
  const auto result = classify(workshop(), app("p"), Strategy::kMPPO, client, &embedder, 4);
  EXPECT_EQ(result.main_activity, "Create image");
  EXPECT_EQ(result.node_title, "Create image");
  ASSERT_EQ(client.calls.size(), 2u);
  EXPECT_NE(client.calls[1].first.find("most_appropriate_node"), std::string::npos);
  EXPECT_NE(client.calls[1].second.find("Create image because pictures"), std::string::npos);
}

TEST(ClassifyTest, NoCandidates) {
  const HashEmbedder embedder;
  RecordingClient client({full_reply("Act")});
  AppRecord record = app("zzz");
  record.tagline = record.description = "qqq";
  record.name = "qqq";
  try {
    classify(workshop(), record, Strategy::kSPPO, client, &embedder, 5);
    FAIL();
  } catch (const ClassificationError& e) {
    EXPECT_EQ(e.kind(), ClassificationError::Kind::kNoCandidates);
  }
}

TEST(ClassifierTest, RejectsBadOptions) {
  ClassifierOptions options;
  options.strategy = Strategy::kSPPO;
  EXPECT_THROW(Classifier(workshop(), nullptr, options), InvalidArgument);
  const HashEmbedder embedder;
  options.k = 0;
  EXPECT_THROW(Classifier(workshop(), &embedder, options), InvalidArgument);
  EXPECT_THROW(parse_strategy("mpfo"), InvalidArgument);
  EXPECT_EQ(parse_strategy("SPFO"), Strategy::kSPFO);
}

TEST(HallucinationTest, ExactTitles) {
  EXPECT_FALSE(detect_hallucination(workshop(), "Analyze Market"));
  EXPECT_TRUE(detect_hallucination(workshop(), "Analyze Markets"));
  EXPECT_TRUE(detect_hallucination(workshop(), "analyze market"));
  EXPECT_TRUE(detect_hallucination(workshop(), "Analyze Market "));
  EXPECT_TRUE(detect_hallucination(workshop(), ""));
}

TEST(SpecificityTest, Definitions) {
  const auto& s = workshop();
  EXPECT_EQ(specificity(s, s.require("create_image")), Specificity::kLeaf);
  EXPECT_EQ(specificity(s, s.require("create")), Specificity::kNearLeaf);
  EXPECT_EQ(specificity(s, s.require("act")), Specificity::kInternal);
  // Source-task children do not count.
  EXPECT_EQ(specificity(s, s.require("weld")), Specificity::kLeaf);
  const auto c = testing::chain(3);
  EXPECT_EQ(specificity(c, c.root()), Specificity::kInternal);
}

TEST(SpecificityTest, LeafIsLocal) {
  const auto base = testing::make_snapshot({{"r"}, {"a"}, {"b"}}, {{"r", "a"}, {"r", "b"}});
  const auto grown = testing::make_snapshot({{"r"}, {"a"}, {"b"}, {"c"}, {"d"}},
                                            {{"r", "a"}, {"r", "b"}, {"b", "c"}, {"c", "d"}});
  EXPECT_EQ(specificity(base, base.require("a")), Specificity::kLeaf);
  EXPECT_EQ(specificity(grown, grown.require("a")), Specificity::kLeaf);
}

Classifier spfo() {
  return Classifier(workshop(), nullptr, {Strategy::kSPFO, 100, std::chrono::seconds(5)});
}

TEST(BatchTest, InputOrder) {
  auto stub = ScriptedModelClient::parse(testing::read_fixture("replies.tsv"));
  const auto out = batch_classify(spfo(), apps3(), stub, 3);
  ASSERT_EQ(out.results.size(), 3u);
  EXPECT_EQ(out.results[0].record, "&facts");
  EXPECT_EQ(out.results[1].record, "Pixelmuse");
  EXPECT_EQ(out.results[2].record, "Seamwright");
  EXPECT_TRUE(out.failures.empty());
}

TEST(BatchTest, TimeoutBecomesFailure) {
  auto stub = ScriptedModelClient::parse(
      "&facts\t" + full_reply("Analyze Market") + "\nPixelmuse\t!timeout\nSeamwright\t" +
      full_reply("Weld metal") + "\n");
  const auto out = batch_classify(spfo(), apps3(), stub, 2);
  ASSERT_EQ(out.results.size(), 2u);
  ASSERT_EQ(out.failures.size(), 1u);
  EXPECT_EQ(out.failures[0].index, 1u);
  EXPECT_EQ(out.failures[0].record, "Pixelmuse");
  EXPECT_EQ(out.failures[0].kind, ClassificationError::Kind::kTimeout);
}

TEST(BatchTest, GoldenCsv) {
  auto stub = ScriptedModelClient::parse(testing::read_fixture("replies.tsv"));
  const auto out = batch_classify(spfo(), apps3(), stub, 1);
  EXPECT_EQ(results_to_csv(out.results), testing::read_fixture("classify3.golden.csv"));
}

TEST(BatchTest, ParallelismDoesNotChangeOutput) {
  std::vector<AppRecord> records;
  std::string script;
  const char* titles[] = {"Create image", "Weld metal", "Nope", "Select method", "Act"};
  for (int i = 0; i < 60; ++i) {
    records.push_back(app(fmt::format("app-{:03}", i)));
    if (i % 13 == 5) {
      script += records.back().name + "\t!timeout\n";
    } else if (i % 11 == 3) {
      script += records.back().name + "\tnot json\n";
    } else {
      script += records.back().name + "\t!delay " + std::to_string(i % 4) + " " +
                full_reply(titles[i % 5]) + "\n";
    }
  }
  auto stub = ScriptedModelClient::parse(script);
  const auto one = batch_classify(spfo(), records, stub, 1);
  const auto eight = batch_classify(spfo(), records, stub, 8);
  EXPECT_EQ(results_to_csv(one.results), results_to_csv(eight.results));
  EXPECT_EQ(failures_to_csv(one.failures), failures_to_csv(eight.failures));
  EXPECT_THROW(batch_classify(spfo(), records, stub, 0), InvalidArgument);
}

TEST(ResultsCsvTest, RoundTrip) {
  auto stub = ScriptedModelClient::parse(testing::read_fixture("replies.tsv"));
  const auto out = batch_classify(spfo(), apps3(), stub, 1);
  EXPECT_EQ(load_results(results_to_csv(out.results)), out.results);
}

}  // namespace
}  // namespace workgraph
