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

#include "workgraph/synthetic.h"

#include <algorithm>
#include <array>
#include <random>

#include <fmt/format.h>

#include "json.hpp"
#include "workgraph/error.h"

namespace workgraph {

namespace {

constexpr std::array<std::string_view, 24> kVerbs{
    "analyze", "assemble", "build",    "clean",   "compose",  "conduct",
    "create",  "deliver",  "design",   "develop", "diagnose", "draft",
    "edit",    "evaluate", "generate", "inspect", "maintain", "manage",
    "monitor", "plan",     "prepare",  "repair",  "schedule", "transfer"};

constexpr std::array<std::string_view, 24> kObjects{
    "accounts",  "budgets",   "code",      "contracts", "data",      "documents",
    "equipment", "floors",    "images",    "inventory", "lessons",   "markets",
    "materials", "meetings",  "messages",  "patients",  "policies",  "products",
    "records",   "reports",   "routes",    "schedules", "shipments", "text"};

constexpr std::array<std::string_view, 6> kCollections{"kinds", "methods", "objects",
                                                        "phases", "settings", "tools"};

// Portable bounded draw; the distribution classes differ between standard
// libraries.
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string phrase(std::mt19937_64& rng) {
  return fmt::format("{} {}", kVerbs[pick(rng, kVerbs.size())],
                     kObjects[pick(rng, kObjects.size())]);
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

ActivitySnapshot synthetic_snapshot(const SyntheticOntologyOptions& options) {
  if (options.nodes < 4) throw InvalidArgument("a synthetic ontology needs at least 4 nodes");
  std::mt19937_64 rng(options.seed);
  const std::size_t n = options.nodes;
  const std::size_t generic = std::max<std::size_t>(1, n * 3 / 10);
  const std::size_t source = std::max<std::size_t>(1, n / 5);
  const std::size_t atomic = n - generic - source;

  std::vector<ActivityNode> nodes;
  nodes.reserve(n);
  std::vector<SpecializationEdge> edges;
  edges.reserve(n + static_cast<std::size_t>(static_cast<double>(atomic) *
                                             options.multi_parent_rate) + 1);
  const auto add_node = [&](NodeKind kind, std::string title) {
    ActivityNode node;
    node.id = fmt::format("n{:06}", nodes.size());
    node.title = std::move(title);
    node.kind = kind;
    nodes.push_back(std::move(node));
    return nodes.back().id;
  };
  const auto add_edge = [&](const std::string& parent, const std::string& child) {
    SpecializationEdge edge{parent, child, std::nullopt};
    if (unit(rng) < options.collection_rate) {
      edge.collection = std::string(kCollections[pick(rng, kCollections.size())]);
    }
    edges.push_back(std::move(edge));
  };

  add_node(NodeKind::kGeneric, "Act");
  for (std::size_t i = 1; i < generic; ++i) {
    const auto id = add_node(NodeKind::kGeneric, capitalize(fmt::format("{} {}", phrase(rng), i)));
    add_edge(nodes[pick(rng, i)].id, id);
    if (unit(rng) < 0.5) nodes.back().definition = "To " + phrase(rng) + ".";
  }
  for (std::size_t i = 0; i < atomic; ++i) {
    const auto index = nodes.size();
    const auto id = add_node(NodeKind::kAtomic,
                             capitalize(fmt::format("{} {}", phrase(rng), index)));
    const auto first = pick(rng, generic);
    add_edge(nodes[first].id, id);
    if (unit(rng) < options.multi_parent_rate && generic > 1) {
      auto second = pick(rng, generic - 1);
      if (second >= first) ++second;
      add_edge(nodes[second].id, id);
    }
    if (unit(rng) < 0.2) nodes.back().synonyms.push_back(phrase(rng));
  }
  const std::size_t atomic_begin = generic;
  for (std::size_t i = 0; i < source; ++i) {
    const auto index = nodes.size();
    const auto id = add_node(NodeKind::kSourceTask,
                             capitalize(fmt::format("{} task {}", phrase(rng), index)));
    edges.push_back({nodes[atomic_begin + pick(rng, atomic)].id, id, std::nullopt});
  }
  return ActivitySnapshot(fmt::format("synthetic-{}-{}", n, options.seed), std::move(nodes),
                          std::move(edges), "n000000");
}

std::vector<AppRecord> synthetic_apps(std::size_t count, std::uint64_t seed) {
  constexpr std::array<Billing, 5> kBilling{Billing::kOneTime, Billing::kMonthly,
                                            Billing::kYearly, Billing::kFreeOnly,
                                            Billing::kMonthly};
  constexpr std::array<std::string_view, 4> kTags{"web", "ios", "android", "api"};
  std::mt19937_64 rng(seed);
  std::vector<AppRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    AppRecord app;
    app.name = fmt::format("app-{:06}", i + 1);
    const auto what = phrase(rng);
    app.tagline = capitalize(what) + " with AI.";
    app.description = fmt::format("A tool that helps you {} and {}.", what, phrase(rng));
    app.billing = kBilling[pick(rng, kBilling.size())];
    app.billing_raw = std::string(to_string(app.billing));
    app.price = app.billing == Billing::kFreeOnly
                    ? Money{}
                    : Money::from_cents(static_cast<std::int64_t>(100 + pick(rng, 9'900)));
    app.saves = static_cast<std::int64_t>(pick(rng, 5'000));
    app.launch_date = std::chrono::year_month_day{
        std::chrono::year{2015 + static_cast<int>(pick(rng, 10))},
        std::chrono::month{static_cast<unsigned>(1 + pick(rng, 12))},
        std::chrono::day{static_cast<unsigned>(1 + pick(rng, 28))}};
    app.platform_tags.emplace_back(kTags[pick(rng, kTags.size())]);
    out.push_back(std::move(app));
  }
  return out;
}

std::string synthetic_stub_script(const ActivitySnapshot& snapshot,
                                  const std::vector<AppRecord>& records, std::uint64_t seed,
                                  double hallucination_rate) {
  std::vector<NodeIndex> targets;
  for (std::uint32_t i = 0; i < snapshot.size(); ++i) {
    if (snapshot.node(NodeIndex{i}).kind != NodeKind::kSourceTask) targets.push_back({i});
  }
  if (targets.empty()) throw InvalidArgument("snapshot has no activity nodes");
  std::mt19937_64 rng(seed);
  std::string out = "# synthetic stub script\n";
  for (const auto& record : records) {
    const auto& node = snapshot.node(targets[pick(rng, targets.size())]);
    std::string title = node.title;
    if (unit(rng) < hallucination_rate) title += " (invented)";
    const nlohmann::json reply{{"main_activity", phrase(rng)},
                               {"reasoning_main_activity", "synthetic"},
                               {"most_appropriate_node", title},
                               {"most_appropriate_node_rationale", "synthetic"}};
    out += record.name;
    out += '\t';
    out += reply.dump();
    out += '\n';
  }
  return out;
}

}  // namespace workgraph
