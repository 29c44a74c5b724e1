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

// Acceptance checks for the toolkit. Prints one line per criterion:
//
//   criterion <n>: PASS|FAIL  <detail>
//
// Exit status is 0 when every criterion passes. With --expect-fail a,b,...
// it is 0 when exactly the listed criteria fail, so a known shortfall stays
// visible in the output without hiding a regression elsewhere.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "workgraph/agreement.h"
#include "workgraph/aggregation.h"
#include "workgraph/classify.h"
#include "workgraph/market.h"
#include "workgraph/model_client.h"
#include "workgraph/records.h"
#include "workgraph/snapshot_io.h"
#include "workgraph/sunburst.h"
#include "workgraph/synthetic.h"

namespace wg = workgraph;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, std::string what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + std::move(what));
    }
  }
  void note(std::string what) { notes.push_back(std::move(what)); }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(WORKGRAPH_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

wg::ActivitySnapshot snapshot_of(const std::vector<std::string>& ids,
                                 const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<wg::ActivityNode> nodes;
  for (const auto& id : ids) nodes.push_back({id, id, wg::NodeKind::kGeneric, {}, {}, {}});
  std::vector<wg::SpecializationEdge> list;
  for (const auto& [p, c] : edges) list.push_back({p, c, std::nullopt});
  return wg::ActivitySnapshot("acceptance", nodes, list, ids.front());
}

// ---------------------------------------------------------------------------

Outcome medical_golden() {
  Outcome o;
  const auto start = Clock::now();
  const auto robots = wg::load_robots(read_fixture("medical_robots.csv"));
  o.require(robots.errors.empty() && robots.records.size() == 4, "fixture loads");
  if (!o.pass) return o;
  const auto& rows = robots.records;
  std::vector<double> units;
  for (const auto& r : rows) units.push_back(static_cast<double>(r.units));
  const auto revenue = wg::Money::from_cents(1'320'000'000'000);
  const auto seg = wg::price_segment("Medical", revenue, rows, units);
  const double elapsed = seconds_since(start);

  const double rel[] = {1.32, 16.40, 1.00, 1.32};
  const double billions[] = {0.5, 11.9, 0.6, 0.2};
  wg::Money total;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& row = seg.rows[i];
    total += row.revenue;
    o.require(std::abs(row.relative - rel[i]) <= 0.01,
              fmt::format("relative {} = {:.4f}, expected {:.2f}", row.subclass, row.relative,
                          rel[i]));
    const double b = row.revenue.dollars() / 1e9;
    o.require(std::abs(b - billions[i]) <= 0.05 + 1e-12,
              fmt::format("revenue {} = {:.4f} B, expected {:.1f} B +-0.05", row.subclass, b,
                          billions[i]));
  }
  o.require(std::abs(seg.x - 110.1e3) <= 110.1e3 * 0.01, fmt::format("x = {:.1f}", seg.x));
  o.require(std::abs(total.dollars() - 13.2e9) <= 13.2e9 * 0.001,
            fmt::format("total = {}", wg::format_amount(total)));
  o.require(elapsed < 1.0, fmt::format("runtime {:.3f} s", elapsed));
  o.note(fmt::format("x={:.1f} revenues={:.3f}/{:.3f}/{:.3f}/{:.3f} B", seg.x,
                     seg.rows[0].revenue.dollars() / 1e9, seg.rows[1].revenue.dollars() / 1e9,
                     seg.rows[2].revenue.dollars() / 1e9, seg.rows[3].revenue.dollars() / 1e9));
  return o;
}

Outcome market_split() {
  Outcome o;
  const wg::MarketConfig config;
  o.require(config.total_ai_market == wg::parse_amount("186.4B"), "total 186.4 B");
  o.require(config.robotics_market == wg::parse_amount("46.11B"), "robotics 46.11 B");
  o.require(config.software_market() == wg::parse_amount("140.29B"),
            "software = " + wg::format_amount(config.software_market()));
  const auto snapshot = wg::load_snapshot(read_fixture("workshop.json"));
  const auto report = wg::combined_report_csv(
      snapshot,
      wg::combine(snapshot, {{"Create image", config.software_market()}},
                  {{"Weld metal", config.robotics_market}}),
      config);
  o.require(report.find("global_split=software:75%;robot:25%") != std::string::npos,
            "combined report split line");
  o.note("software 140290000000.00, split 75%/25%");
  return o;
}

Outcome aggregation_oracle() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(20240611);
  int dags = 0;
  for (; dags < 250; ++dags) {
    const int n = std::uniform_int_distribution<int>(1, 60)(rng);
    std::vector<std::string> ids;
    std::vector<std::pair<std::string, std::string>> edges;
    std::map<std::string, std::set<std::string>> parents;
    for (int i = 0; i < n; ++i) {
      ids.push_back("v" + std::to_string(i));
      if (i == 0) continue;
      std::set<int> ps{std::uniform_int_distribution<int>(0, i - 1)(rng)};
      if (rng() % 3 == 0) ps.insert(std::uniform_int_distribution<int>(0, i - 1)(rng));
      for (int p : ps) {
        edges.emplace_back(ids[p], ids[i]);
        parents[ids[i]].insert(ids[p]);
      }
    }
    const auto snapshot = snapshot_of(ids, edges);
    std::vector<wg::Assignment> list;
    const int items = std::uniform_int_distribution<int>(0, 200)(rng);
    for (int i = 0; i < items; ++i) {
      const int placements = 1 + static_cast<int>(rng() % 2);
      for (int k = 0; k < placements; ++k) {
        list.push_back({"i" + std::to_string(i), ids[rng() % n], 1.0, std::nullopt});
      }
    }
    std::map<std::string, std::set<std::string>> reach;
    for (const auto& a : list) {
      std::vector<std::string> stack{a.node};
      while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (!reach[a.item].insert(v).second) continue;
        for (const auto& p : parents[v]) stack.push_back(p);
      }
    }
    std::map<std::string, double> expected;
    for (const auto& [item, nodes] : reach) {
      for (const auto& v : nodes) expected[v] += 1.0;
    }
    const auto t = wg::tally(snapshot, list);
    for (const auto& id : ids) {
      if (t.at(snapshot.require(id)).aggregated != expected[id]) {
        o.require(false, fmt::format("dag {} node {}", dags, id));
        return o;
      }
    }
    o.require(t.at(snapshot.root()).aggregated == static_cast<double>(reach.size()),
              fmt::format("dag {} root total", dags));
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 30.0, fmt::format("runtime {:.2f} s", elapsed));
  o.note(fmt::format("{} random DAGs matched node-for-node in {:.2f} s", dags, elapsed));
  return o;
}

Outcome double_count() {
  Outcome o;
  const auto snapshot = wg::load_snapshot(read_fixture("diamond.json"));
  const auto t = wg::tally(snapshot, {{"app", "transfer", 1.0, std::nullopt}});
  const auto share = wg::percentages(t, t.total());
  double ring = 0.0;
  for (const auto& link : snapshot.children(snapshot.root())) ring += share[link.node.value];
  o.require(share[snapshot.root().value] == 1.0, "root 100%");
  o.require(ring == 2.0, fmt::format("child ring {:.0f}%", ring * 100));
  o.note(fmt::format("root {:.0f}%, child ring {:.0f}%", share[snapshot.root().value] * 100,
                     ring * 100));
  return o;
}

Outcome wu_palmer() {
  Outcome o;
  const auto chain = snapshot_of({"Act", "A", "B"}, {{"Act", "A"}, {"A", "B"}});
  const auto sib = snapshot_of({"Act", "A", "B", "C"}, {{"Act", "A"}, {"A", "B"}, {"A", "C"}});
  o.require(wg::wup(chain, "B", "B").s == 1.0, "wup(x, x) = 1");
  o.require(std::abs(wg::wup(chain, "A", "B").s - 0.8) <= 1e-12, "chain 0.8");
  o.require(std::abs(wg::wup(sib, "B", "C").s - 2.0 / 3.0) <= 1e-12, "siblings 2/3");

  std::mt19937_64 rng(5);
  int pairs = 0;
  while (pairs < 500) {
    const int n = std::uniform_int_distribution<int>(2, 50)(rng);
    std::vector<int> parent(n, -1);
    std::vector<std::string> ids;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < n; ++i) {
      ids.push_back("t" + std::to_string(i));
      if (i > 0) {
        parent[i] = std::uniform_int_distribution<int>(0, i - 1)(rng);
        edges.emplace_back(ids[parent[i]], ids[i]);
      }
    }
    const auto tree = snapshot_of(ids, edges);
    const auto path = [&](int v) {
      std::vector<int> p;
      for (; v >= 0; v = parent[v]) p.insert(p.begin(), v);
      return p;
    };
    for (int k = 0; k < 50 && pairs < 500; ++k, ++pairs) {
      const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      const auto pa = path(a), pb = path(b);
      double best = 0.0;
      for (std::size_t i = 0; i < pa.size(); ++i) {
        if (std::find(pb.begin(), pb.end(), pa[i]) != pb.end()) {
          best = std::max(best, 2.0 * static_cast<double>(i + 1) /
                                    static_cast<double>(pa.size() + pb.size()));
        }
      }
      const double ab = wg::wup(tree, ids[a], ids[b]).s;
      const double ba = wg::wup(tree, ids[b], ids[a]).s;
      if (std::abs(ab - best) > 1e-12 || ab != ba || (ab == 1.0) != (a == b)) {
        o.require(false, fmt::format("pair {} ({}, {}): {} vs oracle {}", pairs, a, b, ab, best));
        return o;
      }
    }
  }
  o.note(fmt::format("{} random pairs match the oracle; hand examples exact", pairs));
  return o;
}

Outcome weighted_kappa() {
  Outcome o;
  const auto two = snapshot_of({"r", "l1", "l2"}, {{"r", "l1"}, {"r", "l2"}});
  const wg::AnnotationSet a{"a", {{"i1", "l1"}, {"i2", "l2"}}};
  const wg::AnnotationSet b{"b", {{"i1", "l1"}, {"i2", "l1"}}};
  o.require(wg::weighted_kappa(two, a, a) == 1.0, "perfect agreement");
  const double zero = wg::weighted_kappa(two, a, b);
  o.require(zero == 0.0, fmt::format("hand case kappa = {}", zero));

  const auto four = snapshot_of({"r", "g1", "g2", "a", "b", "c", "d"},
                                {{"r", "g1"}, {"r", "g2"}, {"g1", "a"}, {"g1", "b"},
                                 {"g2", "c"}, {"g2", "d"}});
  std::mt19937_64 rng(41);
  const std::vector<std::string> labels{"a", "b", "c", "d"};
  wg::AnnotationSet x{"x", {}}, y{"y", {}};
  for (int i = 0; i < 500; ++i) {
    x.items["i" + std::to_string(i)] = labels[rng() % 4];
    y.items["i" + std::to_string(i)] = labels[rng() % 4];
  }
  const double random_kappa = wg::weighted_kappa(four, x, y);
  o.require(std::abs(random_kappa) < 0.05, fmt::format("independent kappa {}", random_kappa));

  const wg::SetMetric metric = [&](const std::vector<wg::AnnotationSet>& sets) {
    return wg::mean_kappa(four, sets);
  };
  const auto first = wg::bootstrap_ci(metric, {x, y}, 1000, 0.95, 123);
  const auto second = wg::bootstrap_ci(metric, {x, y}, 1000, 0.95, 123);
  o.require(first.low == second.low && first.high == second.high, "bootstrap reproducible");
  o.require(first.low_rank == 25 && first.high_rank == 976 && first.used == 1000,
            fmt::format("order statistics {}/{}", first.low_rank, first.high_rank));
  o.note(fmt::format("independent kappa {:.4f}; 95% CI [{:.4f}, {:.4f}] from ranks 25/976",
                     random_kappa, first.low, first.high));
  return o;
}

Outcome classification_determinism() {
  Outcome o;
  const auto snapshot = wg::load_snapshot(read_fixture("workshop.json"));
  const auto records = wg::synthetic_apps(100, 9);
  auto script = wg::synthetic_stub_script(snapshot, records, 9, 0.1);
  // Some records stall or misbehave so the failure ledger is exercised too.
  for (std::size_t i = 0; i < records.size(); i += 17) {
    script += records[i].name + "\treask\t!timeout\n";
  }
  auto stub = wg::ScriptedModelClient::parse(script);
  const wg::Classifier classifier(snapshot, nullptr, {});
  const auto one = wg::batch_classify(classifier, records, stub, 1);
  const auto eight = wg::batch_classify(classifier, records, stub, 8);
  o.require(wg::results_to_csv(one.results) == wg::results_to_csv(eight.results),
            "results identical across parallelism");
  o.require(wg::failures_to_csv(one.failures) == wg::failures_to_csv(eight.failures),
            "failures identical across parallelism");
  o.require(one.results.size() == 100, fmt::format("{} results", one.results.size()));

  const std::vector<std::pair<std::string, bool>> table{
      {"Analyze Market", false},       {"Analyze Markets", true},   {"analyze market", true},
      {"ANALYZE MARKET", true},        {" Analyze Market", true},   {"Analyze Market ", true},
      {"Analyze  Market", true},       {"Analyze\tMarket", true},   {"AnalyzeMarket", true},
      {"Create image", false},         {"Create Image", true},      {"Create image.", true},
      {"Weld metal", false},           {"Weld metal\n", true},      {"Act", false},
      {"act", true},                   {"", true},                  {"Transfer information", false},
      {"Select method", false},        {"Select  method", true}};
  int correct = 0;
  for (const auto& [title, expected] : table) {
    correct += wg::detect_hallucination(snapshot, title) == expected;
  }
  o.require(correct == 20, fmt::format("hallucination table {}/20", correct));
  std::size_t flagged = 0;
  for (const auto& r : one.results) flagged += r.hallucinated;
  o.note(fmt::format("100 records byte-identical at parallelism 1 and 8 ({} hallucinated); "
                     "hallucination table 20/20",
                     flagged));
  return o;
}

Outcome snapshot_round_trip() {
  Outcome o;
  const auto snapshot = wg::synthetic_snapshot({});
  o.require(snapshot.size() == 40'000, "40,000 nodes");
  o.require(wg::validate(snapshot).ok(), "validate passes");
  const auto bytes = wg::save_snapshot(snapshot);
  const auto loaded = wg::load_snapshot(bytes);
  o.require(loaded == snapshot, "load(save(s)) == s");
  o.require(wg::save_snapshot(loaded) == bytes, "save(load(save(s))) == save(s)");

  std::vector<std::string> ids{"root"};
  std::vector<std::pair<std::string, std::string>> edges;
  for (const int length : {6, 14}) {
    std::string prev = "root";
    for (int i = 1; i < length; ++i) {
      ids.push_back(fmt::format("p{}_{}", length, i));
      edges.emplace_back(prev, ids.back());
      prev = ids.back();
    }
  }
  const auto stats = wg::snapshot_stats(snapshot_of(ids, edges));
  o.require(stats.min_path_length == 6 && stats.max_path_length == 14,
            fmt::format("paths min {} max {}", stats.min_path_length, stats.max_path_length));
  o.note(fmt::format("40,000-node round trip ({} bytes); constructed paths min 6 max 14",
                     bytes.size()));
  return o;
}

Outcome sunburst_checks() {
  Outcome o;
  const auto snapshot = wg::load_snapshot(read_fixture("workshop.json"));
  const auto t = wg::tally(snapshot, {{"a", "transfer", 1.0, std::nullopt},
                                      {"b", "create_image", 1.0, std::nullopt}});
  auto percent = wg::percentages(t, t.total());
  for (auto& p : percent) p *= 100.0;
  const auto model = wg::build_sunburst(snapshot, percent);
  o.require(wg::emit_svg(model) == wg::emit_svg(model), "identical SVG bytes");
  std::map<int, double> spans;
  for (const auto& arc : model.arcs) {
    if (arc.parent >= 0 && !arc.collection) spans[arc.parent] += arc.span();
  }
  double worst = 0.0;
  for (const auto& [parent, span] : spans) {
    worst = std::max(worst, std::abs(span - model.arcs[parent].span()));
  }
  o.require(worst <= 1e-6, fmt::format("span drift {:.3g} deg", worst));
  const auto diamond = wg::load_snapshot(read_fixture("diamond.json"));
  const auto dm = wg::build_sunburst(diamond, std::vector<double>(diamond.size(), 0.0));
  const auto dashed = std::count_if(dm.arcs.begin(), dm.arcs.end(),
                                    [](const wg::Arc& a) { return a.dashed; });
  o.require(dashed == 2, fmt::format("{} dashed arcs", dashed));
  o.note(fmt::format("max span drift {:.3g} deg; {} dashed arcs on the diamond", worst, dashed));
  return o;
}

Outcome scale_smoke() {
  Outcome o;
  const auto snapshot = wg::synthetic_snapshot({});
  const auto records = wg::synthetic_apps(13'000, 2);
  auto stub = wg::ScriptedModelClient::parse(wg::synthetic_stub_script(snapshot, records, 2, 0.02));
  const auto start = Clock::now();
  const wg::Classifier classifier(snapshot, nullptr, {});
  const auto batch = wg::batch_classify(classifier, records, stub, 4);
  const auto assignments = wg::assignments_from_results(snapshot, batch.results, &records);
  const auto t = wg::tally(snapshot, assignments);
  auto percent = wg::percentages(t, t.total());
  for (auto& p : percent) p *= 100.0;
  const auto model = wg::build_sunburst(snapshot, percent);
  const auto svg = wg::emit_svg(model);
  const double elapsed = seconds_since(start);
  o.require(batch.results.size() == 13'000 && batch.failures.empty(), "all records classified");
  o.require(elapsed < 60.0, fmt::format("runtime {:.2f} s", elapsed));
  o.note(fmt::format("13,000 records, {} assignments, {} arcs, {} SVG bytes in {:.2f} s",
                     assignments.size(), model.arcs.size(), svg.size(), elapsed));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--expect-fail" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string n; std::getline(list, n, ',');) expected_failures.insert(std::stoi(n));
    } else {
      fmt::print(stderr, "usage: {} [--expect-fail N[,N...]]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::function<Outcome()>> criteria{
      medical_golden,  market_split,   aggregation_oracle,          double_count,
      wu_palmer,       weighted_kappa, classification_determinism, snapshot_round_trip,
      sunburst_checks, scale_smoke};
  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i]();
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const int n = static_cast<int>(i) + 1;
    if (!outcome.pass) failed.insert(n);
    std::string detail;
    for (const auto& note : outcome.notes) detail += (detail.empty() ? "" : "; ") + note;
    fmt::print("criterion {}: {}  {}\n", n, outcome.pass ? "PASS" : "FAIL", detail);
  }
  fmt::print("{} of {} criteria pass\n", criteria.size() - failed.size(), criteria.size());
  if (!expected_failures.empty()) {
    if (failed == expected_failures) return 0;
    fmt::print("unexpected outcome: failing set differs from --expect-fail\n");
    return 1;
  }
  return failed.empty() ? 0 : 1;
}
