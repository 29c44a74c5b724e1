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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "manifest.h"
#include "workgraph/agreement.h"
#include "workgraph/aggregation.h"
#include "workgraph/classify.h"
#include "workgraph/decompose.h"
#include "workgraph/csv.h"
#include "workgraph/error.h"
#include "workgraph/market.h"
#include "workgraph/model_client.h"
#include "workgraph/records.h"
#include "workgraph/search.h"
#include "workgraph/snapshot_io.h"
#include "workgraph/sunburst.h"

namespace workgraph::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("{}: cannot read file", path));
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("{}: cannot write file", path));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError(fmt::format("{}: write failed", path));
}

// Prefixes library errors with the file they concern.
template <typename F>
auto in_file(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(fmt::format("{}: {}", path, e.what()));
  } catch (const Error& e) {
    throw DataError(fmt::format("{}: {}", path, e.what()));
  }
}

// Row errors abort unless the caller opted to skip bad rows.
template <typename Record>
std::vector<Record> accept_rows(const std::string& path, RecordTable<Record> table,
                                bool skip_bad_rows, std::ostream& err) {
  for (const auto& e : table.errors) err << path << ": " << e.to_string() << "\n";
  if (!table.errors.empty() && !skip_bad_rows) {
    throw DataError(fmt::format("{}: {} of {} rows rejected", path, table.errors.size(),
                                table.data_rows));
  }
  return std::move(table.records);
}

std::string with_suffix(const std::string& path, std::string_view suffix) {
  return path + std::string(suffix);
}

// "tally.csv" + 2016 -> "tally-2016.csv"
std::string year_path(const std::string& path, int year) {
  const fs::path p(path);
  auto name = p.stem().string() + fmt::format("-{}", year) + p.extension().string();
  return (p.parent_path() / name).string();
}

struct Context {
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;

  void write_outputs(Manifest& manifest,
                     const std::vector<std::pair<std::string, std::string>>& outputs) const {
    for (const auto& [path, bytes] : outputs) {
      write_file(path, bytes);
      manifest.add_output(path, bytes);
    }
    const auto manifest_path = with_suffix(outputs.front().first, ".manifest.json");
    write_file(manifest_path, manifest.to_json());
    out << "wrote " << outputs.front().first << " (manifest " << manifest_path << ")\n";
  }
};

struct LoadedSnapshot {
  ActivitySnapshot snapshot;
  std::string bytes;
};

LoadedSnapshot load_snapshot_file(const std::string& path, bool validate = true) {
  auto bytes = read_file(path);
  auto snapshot = in_file(path, [&] { return load_snapshot(bytes, {validate}); });
  return {std::move(snapshot), std::move(bytes)};
}

// ---------------------------------------------------------------------------
// Subcommands

struct ValidateArgs {
  std::string snapshot;
};

int cmd_validate(const Context& ctx, const ValidateArgs& a) {
  const auto loaded = load_snapshot_file(a.snapshot, /*validate=*/false);
  const auto report = validate(loaded.snapshot);
  ctx.out << fmt::format("{} violations\n", report.violations.size());
  if (!report.ok()) ctx.out << report.to_string();
  return report.ok() ? kExitOk : kExitDataError;
}

struct StatsArgs {
  std::string snapshot;
};

int cmd_stats(const Context& ctx, const StatsArgs& a) {
  const auto loaded = load_snapshot_file(a.snapshot);
  const auto s = snapshot_stats(loaded.snapshot);
  ctx.out << fmt::format(
      "nodes {}\ngeneric {}\natomic {}\nsource_task {}\npaths {}\nmin_path_length {}\n"
      "max_path_length {}\nmedian_path_length {}\nmultiple_inheritance {}\n",
      loaded.snapshot.size(), s.generic, s.atomic, s.source_task, s.path_count,
      s.min_path_length, s.max_path_length, s.median_path_length, s.multiple_inheritance);
  return kExitOk;
}

struct SearchArgs {
  std::string snapshot;
  std::string query;
  std::size_t limit = 10;
  std::string mode = "hybrid";
  std::size_t dimension = HashEmbedder::kDefaultDimension;
};

int cmd_search(const Context& ctx, const SearchArgs& a) {
  const auto loaded = load_snapshot_file(a.snapshot);
  const auto& snapshot = loaded.snapshot;
  const HashEmbedder embedder(a.dimension);
  std::vector<SearchHit> hits;
  if (a.mode == "keyword") {
    hits = keyword_search(snapshot, a.query, a.limit);
  } else {
    const SemanticIndex index(snapshot, embedder);
    hits = a.mode == "semantic" ? index.search(a.query, embedder, a.limit)
                                : hybrid_search(snapshot, index, a.query, embedder, a.limit);
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const auto& node = snapshot.node(hits[i].node);
    ctx.out << fmt::format("{}\t{:.4f}\t{}\t{}\t{}\n", i + 1, hits[i].score,
                           hits[i].channel == Channel::kKeyword ? "keyword" : "semantic",
                           node.id, node.title);
  }
  return kExitOk;
}

struct ClassifyArgs {
  std::string snapshot;
  std::string apps;
  std::string strategy = "spfo";
  std::size_t k = 100;
  std::string model;
  std::size_t parallel = 1;
  std::string out;
  std::string assignments;
  long long deadline_ms = 60'000;
  std::size_t dimension = HashEmbedder::kDefaultDimension;
  bool skip_bad_rows = false;
};

int cmd_classify(const Context& ctx, const ClassifyArgs& a) {
  const auto loaded = load_snapshot_file(a.snapshot);
  const auto app_bytes = read_file(a.apps);
  auto records = accept_rows(a.apps, in_file(a.apps, [&] { return load_apps(app_bytes); }),
                             a.skip_bad_rows, ctx.err);
  auto model = make_model_client(a.model);

  ClassifierOptions options;
  options.strategy = parse_strategy(a.strategy);
  options.k = a.k;
  options.deadline = std::chrono::milliseconds(a.deadline_ms);
  const HashEmbedder embedder(a.dimension);
  const Classifier classifier(loaded.snapshot,
                              options.strategy == Strategy::kSPFO ? nullptr : &embedder,
                              options);
  const auto batch = batch_classify(classifier, records, *model, a.parallel);

  Manifest manifest("classify", ctx.argv);
  manifest.add_input(a.snapshot, loaded.bytes);
  manifest.add_input(a.apps, app_bytes);
  if (a.model.starts_with("stub:")) {
    const auto script = a.model.substr(5);
    manifest.add_input(script, read_file(script));
  }
  manifest.set_snapshot_version(loaded.snapshot.version());
  manifest.config() = {{"strategy", to_string(options.strategy)},
                       {"k", options.strategy == Strategy::kSPFO ? nlohmann::ordered_json()
                                                                 : nlohmann::ordered_json(a.k)},
                       {"model", a.model.starts_with("http:") ? "http" : a.model},
                       {"parallel", a.parallel},
                       {"deadline_ms", a.deadline_ms},
                       {"embedder", fmt::format("hash-{}", a.dimension)}};

  std::vector<std::pair<std::string, std::string>> outputs{
      {a.out, results_to_csv(batch.results)},
      {with_suffix(a.out, ".failures.csv"), failures_to_csv(batch.failures)}};
  if (!a.assignments.empty()) {
    outputs.emplace_back(a.assignments, save_assignments(assignments_from_results(
                                            loaded.snapshot, batch.results, &records)));
  }
  ctx.write_outputs(manifest, outputs);
  std::size_t hallucinated = 0;
  for (const auto& r : batch.results) hallucinated += r.hallucinated;
  ctx.out << fmt::format("{} classified, {} hallucinated, {} failed\n", batch.results.size(),
                         hallucinated, batch.failures.size());
  for (const auto& f : batch.failures) {
    ctx.err << fmt::format("{}: record {} ({}): {}\n", a.apps, f.record, to_string(f.kind),
                           f.message);
  }
  return kExitOk;
}

struct IaaArgs {
  std::string snapshot;
  std::vector<std::string> annotations;
  std::string metric = "wup";
  std::string mode = "pairwise";
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 0;
  double level = 0.95;
  std::size_t parallel = 1;
};

int cmd_iaa(const Context& ctx, const IaaArgs& a) {
  const auto loaded = load_snapshot_file(a.snapshot);
  std::vector<AnnotationSet> sets;
  for (const auto& path : a.annotations) {
    const auto bytes = read_file(path);
    sets.push_back(in_file(path, [&] {
      return load_annotations(loaded.snapshot, bytes, fs::path(path).stem().string());
    }));
  }
  const auto mode = a.mode == "reference" ? PairMode::kVersusReference : PairMode::kPairwiseAll;
  const auto& snapshot = loaded.snapshot;
  SetMetric metric;
  if (a.metric == "wup") {
    metric = [&](const std::vector<AnnotationSet>& s) { return mean_wup(snapshot, s, mode).mean; };
    const auto summary = mean_wup(snapshot, sets, mode);
    ctx.out << fmt::format("mean_wup {:.6f} ({} comparisons, {} missing)\n", summary.mean,
                           summary.comparisons, summary.missing);
  } else {
    metric = [&](const std::vector<AnnotationSet>& s) { return mean_kappa(snapshot, s, mode); };
    ctx.out << fmt::format("weighted_kappa {:.6f}\n", mean_kappa(snapshot, sets, mode));
  }
  if (a.bootstrap > 0) {
    const auto ci = bootstrap_ci(metric, sets, a.bootstrap, a.level, a.seed, a.parallel);
    ctx.out << fmt::format(
        "ci{:g} [{:.6f}, {:.6f}] (order statistics {}/{} of {}, {} skipped, seed {})\n",
        a.level * 100.0, ci.low, ci.high, ci.low_rank, ci.high_rank, ci.used, ci.skipped,
        a.seed);
  }
  return kExitOk;
}

struct TallyArgs {
  std::string snapshot;
  std::string assignments;
  std::string mode = "count";
  bool by_year = false;
  bool cumulative = false;
  std::string out;
  std::size_t top = 0;
};

int cmd_tally(const Context& ctx, const TallyArgs& a) {
  if (a.cumulative && !a.by_year) throw InvalidArgument("--cumulative requires --by-year");
  const auto loaded = load_snapshot_file(a.snapshot);
  const auto& snapshot = loaded.snapshot;
  const auto bytes = read_file(a.assignments);
  auto assignments = in_file(a.assignments, [&] { return load_assignments(snapshot, bytes); });
  if (a.mode == "count") {
    for (auto& x : assignments) x.weight = 1.0;
  }

  std::vector<std::pair<std::string, std::string>> outputs;
  const auto report = [&](const std::string& label, const std::vector<Assignment>& list,
                          const std::string& path) {
    const auto t = tally(snapshot, list);
    ctx.out << fmt::format("{}items {} total {} coverage {:.6f}\n", label, t.items(),
                           t.total(), coverage(snapshot, list));
    if (a.top > 0) {
      for (const auto& row : top_activities(snapshot, t, a.top, Measure::kDirect)) {
        ctx.out << fmt::format("  {}\t{}\n", row.direct, snapshot.node(row.node).title);
      }
    }
    if (!path.empty()) outputs.emplace_back(path, tally_to_csv(snapshot, t));
    else if (!a.by_year) ctx.out << tally_to_csv(snapshot, t);
  };
  if (a.by_year) {
    const auto years =
        in_file(a.assignments, [&] { return slice_by_year(assignments, a.cumulative); });
    for (const auto& [year, list] : years) {
      report(fmt::format("{} ", year), list, a.out.empty() ? "" : year_path(a.out, year));
    }
  } else {
    report("", assignments, a.out);
  }
  if (!outputs.empty()) {
    Manifest manifest("tally", ctx.argv);
    manifest.add_input(a.snapshot, loaded.bytes);
    manifest.add_input(a.assignments, bytes);
    manifest.set_snapshot_version(snapshot.version());
    manifest.config() = {{"mode", a.mode}, {"by_year", a.by_year}, {"cumulative", a.cumulative}};
    ctx.write_outputs(manifest, outputs);
  }
  return kExitOk;
}

struct MarketArgs {
  std::vector<std::string> inputs;
  std::string config;
  std::string out;
  std::vector<std::string> segment_revenue;
  std::string results;
  std::string snapshot;
  std::string assignments_out;
  std::string nodes_out;
  bool skip_bad_rows = false;
};

MarketConfig market_config(const MarketArgs& a, std::string* bytes) {
  MarketConfig config;
  if (!a.config.empty()) {
    *bytes = read_file(a.config);
    config = in_file(a.config, [&] { return parse_market_config(*bytes); });
  }
  for (const auto& item : a.segment_revenue) {
    const auto eq = item.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidArgument(
          fmt::format("--segment-revenue expects SEGMENT=AMOUNT, got '{}'", item));
    }
    try {
      config.segment_revenue[item.substr(0, eq)] = parse_amount(item.substr(eq + 1));
    } catch (const DataError& e) {
      throw InvalidArgument(fmt::format("--segment-revenue: {}", e.what()));
    }
  }
  config.validate();
  return config;
}

nlohmann::ordered_json config_json(const MarketConfig& config) {
  nlohmann::ordered_json j;
  j["total_ai_market"] = format_amount(config.total_ai_market);
  j["robotics_market"] = format_amount(config.robotics_market);
  j["software_market"] = format_amount(config.software_market());
  j["annualization"] = nlohmann::ordered_json::object();
  for (const auto& [billing, m] : config.annualization) {
    j["annualization"][std::string(to_string(billing))] = m;
  }
  j["segment_revenue"] = nlohmann::ordered_json::object();
  for (const auto& [segment, r] : config.segment_revenue) {
    j["segment_revenue"][segment] = format_amount(r);
  }
  return j;
}

std::string node_values_csv(const std::map<std::string, Money>& values) {
  std::string out = "node,value\n";
  for (const auto& [node, value] : values) {
    out += csv_escape(node);
    out += ',';
    out += format_amount(value);
    out += '\n';
  }
  return out;
}

int cmd_market_apps(const Context& ctx, const MarketArgs& a) {
  if (a.inputs.size() != 1) throw InvalidArgument("market apps takes one apps CSV");
  std::string config_bytes;
  const auto config = market_config(a, &config_bytes);
  const auto& path = a.inputs[0];
  const auto bytes = read_file(path);
  const auto records =
      accept_rows(path, in_file(path, [&] { return load_apps(bytes); }), a.skip_bad_rows, ctx.err);
  const auto shares = in_file(path, [&] { return app_market_shares(records, config); });
  std::vector<double> fractions;
  for (const auto& s : shares) fractions.push_back(s.share);
  const auto values = scale_shares(fractions, config.software_market());

  Manifest manifest("market apps", ctx.argv);
  manifest.add_input(path, bytes);
  if (!config_bytes.empty()) manifest.add_input(a.config, config_bytes);
  manifest.config() = config_json(config);
  std::vector<std::pair<std::string, std::string>> outputs;
  const auto report = app_report_csv(records, shares, values, config);
  if (a.out.empty()) {
    ctx.out << report;
  } else {
    outputs.emplace_back(a.out, report);
  }

  if (!a.results.empty()) {
    if (a.snapshot.empty()) throw InvalidArgument("--results requires --snapshot");
    const auto loaded = load_snapshot_file(a.snapshot);
    const auto result_bytes = read_file(a.results);
    const auto results = in_file(a.results, [&] { return load_results(result_bytes); });
    manifest.add_input(a.snapshot, loaded.bytes);
    manifest.add_input(a.results, result_bytes);
    manifest.set_snapshot_version(loaded.snapshot.version());
    std::map<std::string, Money> value_of;
    for (std::size_t i = 0; i < records.size(); ++i) value_of[records[i].name] = values[i];
    auto assignments = assignments_from_results(loaded.snapshot, results, &records);
    std::map<std::string, Money> per_node;
    for (auto& x : assignments) {
      const auto it = value_of.find(x.item);
      const Money v = it == value_of.end() ? Money{} : it->second;
      x.weight = v.dollars();
      per_node[x.node] += v;
    }
    if (!a.assignments_out.empty()) {
      outputs.emplace_back(a.assignments_out, save_assignments(assignments));
    }
    if (!a.nodes_out.empty()) outputs.emplace_back(a.nodes_out, node_values_csv(per_node));
  }
  if (!outputs.empty()) ctx.write_outputs(manifest, outputs);
  ctx.out << fmt::format("software market {} over {} records\n",
                         format_amount(config.software_market()), records.size());
  return kExitOk;
}

int cmd_market_robots(const Context& ctx, const MarketArgs& a) {
  if (a.inputs.size() < 2 || a.inputs.size() > 3) {
    throw InvalidArgument("market robots takes ROBOTS.csv SEGMENTS.csv [MAPPING.csv]");
  }
  std::string config_bytes;
  const auto config = market_config(a, &config_bytes);
  Manifest manifest("market robots", ctx.argv);
  std::vector<std::string> bytes;
  for (const auto& path : a.inputs) {
    bytes.push_back(read_file(path));
    manifest.add_input(path, bytes.back());
  }
  if (!config_bytes.empty()) manifest.add_input(a.config, config_bytes);
  manifest.config() = config_json(config);

  auto robots = accept_rows(a.inputs[0], in_file(a.inputs[0], [&] { return load_robots(bytes[0]); }),
                            a.skip_bad_rows, ctx.err);
  const auto segments =
      accept_rows(a.inputs[1], in_file(a.inputs[1], [&] { return load_segments(bytes[1]); }),
                  a.skip_bad_rows, ctx.err);
  if (a.inputs.size() == 3) {
    const auto mapping = accept_rows(
        a.inputs[2], in_file(a.inputs[2], [&] { return load_segment_mapping(bytes[2]); }),
        a.skip_bad_rows, ctx.err);
    robots = in_file(a.inputs[2], [&] { return apply_segment_mapping(robots, mapping); });
  }
  const auto revenue =
      in_file(a.inputs[0], [&] { return robot_revenue_pipeline(config, segments, robots); });
  const auto report = segment_report_csv(revenue, config);
  for (const auto& note : revenue.notes) ctx.err << note << "\n";

  std::vector<std::pair<std::string, std::string>> outputs;
  if (a.out.empty()) {
    ctx.out << report;
  } else {
    outputs.emplace_back(a.out, report);
  }
  if (!a.nodes_out.empty()) outputs.emplace_back(a.nodes_out, node_values_csv(revenue.node_revenue));
  if (!outputs.empty()) ctx.write_outputs(manifest, outputs);
  Money allocated;
  for (const auto& [_, v] : revenue.node_revenue) allocated += v;
  ctx.out << fmt::format("allocated {} unallocated {}\n", format_amount(allocated),
                         format_amount(revenue.unallocated));
  return kExitOk;
}

int cmd_market_combined(const Context& ctx, const MarketArgs& a) {
  if (a.inputs.size() != 3) {
    throw InvalidArgument("market combined takes SNAPSHOT SOFTWARE.csv ROBOTS.csv");
  }
  std::string config_bytes;
  const auto config = market_config(a, &config_bytes);
  const auto loaded = load_snapshot_file(a.inputs[0]);
  const auto software_bytes = read_file(a.inputs[1]);
  const auto robot_bytes = read_file(a.inputs[2]);
  const auto software = in_file(a.inputs[1], [&] { return load_node_values(software_bytes); });
  const auto robot = in_file(a.inputs[2], [&] { return load_node_values(robot_bytes); });
  const auto rows = combine(loaded.snapshot, software, robot);
  const auto split = global_split(config);

  Manifest manifest("market combined", ctx.argv);
  manifest.add_input(a.inputs[0], loaded.bytes);
  manifest.add_input(a.inputs[1], software_bytes);
  manifest.add_input(a.inputs[2], robot_bytes);
  if (!config_bytes.empty()) manifest.add_input(a.config, config_bytes);
  manifest.set_snapshot_version(loaded.snapshot.version());
  manifest.config() = config_json(config);
  const auto report = combined_report_csv(loaded.snapshot, rows, config);
  if (a.out.empty()) {
    ctx.out << report;
  } else {
    ctx.write_outputs(manifest, {{a.out, report}});
  }
  ctx.out << fmt::format("global split: software {:.0f}% robots {:.0f}%\n",
                         100.0 * split.software_fraction, 100.0 * split.robot_fraction);
  return kExitOk;
}

struct SunburstArgs {
  std::string snapshot;
  std::string tally;
  int depth = 5;
  double scale_max = 1.0;
  std::string svg;
  std::string json;
  std::string weighting = "descendants";
  double label_min = 3.0;
};

int cmd_sunburst(const Context& ctx, const SunburstArgs& a) {
  if (a.svg.empty() && a.json.empty()) throw InvalidArgument("give --svg and/or --json");
  const auto loaded = load_snapshot_file(a.snapshot);
  const auto tally_bytes = read_file(a.tally);
  const auto columns = in_file(a.tally, [&] { return load_tally(loaded.snapshot, tally_bytes); });
  SunburstOptions options;
  options.max_depth = a.depth;
  options.color_scale_max = a.scale_max;
  options.weighting = a.weighting == "leaves" ? ArcWeighting::kLeaves : ArcWeighting::kDescendants;
  const auto model = build_sunburst(loaded.snapshot, columns.percent, options);

  Manifest manifest("sunburst", ctx.argv);
  manifest.add_input(a.snapshot, loaded.bytes);
  manifest.add_input(a.tally, tally_bytes);
  manifest.set_snapshot_version(loaded.snapshot.version());
  manifest.config() = {{"depth", a.depth},
                       {"color_scale_max", a.scale_max},
                       {"weighting", a.weighting},
                       {"label_min_degrees", a.label_min}};
  std::vector<std::pair<std::string, std::string>> outputs;
  if (!a.svg.empty()) {
    SvgOptions svg;
    svg.label_min_degrees = a.label_min;
    outputs.emplace_back(a.svg, emit_svg(model, svg));
  }
  if (!a.json.empty()) outputs.emplace_back(a.json, emit_doc(model));
  ctx.write_outputs(manifest, outputs);
  ctx.out << fmt::format("{} arcs\n", model.arcs.size());
  return kExitOk;
}

struct DecomposeArgs {
  std::string input;
};

int cmd_decompose(const Context& ctx, const DecomposeArgs& a) {
  std::vector<std::string> lines;
  std::error_code ec;
  if (fs::is_regular_file(a.input, ec)) {
    std::istringstream text(read_file(a.input));
    for (std::string line; std::getline(text, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) lines.push_back(line);
    }
  } else {
    lines.push_back(a.input);
  }
  for (const auto& line : lines) {
    for (const auto& pair : decompose_task(line)) {
      ctx.out << pair.verb << '\t' << pair.object << '\n';
    }
    if (lines.size() > 1) ctx.out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Activity ontology toolkit: validate, search, classify, agree, tally, value, draw",
               "workgraph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", WORKGRAPH_VERSION);

  std::function<int(const Context&)> action;
  const auto bind = [&](CLI::App* sub, auto& args, auto fn) {
    sub->callback([&action, &args, fn] {
      action = [&args, fn](const Context& ctx) { return fn(ctx, args); };
    });
  };

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check a snapshot against the structural rules");
  validate_cmd->add_option("snapshot", validate_args.snapshot, "Snapshot JSON")->required();
  bind(validate_cmd, validate_args, cmd_validate);

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Node counts and root path lengths");
  stats_cmd->add_option("snapshot", stats_args.snapshot, "Snapshot JSON")->required();
  bind(stats_cmd, stats_args, cmd_stats);

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "Find nodes by keyword and/or embedding");
  search_cmd->add_option("snapshot", search_args.snapshot, "Snapshot JSON")->required();
  search_cmd->add_option("--query,-q", search_args.query, "Query text")->required();
  search_cmd->add_option("--limit,-n", search_args.limit, "Maximum hits")
      ->capture_default_str()->check(CLI::PositiveNumber);
  search_cmd->add_option("--mode", search_args.mode, "keyword, semantic or hybrid")
      ->capture_default_str()->check(CLI::IsMember({"keyword", "semantic", "hybrid"}));
  search_cmd->add_option("--embed-dim", search_args.dimension, "Hash embedder dimension")
      ->capture_default_str()->check(CLI::PositiveNumber);
  bind(search_cmd, search_args, cmd_search);

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "Place app records on the ontology");
  classify_cmd->add_option("snapshot", classify_args.snapshot, "Snapshot JSON")->required();
  classify_cmd->add_option("apps", classify_args.apps, "Apps CSV")->required();
  classify_cmd->add_option("--strategy", classify_args.strategy, "sppo, mppo or spfo")
      ->capture_default_str()->check(CLI::IsMember({"sppo", "mppo", "spfo"}));
  classify_cmd->add_option("--k", classify_args.k, "Shortlist length for sppo/mppo")
      ->capture_default_str()->check(CLI::PositiveNumber);
  classify_cmd->add_option("--model", classify_args.model, "stub:<script.tsv> or http:<endpoint>")
      ->required();
  classify_cmd->add_option("--parallel,-j", classify_args.parallel, "Concurrent model calls")
      ->capture_default_str()->check(CLI::PositiveNumber);
  classify_cmd->add_option("--out,-o", classify_args.out, "Results CSV")->required();
  classify_cmd->add_option("--assignments", classify_args.assignments,
                           "Also write tally input (item,node,weight,year)");
  classify_cmd->add_option("--deadline-ms", classify_args.deadline_ms, "Per-call deadline")
      ->capture_default_str()->check(CLI::PositiveNumber);
  classify_cmd->add_option("--embed-dim", classify_args.dimension, "Hash embedder dimension")
      ->capture_default_str()->check(CLI::PositiveNumber);
  classify_cmd->add_flag("--skip-bad-rows", classify_args.skip_bad_rows,
                         "Report malformed rows and continue");
  bind(classify_cmd, classify_args, cmd_classify);

  IaaArgs iaa_args;
  auto* iaa_cmd = app.add_subcommand("iaa", "Inter-annotator agreement");
  iaa_cmd->add_option("snapshot", iaa_args.snapshot, "Snapshot JSON")->required();
  iaa_cmd->add_option("annotations", iaa_args.annotations,
                      "Annotation CSVs (item,node), one per annotator")->required();
  iaa_cmd->add_option("--metric", iaa_args.metric, "wup or kappa")
      ->capture_default_str()->check(CLI::IsMember({"wup", "kappa"}));
  iaa_cmd->add_option("--mode", iaa_args.mode, "pairwise or reference (first file)")
      ->capture_default_str()->check(CLI::IsMember({"pairwise", "reference"}));
  iaa_cmd->add_option("--bootstrap", iaa_args.bootstrap, "Resamples, 0 to skip")
      ->capture_default_str();
  iaa_cmd->add_option("--seed", iaa_args.seed, "Bootstrap seed")->capture_default_str();
  iaa_cmd->add_option("--level", iaa_args.level, "Interval level")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  iaa_cmd->add_option("--parallel,-j", iaa_args.parallel, "Bootstrap threads")
      ->capture_default_str()->check(CLI::PositiveNumber);
  bind(iaa_cmd, iaa_args, cmd_iaa);

  TallyArgs tally_args;
  auto* tally_cmd = app.add_subcommand("tally", "Roll assignments up the hierarchy");
  tally_cmd->add_option("snapshot", tally_args.snapshot, "Snapshot JSON")->required();
  tally_cmd->add_option("assignments", tally_args.assignments, "Assignments CSV")->required();
  tally_cmd->add_option("--mode", tally_args.mode, "count (unit weights) or value")
      ->capture_default_str()->check(CLI::IsMember({"count", "value"}));
  tally_cmd->add_flag("--by-year", tally_args.by_year, "One tally per launch year");
  tally_cmd->add_flag("--cumulative", tally_args.cumulative, "Years include earlier years");
  tally_cmd->add_option("--out,-o", tally_args.out, "Tally CSV (per year: NAME-YEAR.csv)");
  tally_cmd->add_option("--top", tally_args.top, "Also list the top N by direct weight")
      ->capture_default_str();
  bind(tally_cmd, tally_args, cmd_tally);

  auto* market_cmd = app.add_subcommand("market", "Market value allocation");
  market_cmd->require_subcommand(1);
  MarketArgs market_apps_args, market_robots_args, market_combined_args;
  const auto market_common = [](CLI::App* sub, MarketArgs& args) {
    sub->add_option("inputs", args.inputs, "Input files")->required();
    sub->add_option("--config", args.config, "Market config JSON");
    sub->add_option("--out,-o", args.out, "Report CSV (stdout when absent)");
  };
  auto* apps_cmd = market_cmd->add_subcommand("apps", "Software value per app: APPS.csv");
  market_common(apps_cmd, market_apps_args);
  apps_cmd->add_option("--results", market_apps_args.results, "Classification results CSV");
  apps_cmd->add_option("--snapshot", market_apps_args.snapshot, "Snapshot for --results");
  apps_cmd->add_option("--assignments-out", market_apps_args.assignments_out,
                       "Value-weighted assignments (for tally --mode value)");
  apps_cmd->add_option("--nodes-out", market_apps_args.nodes_out, "Per-node values (node,value)");
  apps_cmd->add_flag("--skip-bad-rows", market_apps_args.skip_bad_rows,
                     "Report malformed rows and continue");
  bind(apps_cmd, market_apps_args, cmd_market_apps);
  auto* robots_cmd = market_cmd->add_subcommand(
      "robots", "Robot revenue per subclass: ROBOTS.csv SEGMENTS.csv [MAPPING.csv]");
  market_common(robots_cmd, market_robots_args);
  robots_cmd->add_option("--segment-revenue", market_robots_args.segment_revenue,
                         "Override a segment's revenue: SEGMENT=AMOUNT (repeatable)");
  robots_cmd->add_option("--nodes-out", market_robots_args.nodes_out,
                         "Per-node revenue (node,value)");
  robots_cmd->add_flag("--skip-bad-rows", market_robots_args.skip_bad_rows,
                       "Report malformed rows and continue");
  bind(robots_cmd, market_robots_args, cmd_market_robots);
  auto* combined_cmd = market_cmd->add_subcommand(
      "combined", "Software + robot value per node: SNAPSHOT SOFTWARE.csv ROBOTS.csv");
  market_common(combined_cmd, market_combined_args);
  bind(combined_cmd, market_combined_args, cmd_market_combined);

  SunburstArgs sunburst_args;
  auto* sunburst_cmd = app.add_subcommand("sunburst", "Draw a tally as a sunburst");
  sunburst_cmd->add_option("snapshot", sunburst_args.snapshot, "Snapshot JSON")->required();
  sunburst_cmd->add_option("tally", sunburst_args.tally, "Tally CSV")->required();
  sunburst_cmd->add_option("--depth", sunburst_args.depth, "Rings including the root")
      ->capture_default_str()->check(CLI::PositiveNumber);
  sunburst_cmd->add_option("--scale-max", sunburst_args.scale_max,
                           "Share at which color saturates")
      ->capture_default_str()->check(CLI::PositiveNumber);
  sunburst_cmd->add_option("--svg", sunburst_args.svg, "SVG output");
  sunburst_cmd->add_option("--json", sunburst_args.json, "Structured document output");
  sunburst_cmd->add_option("--weighting", sunburst_args.weighting, "descendants or leaves")
      ->capture_default_str()->check(CLI::IsMember({"descendants", "leaves"}));
  sunburst_cmd->add_option("--label-min", sunburst_args.label_min,
                           "Smallest labelled arc in degrees")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  bind(sunburst_cmd, sunburst_args, cmd_sunburst);

  DecomposeArgs decompose_args;
  auto* decompose_cmd = app.add_subcommand("decompose", "Split a task into verb-object pairs");
  decompose_cmd->add_option("input", decompose_args.input, "Task text, or a file of lines")
      ->required();
  bind(decompose_cmd, decompose_args, cmd_decompose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  Context ctx{std::vector<std::string>(argv + 1, argv + argc), out, err};
  try {
    return action ? action(ctx) : kExitUsageError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace workgraph::cli
