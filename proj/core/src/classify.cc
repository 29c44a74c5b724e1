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

#include "workgraph/classify.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>
#include <variant>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "json.hpp"
#include "workgraph/csv.h"
#include "workgraph/snapshot_io.h"
#include "workgraph_prompts.inc"

namespace workgraph {

namespace {

using json = nlohmann::json;

constexpr std::string_view kActivityKey = "main_activity";
constexpr std::string_view kActivityReasonKey = "reasoning_main_activity";
constexpr std::string_view kNodeKey = "most_appropriate_node";
constexpr std::string_view kNodeReasonKey = "most_appropriate_node_rationale";

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Substitutes {{NAME}} placeholders. Replacement text is not rescanned.
std::string fill(std::string_view tmpl,
                 std::initializer_list<std::pair<std::string_view, std::string_view>> values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    const auto name = tmpl.substr(open + 2, close - open - 2);
    out.append(tmpl.substr(pos, open - pos));
    bool found = false;
    for (const auto& [key, value] : values) {
      if (key == name) {
        out.append(value);
        found = true;
        break;
      }
    }
    if (!found) out.append(tmpl.substr(open, close + 2 - open));
    pos = close + 2;
  }
  out.append(tmpl.substr(pos));
  return out;
}

std::string app_prompt(std::string_view tmpl, const AppRecord& record) {
  return fill(tmpl, {{"TITLE", record.name},
                     {"TAGLINE", record.tagline},
                     {"DESCRIPTION", record.description}});
}

std::string record_text(const AppRecord& record) {
  std::string text = record.name;
  for (const auto* part : {&record.tagline, &record.description}) {
    if (part->empty()) continue;
    text += ' ';
    text += *part;
  }
  return text;
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kSPPO: return "sppo";
    case Strategy::kMPPO: return "mppo";
    case Strategy::kSPFO: return "spfo";
  }
  return "spfo";
}

Strategy parse_strategy(std::string_view text) {
  const auto s = lower(text);
  if (s == "sppo") return Strategy::kSPPO;
  if (s == "mppo") return Strategy::kMPPO;
  if (s == "spfo") return Strategy::kSPFO;
  throw InvalidArgument(fmt::format("unknown strategy '{}'", text));
}

std::string_view to_string(Specificity specificity) {
  switch (specificity) {
    case Specificity::kLeaf: return "leaf";
    case Specificity::kNearLeaf: return "near_leaf";
    case Specificity::kInternal: return "internal";
  }
  return "internal";
}

std::string_view to_string(ClassificationError::Kind kind) {
  using Kind = ClassificationError::Kind;
  switch (kind) {
    case Kind::kTimeout: return "timeout";
    case Kind::kModel: return "model_error";
    case Kind::kUnparseable: return "unparseable";
    case Kind::kOffShortlist: return "off_shortlist";
    case Kind::kNoCandidates: return "no_candidates";
  }
  return "model_error";
}

bool detect_hallucination(const ActivitySnapshot& snapshot, std::string_view title) {
  return !snapshot.find_by_title(title).has_value();
}

namespace {

bool is_leaf(const ActivitySnapshot& snapshot, NodeIndex node) {
  for (const auto& link : snapshot.children(node)) {
    if (snapshot.node(link.node).kind != NodeKind::kSourceTask) return false;
  }
  return true;
}

}  // namespace

Specificity specificity(const ActivitySnapshot& snapshot, NodeIndex node) {
  if (node.value >= snapshot.size()) {
    throw UnknownNodeError(fmt::format("#{}", node.value));
  }
  if (is_leaf(snapshot, node)) return Specificity::kLeaf;
  for (const auto& link : snapshot.children(node)) {
    if (snapshot.node(link.node).kind == NodeKind::kSourceTask) continue;
    if (!is_leaf(snapshot, link.node)) return Specificity::kInternal;
  }
  return Specificity::kNearLeaf;
}

// ---------------------------------------------------------------------------
// Classifier

struct Classifier::Reply {
  json object;
  std::string raw;
};

Classifier::Classifier(const ActivitySnapshot& snapshot, const Embedder* embedder,
                       ClassifierOptions options)
    : snapshot_(snapshot), embedder_(embedder), options_(options) {
  if (options_.strategy == Strategy::kSPFO) {
    full_system_prompt_ =
        fill(k_classify_system, {{"ONTOLOGY", emit_prompt_ontology(snapshot_)}});
    return;
  }
  if (options_.k == 0) throw InvalidArgument("retrieval depth k must be positive");
  if (embedder_ == nullptr) {
    throw InvalidArgument(fmt::format("strategy {} needs an embedder",
                                      to_string(options_.strategy)));
  }
  index_ = std::make_unique<SemanticIndex>(snapshot_, *embedder_);
}

Classifier::~Classifier() = default;

std::vector<NodeIndex> Classifier::retrieve(std::string_view text) const {
  std::size_t source_tasks = 0;
  for (const auto& node : snapshot_.nodes()) {
    source_tasks += node.kind == NodeKind::kSourceTask;
  }
  std::vector<NodeIndex> shortlist;
  // Zero cosine means nothing in common with the query; such nodes are not
  // candidates. Source tasks are never classification targets.
  for (const auto& hit : index_->search(text, *embedder_, options_.k + source_tasks)) {
    if (hit.score <= 0.0) break;
    if (snapshot_.node(hit.node).kind == NodeKind::kSourceTask) continue;
    shortlist.push_back(hit.node);
    if (shortlist.size() == options_.k) break;
  }
  return shortlist;
}

Classifier::Reply Classifier::ask(ModelClient& model, const std::string& system_prompt,
                                  const std::string& user_prompt,
                                  const std::vector<std::string_view>& keys,
                                  const std::vector<NodeIndex>* shortlist) const {
  using Kind = ClassificationError::Kind;
  std::string prompt = user_prompt;
  std::string problem;
  Kind problem_kind = Kind::kUnparseable;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string raw;
    try {
      raw = model.complete(system_prompt, prompt, options_.deadline);
    } catch (const ModelTimeout& e) {
      throw ClassificationError(Kind::kTimeout, e.what());
    } catch (const ModelError& e) {
      throw ClassificationError(Kind::kModel, e.what());
    }

    problem.clear();
    problem_kind = Kind::kUnparseable;
    json object = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (object.is_discarded() || !object.is_object()) {
      problem = "the reply is not a single JSON object";
    } else {
      for (auto key : keys) {
        const auto it = object.find(std::string(key));
        if (it == object.end() || !it->is_string()) {
          problem = fmt::format("key \"{}\" is missing or not a string", key);
          break;
        }
      }
      if (problem.empty() && object.contains(std::string(kActivityKey)) &&
          object[std::string(kActivityKey)].get<std::string>().empty()) {
        problem = fmt::format("\"{}\" is empty", kActivityKey);
      }
      if (problem.empty() && shortlist != nullptr) {
        const auto title = object[std::string(kNodeKey)].get<std::string>();
        const auto node = snapshot_.find_by_title(title);
        if (node && std::find(shortlist->begin(), shortlist->end(), *node) ==
                        shortlist->end()) {
          problem = fmt::format("\"{}\" is not one of the listed nodes", title);
          problem_kind = Kind::kOffShortlist;
        }
      }
    }
    if (problem.empty()) return {std::move(object), std::move(raw)};
    if (attempt == 1) {
      throw ClassificationError(problem_kind, "after re-ask: " + problem, std::move(raw));
    }
    prompt = user_prompt + fill(k_reask, {{"PROBLEM", problem}});
  }
  throw ClassificationError(problem_kind, problem);  // unreachable
}

ClassificationResult Classifier::finish(const AppRecord& record, std::string activity,
                                        std::string activity_rationale,
                                        std::string title,
                                        std::string rationale) const {
  ClassificationResult result;
  result.record = record.name;
  result.main_activity = std::move(activity);
  result.main_activity_rationale = std::move(activity_rationale);
  result.node_title = std::move(title);
  result.node_rationale = std::move(rationale);
  result.strategy = options_.strategy;
  if (options_.strategy != Strategy::kSPFO) result.k = options_.k;
  const auto node = snapshot_.find_by_title(result.node_title);
  result.hallucinated = !node.has_value();
  if (node) result.specificity = specificity(snapshot_, *node);
  return result;
}

ClassificationResult Classifier::classify(const AppRecord& record,
                                          ModelClient& model) const {
  using Kind = ClassificationError::Kind;
  const auto str = [](const json& o, std::string_view key) {
    return o.at(std::string(key)).get<std::string>();
  };
  const std::vector<std::string_view> full_keys{kActivityKey, kActivityReasonKey,
                                                kNodeKey, kNodeReasonKey};

  switch (options_.strategy) {
    case Strategy::kSPFO: {
      auto reply = ask(model, full_system_prompt_, app_prompt(k_classify_user, record),
                       full_keys, nullptr);
      return finish(record, str(reply.object, kActivityKey),
                    str(reply.object, kActivityReasonKey), str(reply.object, kNodeKey),
                    str(reply.object, kNodeReasonKey));
    }
    case Strategy::kSPPO: {
      const auto shortlist = retrieve(record_text(record));
      if (shortlist.empty()) {
        throw ClassificationError(Kind::kNoCandidates, "retrieval found no candidates");
      }
      const auto system = fill(
          k_classify_system, {{"ONTOLOGY", emit_prompt_shortlist(snapshot_, shortlist)}});
      auto reply = ask(model, system, app_prompt(k_classify_user, record), full_keys,
                       &shortlist);
      return finish(record, str(reply.object, kActivityKey),
                    str(reply.object, kActivityReasonKey), str(reply.object, kNodeKey),
                    str(reply.object, kNodeReasonKey));
    }
    case Strategy::kMPPO: {
      auto extracted = ask(model, std::string(k_extract_system),
                           app_prompt(k_extract_user, record),
                           {kActivityKey, kActivityReasonKey}, nullptr);
      auto activity = str(extracted.object, kActivityKey);
      auto activity_reason = str(extracted.object, kActivityReasonKey);
      const auto shortlist = retrieve(activity);
      if (shortlist.empty()) {
        throw ClassificationError(Kind::kNoCandidates, "retrieval found no candidates");
      }
      const auto system = fill(
          k_select_system, {{"ONTOLOGY", emit_prompt_shortlist(snapshot_, shortlist)}});
      const auto user = fill(k_select_user, {{"TITLE", record.name},
                                             {"TAGLINE", record.tagline},
                                             {"DESCRIPTION", record.description},
                                             {"ACTIVITY", activity},
                                             {"ACTIVITY_REASONING", activity_reason}});
      auto reply = ask(model, system, user, {kNodeKey, kNodeReasonKey}, &shortlist);
      return finish(record, std::move(activity), std::move(activity_reason),
                    str(reply.object, kNodeKey), str(reply.object, kNodeReasonKey));
    }
  }
  throw InvalidArgument("unknown strategy");
}

ClassificationResult classify(const ActivitySnapshot& snapshot, const AppRecord& record,
                              Strategy strategy, ModelClient& model,
                              const Embedder* embedder, std::size_t k) {
  ClassifierOptions options;
  options.strategy = strategy;
  options.k = k;
  return Classifier(snapshot, embedder, options).classify(record, model);
}

// ---------------------------------------------------------------------------
// Batch

BatchOutput batch_classify(const Classifier& classifier,
                           const std::vector<AppRecord>& records, ModelClient& model,
                           std::size_t parallelism) {
  if (parallelism == 0) throw InvalidArgument("parallelism must be at least 1");
  using Slot = std::variant<std::monostate, ClassificationResult, BatchFailure>;
  std::vector<Slot> slots(records.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      try {
        slots[i] = classifier.classify(records[i], model);
      } catch (const ClassificationError& e) {
        slots[i] = BatchFailure{i, records[i].name, e.kind(), e.what(), e.raw_reply()};
      } catch (const std::exception& e) {
        slots[i] = BatchFailure{i, records[i].name, ClassificationError::Kind::kModel,
                                e.what(), {}};
      }
    }
  };
  const std::size_t threads = std::min(parallelism, records.size());
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  BatchOutput out;
  for (auto& slot : slots) {
    if (auto* r = std::get_if<ClassificationResult>(&slot)) {
      out.results.push_back(std::move(*r));
    } else if (auto* f = std::get_if<BatchFailure>(&slot)) {
      out.failures.push_back(std::move(*f));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string results_to_csv(const std::vector<ClassificationResult>& results) {
  CsvWriter writer({"record", "main_activity", "main_activity_rationale", "node_title",
                    "node_rationale", "strategy", "k", "hallucinated", "specificity"});
  for (const auto& r : results) {
    writer.row({r.record, r.main_activity, r.main_activity_rationale, r.node_title,
                r.node_rationale, std::string(to_string(r.strategy)),
                r.k ? std::to_string(*r.k) : std::string(),
                r.hallucinated ? "true" : "false",
                r.specificity ? std::string(to_string(*r.specificity)) : std::string()});
  }
  return writer.str();
}

std::string failures_to_csv(const std::vector<BatchFailure>& failures) {
  CsvWriter writer({"index", "record", "kind", "message", "raw_reply"});
  for (const auto& f : failures) {
    writer.row({std::to_string(f.index), f.record, std::string(to_string(f.kind)),
                f.message, f.raw_reply});
  }
  return writer.str();
}

std::vector<ClassificationResult> load_results(std::string_view bytes) {
  const auto rows = parse_csv(bytes);
  const std::vector<std::string> header{
      "record",        "main_activity", "main_activity_rationale",
      "node_title",    "node_rationale", "strategy",
      "k",             "hallucinated",  "specificity"};
  if (rows.empty() || rows.front().cells != header) {
    throw SchemaError("classification results need the header " +
                      fmt::format("{}", fmt::join(header, ",")));
  }
  std::vector<ClassificationResult> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.cells.size() != header.size()) {
      throw DataError(fmt::format("line {}: expected {} cells, found {}", row.line,
                                  header.size(), row.cells.size()));
    }
    const auto& c = row.cells;
    ClassificationResult r;
    r.record = c[0];
    r.main_activity = c[1];
    r.main_activity_rationale = c[2];
    r.node_title = c[3];
    r.node_rationale = c[4];
    try {
      r.strategy = parse_strategy(c[5]);
    } catch (const InvalidArgument& e) {
      throw DataError(fmt::format("line {}: {}", row.line, e.what()));
    }
    if (!c[6].empty()) r.k = static_cast<std::size_t>(parse_count(c[6]));
    if (c[7] != "true" && c[7] != "false") {
      throw DataError(fmt::format("line {}: hallucinated must be true or false", row.line));
    }
    r.hallucinated = c[7] == "true";
    if (c[8] == "leaf") {
      r.specificity = Specificity::kLeaf;
    } else if (c[8] == "near_leaf") {
      r.specificity = Specificity::kNearLeaf;
    } else if (c[8] == "internal") {
      r.specificity = Specificity::kInternal;
    } else if (!c[8].empty()) {
      throw DataError(fmt::format("line {}: unknown specificity '{}'", row.line, c[8]));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace workgraph
