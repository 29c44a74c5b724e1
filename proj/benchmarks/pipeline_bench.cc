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

// End-to-end pipeline stages at the scale of a full application census:
// stubbed SPFO classification, tally, sunburst and bootstrap intervals.

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "workgraph/agreement.h"
#include "workgraph/aggregation.h"
#include "workgraph/classify.h"
#include "workgraph/model_client.h"
#include "workgraph/sunburst.h"
#include "workgraph/synthetic.h"

namespace {

using workgraph::ActivitySnapshot;

const ActivitySnapshot& ontology() {
  static const auto s = workgraph::synthetic_snapshot({});
  return s;
}

const std::vector<workgraph::AppRecord>& apps() {
  static const auto records = workgraph::synthetic_apps(13'000, 3);
  return records;
}

std::vector<workgraph::Assignment> assignments() {
  static const auto list = [] {
    auto stub = workgraph::ScriptedModelClient::parse(
        workgraph::synthetic_stub_script(ontology(), apps(), 3));
    const workgraph::Classifier classifier(ontology(), nullptr, {});
    const auto batch = workgraph::batch_classify(classifier, apps(), stub, 1);
    return workgraph::assignments_from_results(ontology(), batch.results, &apps());
  }();
  return list;
}

// Threads share one stub; the range is the worker count.
void BM_ClassifySpfo(benchmark::State& state) {
  auto stub = workgraph::ScriptedModelClient::parse(
      workgraph::synthetic_stub_script(ontology(), apps(), 3));
  const workgraph::Classifier classifier(ontology(), nullptr, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(workgraph::batch_classify(
        classifier, apps(), stub, static_cast<std::size_t>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(apps().size()));
}
BENCHMARK(BM_ClassifySpfo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Tally(benchmark::State& state) {
  const auto list = assignments();
  for (auto _ : state) benchmark::DoNotOptimize(workgraph::tally(ontology(), list));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(list.size()));
}
BENCHMARK(BM_Tally)->Unit(benchmark::kMillisecond);

void BM_CumulativeYears(benchmark::State& state) {
  const auto list = assignments();
  for (auto _ : state) {
    for (const auto& [year, slice] : workgraph::slice_by_year(list, true)) {
      benchmark::DoNotOptimize(workgraph::tally(ontology(), slice));
    }
  }
}
BENCHMARK(BM_CumulativeYears)->Unit(benchmark::kMillisecond);

void BM_Sunburst(benchmark::State& state) {
  const auto t = workgraph::tally(ontology(), assignments());
  auto percent = workgraph::percentages(t, t.total());
  for (auto& p : percent) p *= 100.0;
  workgraph::SunburstOptions options;
  options.max_depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto model = workgraph::build_sunburst(ontology(), percent, options);
    benchmark::DoNotOptimize(workgraph::emit_svg(model));
  }
}
BENCHMARK(BM_Sunburst)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_BootstrapWup(benchmark::State& state) {
  const auto& s = ontology();
  const auto list = assignments();
  workgraph::AnnotationSet a{"a", {}}, b{"b", {}};
  for (std::size_t i = 0; i < 200 && i + 1 < list.size(); ++i) {
    a.items[list[i].item] = list[i].node;
    b.items[list[i].item] = list[i + 1].node;
  }
  const workgraph::SetMetric metric = [&](const auto& sets) {
    return workgraph::mean_wup(s, sets).mean;
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(workgraph::bootstrap_ci(metric, {a, b}, 1000, 0.95, 7));
  }
}
BENCHMARK(BM_BootstrapWup)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
