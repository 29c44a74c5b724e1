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

// Placing usage records on the activity ontology with a language model.
//
//   SPPO  retrieve k nodes similar to the record text; one call names the
//         activity and picks from that shortlist.
//   MPPO  one call names the activity; retrieval uses that phrase; a second
//         call picks from the shortlist.
//   SPFO  one call with the whole ontology in the (cacheable) system prompt.

#ifndef WORKGRAPH_CLASSIFY_H_
#define WORKGRAPH_CLASSIFY_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "workgraph/model_client.h"
#include "workgraph/ontology.h"
#include "workgraph/records.h"
#include "workgraph/search.h"

namespace workgraph {

enum class Strategy { kSPPO, kMPPO, kSPFO };

std::string_view to_string(Strategy strategy);
// "sppo", "mppo", "spfo", any case. Throws InvalidArgument.
Strategy parse_strategy(std::string_view text);

enum class Specificity { kLeaf, kNearLeaf, kInternal };

std::string_view to_string(Specificity specificity);

struct ClassificationResult {
  std::string record;  // AppRecord::name
  std::string main_activity;
  std::string main_activity_rationale;
  std::string node_title;
  std::string node_rationale;
  Strategy strategy = Strategy::kSPFO;
  std::optional<std::size_t> k;  // retrieval depth, absent for SPFO
  bool hallucinated = false;
  std::optional<Specificity> specificity;  // absent when hallucinated

  friend bool operator==(const ClassificationResult&,
                         const ClassificationResult&) = default;
};

class ClassificationError : public DataError {
 public:
  enum class Kind { kTimeout, kModel, kUnparseable, kOffShortlist, kNoCandidates };

  ClassificationError(Kind kind, const std::string& message,
                      std::string raw_reply = {})
      : DataError(message), kind_(kind), raw_reply_(std::move(raw_reply)) {}

  Kind kind() const { return kind_; }
  // The last model reply, when one was received.
  const std::string& raw_reply() const { return raw_reply_; }

 private:
  Kind kind_;
  std::string raw_reply_;
};

std::string_view to_string(ClassificationError::Kind kind);

// Exact, case-sensitive: true iff no node carries this title.
bool detect_hallucination(const ActivitySnapshot& snapshot, std::string_view title);

// Leaf: no children. Near-leaf: every child is a leaf. Source-task children
// are not specializations and are ignored. Throws UnknownNodeError.
Specificity specificity(const ActivitySnapshot& snapshot, NodeIndex node);

struct ClassifierOptions {
  Strategy strategy = Strategy::kSPFO;
  std::size_t k = 100;  // SPPO / MPPO shortlist length
  std::chrono::milliseconds deadline{60'000};
};

// Holds everything reusable across records: the prompt ontology for SPFO,
// the semantic index for SPPO/MPPO. classify() is const and thread safe as
// long as the model client is.
class Classifier {
 public:
  // `embedder` is required for SPPO and MPPO and must outlive the
  // classifier. Throws InvalidArgument on k == 0 or a missing embedder.
  Classifier(const ActivitySnapshot& snapshot, const Embedder* embedder,
             ClassifierOptions options);
  ~Classifier();

  // A malformed reply earns one re-ask naming the problem; a second failure
  // throws ClassificationError carrying the reply. Timeouts and transport
  // errors are not retried. A selection that is a real node outside the
  // shortlist counts as malformed.
  ClassificationResult classify(const AppRecord& record, ModelClient& model) const;

  const ClassifierOptions& options() const { return options_; }

 private:
  struct Reply;
  Reply ask(ModelClient& model, const std::string& system_prompt,
            const std::string& user_prompt,
            const std::vector<std::string_view>& keys,
            const std::vector<NodeIndex>* shortlist) const;
  std::vector<NodeIndex> retrieve(std::string_view text) const;
  ClassificationResult finish(const AppRecord& record, std::string activity,
                              std::string activity_rationale, std::string title,
                              std::string rationale) const;

  ActivitySnapshot snapshot_;
  const Embedder* embedder_;
  ClassifierOptions options_;
  std::unique_ptr<SemanticIndex> index_;
  std::string full_system_prompt_;
};

ClassificationResult classify(const ActivitySnapshot& snapshot,
                              const AppRecord& record, Strategy strategy,
                              ModelClient& model, const Embedder* embedder,
                              std::size_t k = 100);

struct BatchFailure {
  std::size_t index = 0;  // position in the input
  std::string record;
  ClassificationError::Kind kind = ClassificationError::Kind::kModel;
  std::string message;
  std::string raw_reply;
};

struct BatchOutput {
  std::vector<ClassificationResult> results;  // input order, failures skipped
  std::vector<BatchFailure> failures;         // input order
};

// Records are independent; `parallelism` worker threads share the model
// client. Output order never depends on completion order. Throws
// InvalidArgument when parallelism == 0.
BatchOutput batch_classify(const Classifier& classifier,
                           const std::vector<AppRecord>& records,
                           ModelClient& model, std::size_t parallelism);

// CSV with header
//   record,main_activity,main_activity_rationale,node_title,node_rationale,
//   strategy,k,hallucinated,specificity
std::string results_to_csv(const std::vector<ClassificationResult>& results);
// CSV with header index,record,kind,message,raw_reply
std::string failures_to_csv(const std::vector<BatchFailure>& failures);
// Inverse of results_to_csv. Throws SchemaError / DataError.
std::vector<ClassificationResult> load_results(std::string_view bytes);

}  // namespace workgraph

#endif  // WORKGRAPH_CLASSIFY_H_
