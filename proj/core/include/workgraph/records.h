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

// Usage-record tables. Every table is UTF-8 CSV with a mandatory header whose
// column set must match exactly (order is free):
//
//   apps             name,tagline,description,price,billing,saves,launch_date,tags
//   robots           name,units,price_low,price_high,segments,ontology_node
//   segments         segment,share
//   segment_mapping  segment,subclass
//
// List-valued cells (tags, segments) are ';'-separated. Prices accept an
// optional leading '$' and at most two decimals; thousands separators are
// rejected. Dates are ISO "2023-06-10" or "10-Jun-23". Shares are fractions
// ("0.29") or percents ("29%").
//
// Row-level problems never abort a load: each bad row becomes a RowError, so
// data rows == records + errors. Header problems throw SchemaError.

#ifndef WORKGRAPH_RECORDS_H_
#define WORKGRAPH_RECORDS_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "workgraph/money.h"

namespace workgraph {

enum class Billing { kOneTime, kMonthly, kYearly, kFreeOnly, kUnknown };

std::string_view to_string(Billing billing);
// Case-insensitive; '-', '_' and ' ' are interchangeable. Unrecognized text
// maps to kUnknown.
Billing parse_billing(std::string_view text);

struct AppRecord {
  std::string name;
  std::string tagline;
  std::string description;
  Money price;
  Billing billing = Billing::kUnknown;
  // The billing cell as written, kept for hybrids like "Free + paid".
  std::string billing_raw;
  std::int64_t saves = 0;
  std::chrono::year_month_day launch_date{};
  std::vector<std::string> platform_tags;

  friend bool operator==(const AppRecord&, const AppRecord&) = default;
};

struct RobotSubclass {
  std::string name;
  std::int64_t units = 0;
  Money price_low;
  Money price_high;
  std::vector<std::string> segments;
  // Title of the ontology activity the subclass is classified under.
  std::string ontology_node;

  friend bool operator==(const RobotSubclass&, const RobotSubclass&) = default;
};

struct SegmentShare {
  std::string segment;
  double share = 0.0;

  friend bool operator==(const SegmentShare&, const SegmentShare&) = default;
};

struct SegmentMapping {
  std::string segment;
  std::string subclass;

  friend bool operator==(const SegmentMapping&, const SegmentMapping&) = default;
};

struct RowError {
  std::size_t line = 0;
  // Empty when the problem concerns the whole row.
  std::string column;
  std::string message;

  std::string to_string() const;
};

template <typename Record>
struct RecordTable {
  std::vector<Record> records;
  std::vector<RowError> errors;
  std::size_t data_rows = 0;
};

RecordTable<AppRecord> load_apps(std::string_view bytes);
RecordTable<RobotSubclass> load_robots(std::string_view bytes);
RecordTable<SegmentShare> load_segments(std::string_view bytes);
RecordTable<SegmentMapping> load_segment_mapping(std::string_view bytes);

std::string save_apps(const std::vector<AppRecord>& records);

// Cell parsers, exposed for reuse by other tabular inputs. Each throws
// DataError with a short reason.
Money parse_price(std::string_view text);
std::chrono::year_month_day parse_date(std::string_view text);
std::string format_date(std::chrono::year_month_day date);
std::int64_t parse_count(std::string_view text);
double parse_share(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

}  // namespace workgraph

#endif  // WORKGRAPH_RECORDS_H_
