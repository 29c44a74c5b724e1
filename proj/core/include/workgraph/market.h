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

// Market value allocation. Software: each app's weight is
// saves x price x annualization(billing), normalized into shares of the
// software market. Robots: each segment's revenue is spread over its
// subclasses by units and relative price.

#ifndef WORKGRAPH_MARKET_H_
#define WORKGRAPH_MARKET_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "workgraph/money.h"
#include "workgraph/ontology.h"
#include "workgraph/records.h"

namespace workgraph {

struct MarketConfig {
  Money total_ai_market = Money::from_cents(18'640'000'000'000);  // 186.4 B
  Money robotics_market = Money::from_cents(4'611'000'000'000);   // 46.11 B
  std::map<Billing, double> annualization{{Billing::kMonthly, 12.0},
                                          {Billing::kYearly, 1.0},
                                          {Billing::kOneTime, 1.0},
                                          {Billing::kFreeOnly, 0.0},
                                          {Billing::kUnknown, 1.0}};
  // Segment revenue overrides; segments not listed use share x robotics.
  std::map<std::string, Money, std::less<>> segment_revenue;

  Money software_market() const { return total_ai_market - robotics_market; }
  double multiplier(Billing billing) const;
  // Throws InvalidArgument on negative markets, robotics above the total,
  // or a negative / non-finite multiplier.
  void validate() const;
  // One line, e.g. "total_ai_market=186400000000.00 robotics_market=...
  // annualization=one_time:1;monthly:12;...". Goes at the top of reports.
  std::string describe() const;
};

// JSON object; every key optional:
//   {"total_ai_market": 186.4e9 | "186.4B", "robotics_market": ...,
//    "annualization": {"monthly": 12, ...},
//    "segment_revenue": {"Medical": "13.2B"}}
// Throws SchemaError on unknown keys or bad values, InvalidArgument when the
// result fails validate().
MarketConfig parse_market_config(std::string_view json_text);

// "$1,234.50" is rejected; "13.2B", "46.11e9", "$950M", "120k" are exact
// decimal amounts with an optional K/M/B/T suffix. Amounts finer than a
// cent are rejected rather than rounded. Throws DataError.
Money parse_amount(std::string_view text);
// Dollars with two decimals, no separators.
std::string format_amount(Money amount);

struct AppShare {
  std::string record;
  double multiplier = 0.0;
  double weight = 0.0;  // saves x price x multiplier
  double share = 0.0;
};

// Input order. Throws DataError when no record has positive weight.
std::vector<AppShare> app_market_shares(const std::vector<AppRecord>& records,
                                        const MarketConfig& config);

// Cents apportioned by largest remainder: every value is share x market
// rounded so that the values sum to round(sum(shares) x market) exactly.
// Throws InvalidArgument on a negative market or a negative share.
std::vector<Money> scale_shares(const std::vector<double>& shares, Money market);

// Midpoint / smallest midpoint; the cheapest subclass gets exactly 1.
// Throws InvalidArgument on an empty list, DataError on low > high or a
// non-positive midpoint.
std::vector<double> relative_prices(const std::vector<RobotSubclass>& subclasses);

struct PricedUnits {
  double relative_price = 0.0;
  double units = 0.0;
};

// x = revenue / sum(relative_price x units), in dollars per relative unit.
// Throws DataError when the denominator is not positive.
double adjustment_factor(Money revenue, const std::vector<PricedUnits>& rows);

struct SegmentRow {
  std::string subclass;
  double units = 0.0;  // this segment's portion
  Money price_low;
  Money price_high;
  double midpoint = 0.0;  // dollars
  double relative = 0.0;
  double adjusted = 0.0;  // dollars, x * relative
  Money revenue;
};

struct SegmentComputation {
  std::string segment;
  Money revenue;
  double x = 0.0;
  std::vector<SegmentRow> rows;
  // Revenue that could not be spread (no subclasses or no units).
  Money unallocated;
};

// Prices one segment. Revenue is apportioned in cents proportionally to
// relative x units, so rows sum to `revenue` exactly. A segment without
// units keeps its revenue unallocated.
SegmentComputation price_segment(std::string segment, Money revenue,
                                 const std::vector<RobotSubclass>& subclasses,
                                 const std::vector<double>& units);

struct RobotRevenue {
  std::vector<SegmentComputation> segments;          // in share-table order
  std::map<std::string, Money> subclass_revenue;     // by subclass name
  std::map<std::string, Money> node_revenue;         // by ontology node title
  Money unallocated;
  std::vector<std::string> notes;
};

// Replaces each subclass's segment list with the mapping table's. Throws
// DataError for a mapping row naming an unknown subclass or a subclass left
// without segments.
std::vector<RobotSubclass> apply_segment_mapping(std::vector<RobotSubclass> subclasses,
                                                 const std::vector<SegmentMapping>& mapping);

// Segment revenue is config.segment_revenue[segment] if present, else
// share x robotics market. A subclass in n segments contributes units / n
// to each. Throws DataError for a subclass without an ontology node or one
// naming a segment that has no share.
RobotRevenue robot_revenue_pipeline(const MarketConfig& config,
                                    const std::vector<SegmentShare>& shares,
                                    const std::vector<RobotSubclass>& subclasses);

struct CombinedRow {
  NodeIndex node;
  Money software;
  Money robot;
  Money total;
  double software_fraction = 0.0;  // 0 when total is 0
};

// Union of both maps (keys are node ids or titles), in node-id order. Throws
// UnknownNodeError for a key absent from the snapshot.
std::vector<CombinedRow> combine(const ActivitySnapshot& snapshot,
                                 const std::map<std::string, Money>& software,
                                 const std::map<std::string, Money>& robot);

struct GlobalSplit {
  double software_fraction = 0.0;
  double robot_fraction = 0.0;
};
GlobalSplit global_split(const MarketConfig& config);

// Reports. Each starts with "# " + config.describe().
std::string app_report_csv(const std::vector<AppRecord>& records,
                           const std::vector<AppShare>& shares,
                           const std::vector<Money>& values, const MarketConfig& config);
// Columns segment,subclass,units,price_low,price_high,midpoint,relative,
// adjusted,revenue; then one "total" row per segment.
std::string segment_report_csv(const RobotRevenue& revenue, const MarketConfig& config);
// Columns node_id,title,software,robot,total,software_percent.
std::string combined_report_csv(const ActivitySnapshot& snapshot,
                                const std::vector<CombinedRow>& rows,
                                const MarketConfig& config);

// CSV with header node,value: node id or title, amount per parse_amount.
std::map<std::string, Money> load_node_values(std::string_view bytes);

}  // namespace workgraph

#endif  // WORKGRAPH_MARKET_H_
