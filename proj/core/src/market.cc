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

#include "workgraph/market.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "json.hpp"
#include "workgraph/csv.h"
#include "workgraph/error.h"

namespace workgraph {

namespace {

__extension__ using i128 = __int128;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Integer cents proportional to `weights`, summing exactly to `total`.
// Largest remainder; ties go to the earlier entry.
std::vector<std::int64_t> apportion(std::int64_t total, const std::vector<double>& weights) {
  std::vector<std::int64_t> out(weights.size(), 0);
  const long double sum =
      std::accumulate(weights.begin(), weights.end(), static_cast<long double>(0));
  if (weights.empty() || !(sum > 0)) return out;
  std::vector<std::pair<long double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long double exact = static_cast<long double>(total) * weights[i] / sum;
    const auto floor = static_cast<std::int64_t>(std::floor(exact));
    out[i] = floor;
    assigned += floor;
    remainders.emplace_back(exact - floor, i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total && r < remainders.size(); ++r, ++assigned) {
    ++out[remainders[r].second];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Amounts and config

Money parse_amount(std::string_view text) {
  const auto original = text;
  text = trim(text);
  const auto fail = [&](std::string_view why) {
    return DataError(fmt::format("amount '{}': {}", original, why));
  };
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (!text.empty() && text.front() == '$') text.remove_prefix(1);
  int exponent = 0;
  if (!text.empty()) {
    switch (std::toupper(static_cast<unsigned char>(text.back()))) {
      case 'K': exponent = 3; break;
      case 'M': exponent = 6; break;
      case 'B': exponent = 9; break;
      case 'T': exponent = 12; break;
      default: break;
    }
    if (exponent != 0) text.remove_suffix(1);
  }
  i128 mantissa = 0;
  int fraction_digits = 0;
  bool seen_dot = false, seen_digit = false;
  std::size_t i = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
      if (mantissa > (static_cast<i128>(1) << 100)) throw fail("too many digits");
      mantissa = mantissa * 10 + (c - '0');
      fraction_digits += seen_dot;
    } else {
      break;
    }
  }
  if (!seen_digit) throw fail("no digits");
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail("unexpected character");
    const auto digits = text.substr(i + 1);
    int e = 0;
    bool neg_e = false;
    std::size_t j = 0;
    if (j < digits.size() && (digits[j] == '+' || digits[j] == '-')) neg_e = digits[j++] == '-';
    if (j == digits.size()) throw fail("empty exponent");
    for (; j < digits.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(digits[j])) || e > 100) {
        throw fail("bad exponent");
      }
      e = e * 10 + (digits[j] - '0');
    }
    exponent += neg_e ? -e : e;
  }
  int shift = exponent + 2 - fraction_digits;  // power of ten giving cents
  i128 cents = mantissa;
  if (shift >= 0) {
    for (; shift > 0; --shift) {
      cents *= 10;
      if (cents > std::numeric_limits<std::int64_t>::max()) throw fail("too large");
    }
  } else {
    i128 divisor = 1;
    for (; shift < 0 && divisor < (static_cast<i128>(1) << 100); ++shift) divisor *= 10;
    if (cents % divisor != 0) throw fail("finer than a cent");
    cents /= divisor;
  }
  if (cents > std::numeric_limits<std::int64_t>::max()) throw fail("too large");
  const auto value = static_cast<std::int64_t>(cents);
  return Money::from_cents(negative ? -value : value);
}

std::string format_amount(Money amount) {
  const auto cents = amount.cents();
  const auto abs = cents < 0 ? -static_cast<std::uint64_t>(cents)
                             : static_cast<std::uint64_t>(cents);
  return fmt::format("{}{}.{:02}", cents < 0 ? "-" : "", abs / 100, abs % 100);
}

double MarketConfig::multiplier(Billing billing) const {
  const auto it = annualization.find(billing);
  return it == annualization.end() ? 1.0 : it->second;
}

void MarketConfig::validate() const {
  if (total_ai_market.cents() < 0 || robotics_market.cents() < 0) {
    throw InvalidArgument("market sizes must be non-negative");
  }
  if (robotics_market > total_ai_market) {
    throw InvalidArgument("robotics market exceeds the total AI market");
  }
  for (const auto& [billing, m] : annualization) {
    if (!std::isfinite(m) || m < 0.0) {
      throw InvalidArgument(
          fmt::format("annualization for {} must be >= 0", to_string(billing)));
    }
  }
  for (const auto& [segment, revenue] : segment_revenue) {
    if (revenue.cents() < 0) {
      throw InvalidArgument(fmt::format("segment revenue for {} is negative", segment));
    }
  }
}

std::string MarketConfig::describe() const {
  std::string text = fmt::format("total_ai_market={} robotics_market={} software_market={}",
                                 format_amount(total_ai_market),
                                 format_amount(robotics_market),
                                 format_amount(software_market()));
  text += " annualization=";
  bool first = true;
  for (const auto& [billing, m] : annualization) {
    text += fmt::format("{}{}:{}", first ? "" : ";", to_string(billing), m);
    first = false;
  }
  for (const auto& [segment, revenue] : segment_revenue) {
    text += fmt::format(" segment_revenue[{}]={}", segment, format_amount(revenue));
  }
  return text;
}

MarketConfig parse_market_config(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(fmt::format("market config is not JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw SchemaError("market config must be a JSON object");
  const auto amount = [](const json& v, std::string_view key) {
    if (v.is_string()) return parse_amount(v.get<std::string>());
    if (v.is_number()) return parse_amount(fmt::format("{}", v.get<double>()));
    throw SchemaError(fmt::format("market config '{}' must be a number or string", key));
  };

  MarketConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "total_ai_market") {
      config.total_ai_market = amount(value, key);
    } else if (key == "robotics_market") {
      config.robotics_market = amount(value, key);
    } else if (key == "annualization") {
      if (!value.is_object()) throw SchemaError("annualization must be an object");
      for (const auto& [name, m] : value.items()) {
        const auto billing = parse_billing(name);
        if (billing == Billing::kUnknown && name != "unknown") {
          throw SchemaError(fmt::format("unknown billing '{}' in annualization", name));
        }
        if (!m.is_number()) {
          throw SchemaError(fmt::format("annualization for '{}' must be a number", name));
        }
        config.annualization[billing] = m.get<double>();
      }
    } else if (key == "segment_revenue") {
      if (!value.is_object()) throw SchemaError("segment_revenue must be an object");
      for (const auto& [segment, v] : value.items()) {
        config.segment_revenue[segment] = amount(v, segment);
      }
    } else {
      throw SchemaError(fmt::format("unknown market config key '{}'", key));
    }
  }
  config.validate();
  return config;
}

// ---------------------------------------------------------------------------
// Software

std::vector<AppShare> app_market_shares(const std::vector<AppRecord>& records,
                                        const MarketConfig& config) {
  std::vector<AppShare> out;
  out.reserve(records.size());
  double total = 0.0;
  for (const auto& r : records) {
    AppShare share{r.name, config.multiplier(r.billing), 0.0, 0.0};
    share.weight = static_cast<double>(r.saves) * r.price.dollars() * share.multiplier;
    if (!std::isfinite(share.weight) || share.weight < 0.0) {
      throw DataError(fmt::format("record '{}' has an invalid market weight", r.name));
    }
    total += share.weight;
    out.push_back(std::move(share));
  }
  if (!(total > 0.0)) throw DataError("no record has a positive market weight");
  for (auto& share : out) share.share = share.weight / total;
  return out;
}

std::vector<Money> scale_shares(const std::vector<double>& shares, Money market) {
  if (market.cents() < 0) throw InvalidArgument("market must be non-negative");
  long double sum = 0;
  for (double s : shares) {
    if (!std::isfinite(s) || s < 0.0) throw InvalidArgument("shares must be >= 0");
    sum += s;
  }
  const auto target = static_cast<std::int64_t>(
      std::llround(sum * static_cast<long double>(market.cents())));
  std::vector<Money> out;
  out.reserve(shares.size());
  for (auto cents : apportion(target, shares)) out.push_back(Money::from_cents(cents));
  return out;
}

// ---------------------------------------------------------------------------
// Robots

std::vector<double> relative_prices(const std::vector<RobotSubclass>& subclasses) {
  if (subclasses.empty()) throw InvalidArgument("segment has no subclasses");
  std::vector<double> mids;
  mids.reserve(subclasses.size());
  for (const auto& s : subclasses) {
    if (s.price_low > s.price_high) {
      throw DataError(fmt::format("subclass '{}' has price_low above price_high", s.name));
    }
    const double mid =
        (static_cast<double>(s.price_low.cents()) + static_cast<double>(s.price_high.cents())) /
        2.0;
    if (!(mid > 0.0)) {
      throw DataError(fmt::format("subclass '{}' has a non-positive midpoint", s.name));
    }
    mids.push_back(mid);
  }
  const double lowest = *std::min_element(mids.begin(), mids.end());
  for (double& m : mids) m /= lowest;
  return mids;
}

double adjustment_factor(Money revenue, const std::vector<PricedUnits>& rows) {
  double denominator = 0.0;
  for (const auto& r : rows) denominator += r.relative_price * r.units;
  if (!(denominator > 0.0) || !std::isfinite(denominator)) {
    throw DataError("segment has no priced units");
  }
  return revenue.dollars() / denominator;
}

SegmentComputation price_segment(std::string segment, Money revenue,
                                 const std::vector<RobotSubclass>& subclasses,
                                 const std::vector<double>& units) {
  if (units.size() != subclasses.size()) {
    throw InvalidArgument("one unit count per subclass required");
  }
  SegmentComputation out;
  out.segment = std::move(segment);
  out.revenue = revenue;
  if (subclasses.empty()) {
    out.unallocated = revenue;
    return out;
  }
  const auto relative = relative_prices(subclasses);
  std::vector<PricedUnits> priced;
  std::vector<double> weights;
  for (std::size_t i = 0; i < subclasses.size(); ++i) {
    priced.push_back({relative[i], units[i]});
    weights.push_back(relative[i] * units[i]);
  }
  double denominator = 0.0;
  for (double w : weights) denominator += w;
  const bool spreadable = denominator > 0.0;
  if (spreadable) out.x = adjustment_factor(revenue, priced);
  const auto cents = spreadable ? apportion(revenue.cents(), weights)
                                : std::vector<std::int64_t>(subclasses.size(), 0);
  if (!spreadable) out.unallocated = revenue;
  for (std::size_t i = 0; i < subclasses.size(); ++i) {
    const auto& s = subclasses[i];
    SegmentRow row;
    row.subclass = s.name;
    row.units = units[i];
    row.price_low = s.price_low;
    row.price_high = s.price_high;
    row.midpoint = (s.price_low.dollars() + s.price_high.dollars()) / 2.0;
    row.relative = relative[i];
    row.adjusted = out.x * relative[i];
    row.revenue = Money::from_cents(cents[i]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<RobotSubclass> apply_segment_mapping(std::vector<RobotSubclass> subclasses,
                                                 const std::vector<SegmentMapping>& mapping) {
  std::map<std::string, std::vector<std::string>> segments;
  for (const auto& m : mapping) {
    const bool known = std::any_of(subclasses.begin(), subclasses.end(),
                                   [&](const RobotSubclass& s) { return s.name == m.subclass; });
    if (!known) {
      throw DataError(fmt::format("segment mapping names unknown subclass '{}'", m.subclass));
    }
    auto& list = segments[m.subclass];
    if (std::find(list.begin(), list.end(), m.segment) == list.end()) {
      list.push_back(m.segment);
    }
  }
  for (auto& s : subclasses) {
    const auto it = segments.find(s.name);
    if (it == segments.end()) {
      throw DataError(fmt::format("subclass '{}' is not mapped to any segment", s.name));
    }
    s.segments = it->second;
  }
  return subclasses;
}

RobotRevenue robot_revenue_pipeline(const MarketConfig& config,
                                    const std::vector<SegmentShare>& shares,
                                    const std::vector<RobotSubclass>& subclasses) {
  config.validate();
  std::set<std::string_view> known;
  for (const auto& share : shares) {
    if (!known.insert(share.segment).second) {
      throw DataError(fmt::format("segment '{}' is listed twice", share.segment));
    }
  }
  for (const auto& s : subclasses) {
    if (trim(s.ontology_node).empty()) {
      throw DataError(fmt::format("subclass '{}' is not mapped to an ontology node", s.name));
    }
    if (s.segments.empty()) {
      throw DataError(fmt::format("subclass '{}' has no segment", s.name));
    }
    for (const auto& seg : s.segments) {
      if (!known.count(seg)) {
        throw DataError(
            fmt::format("subclass '{}' names segment '{}' which has no share", s.name, seg));
      }
    }
  }

  RobotRevenue out;
  for (const auto& share : shares) {
    Money revenue;
    if (const auto it = config.segment_revenue.find(share.segment);
        it != config.segment_revenue.end()) {
      revenue = it->second;
    } else {
      revenue = Money::from_cents(static_cast<std::int64_t>(std::llround(
          static_cast<long double>(share.share) * config.robotics_market.cents())));
    }
    std::vector<RobotSubclass> members;
    std::vector<double> units;
    for (const auto& s : subclasses) {
      if (std::find(s.segments.begin(), s.segments.end(), share.segment) == s.segments.end()) {
        continue;
      }
      members.push_back(s);
      units.push_back(static_cast<double>(s.units) / static_cast<double>(s.segments.size()));
    }
    auto computation = price_segment(share.segment, revenue, members, units);
    if (computation.unallocated.cents() > 0) {
      out.notes.push_back(fmt::format("segment '{}': {} held unallocated ({})",
                                      share.segment, format_amount(computation.unallocated),
                                      members.empty() ? "no subclasses" : "no units"));
      out.unallocated += computation.unallocated;
    }
    for (std::size_t i = 0; i < computation.rows.size(); ++i) {
      out.subclass_revenue[members[i].name] += computation.rows[i].revenue;
      out.node_revenue[members[i].ontology_node] += computation.rows[i].revenue;
    }
    out.segments.push_back(std::move(computation));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Combined view

std::vector<CombinedRow> combine(const ActivitySnapshot& snapshot,
                                 const std::map<std::string, Money>& software,
                                 const std::map<std::string, Money>& robot) {
  std::map<NodeIndex, CombinedRow> rows;
  const auto resolve = [&](const std::string& key) {
    if (auto node = snapshot.find(key)) return *node;
    if (auto node = snapshot.find_by_title(key)) return *node;
    throw UnknownNodeError(key);
  };
  for (const auto& [key, value] : software) {
    auto& row = rows[resolve(key)];
    row.software += value;
  }
  for (const auto& [key, value] : robot) {
    auto& row = rows[resolve(key)];
    row.robot += value;
  }
  std::vector<CombinedRow> out;
  out.reserve(rows.size());
  for (auto& [node, row] : rows) {
    row.node = node;
    row.total = row.software + row.robot;
    row.software_fraction =
        row.total.cents() > 0 ? static_cast<double>(row.software.cents()) /
                                    static_cast<double>(row.total.cents())
                              : 0.0;
    out.push_back(row);
  }
  return out;
}

GlobalSplit global_split(const MarketConfig& config) {
  config.validate();
  if (config.total_ai_market.cents() == 0) return {};
  const double total = static_cast<double>(config.total_ai_market.cents());
  return {static_cast<double>(config.software_market().cents()) / total,
          static_cast<double>(config.robotics_market.cents()) / total};
}

// ---------------------------------------------------------------------------
// Reports

std::string app_report_csv(const std::vector<AppRecord>& records,
                           const std::vector<AppShare>& shares,
                           const std::vector<Money>& values, const MarketConfig& config) {
  if (records.size() != shares.size() || shares.size() != values.size()) {
    throw InvalidArgument("records, shares and values must align");
  }
  CsvWriter out({"record", "saves", "price", "billing", "multiplier", "weight", "share",
                 "value"});
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out.row({r.name, std::to_string(r.saves), format_amount(r.price),
             r.billing_raw.empty() ? std::string(to_string(r.billing)) : r.billing_raw,
             fmt::format("{}", shares[i].multiplier), fmt::format("{}", shares[i].weight),
             fmt::format("{}", shares[i].share), format_amount(values[i])});
  }
  return "# " + config.describe() + "\n" + out.str();
}

std::string segment_report_csv(const RobotRevenue& revenue, const MarketConfig& config) {
  CsvWriter out({"segment", "subclass", "units", "price_low", "price_high", "midpoint",
                 "relative", "adjusted", "revenue"});
  for (const auto& seg : revenue.segments) {
    for (const auto& row : seg.rows) {
      out.row({seg.segment, row.subclass, fmt::format("{}", row.units),
               format_amount(row.price_low), format_amount(row.price_high),
               fmt::format("{:.2f}", row.midpoint), fmt::format("{:.4f}", row.relative),
               fmt::format("{:.2f}", row.adjusted), format_amount(row.revenue)});
    }
    out.row({seg.segment, "total", "", "", "", "", "", fmt::format("x={:.4f}", seg.x),
             format_amount(seg.revenue)});
  }
  return "# " + config.describe() + "\n" + out.str();
}

std::string combined_report_csv(const ActivitySnapshot& snapshot,
                                const std::vector<CombinedRow>& rows,
                                const MarketConfig& config) {
  CsvWriter out({"node_id", "title", "software", "robot", "total", "software_percent"});
  for (const auto& row : rows) {
    const auto& node = snapshot.node(row.node);
    out.row({node.id, node.title, format_amount(row.software), format_amount(row.robot),
             format_amount(row.total), fmt::format("{:.2f}", 100.0 * row.software_fraction)});
  }
  const auto split = global_split(config);
  return "# " + config.describe() +
         fmt::format(" global_split=software:{:.0f}%;robot:{:.0f}%\n",
                     100.0 * split.software_fraction, 100.0 * split.robot_fraction) +
         out.str();
}

std::map<std::string, Money> load_node_values(std::string_view bytes) {
  // Leading '#' report lines are skipped.
  while (!bytes.empty() && bytes.front() == '#') {
    const auto nl = bytes.find('\n');
    bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);
  }
  const auto rows = parse_csv(bytes);
  if (rows.empty()) throw SchemaError("node value file is empty");
  const auto& header = rows.front().cells;
  std::size_t key_col = 0, value_col = 1;
  if (header == std::vector<std::string>{"node", "value"}) {
  } else if (header == std::vector<std::string>{"node_id", "title", "direct", "aggregated",
                                                "percent"}) {
    value_col = 3;
  } else {
    throw SchemaError("node value files need the header node,value (or a tally CSV)");
  }
  std::map<std::string, Money> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.size()) {
      throw DataError(fmt::format("line {}: expected {} cells", row.line, header.size()));
    }
    out[row.cells[key_col]] += parse_amount(row.cells[value_col]);
  }
  return out;
}

}  // namespace workgraph
