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

#include "workgraph/records.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "workgraph/csv.h"
#include "workgraph/error.h"

namespace workgraph {

std::string_view to_string(Billing billing) {
  switch (billing) {
    case Billing::kOneTime:
      return "one_time";
    case Billing::kMonthly:
      return "monthly";
    case Billing::kYearly:
      return "yearly";
    case Billing::kFreeOnly:
      return "free_only";
    case Billing::kUnknown:
      return "unknown";
  }
  return "unknown";
}

Billing parse_billing(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c == '-' || c == ' ' || c == '_') {
      key += '_';
    } else {
      key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (key == "one_time" || key == "onetime" || key == "lifetime") {
    return Billing::kOneTime;
  }
  if (key == "monthly" || key == "month") return Billing::kMonthly;
  if (key == "yearly" || key == "annual" || key == "annually" || key == "year") {
    return Billing::kYearly;
  }
  if (key == "free_only" || key == "free") return Billing::kFreeOnly;
  return Billing::kUnknown;
}

std::string RowError::to_string() const {
  if (column.empty()) return fmt::format("line {}: {}", line, message);
  return fmt::format("line {}, column '{}': {}", line, column, message);
}

// ---------------------------------------------------------------------------
// Cell parsers

Money parse_price(std::string_view text) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '$') s.remove_prefix(1);
  if (s.empty()) throw DataError("empty price");
  std::int64_t whole = 0;
  std::int64_t fraction = 0;
  const auto dot = s.find('.');
  const std::string_view int_part = s.substr(0, dot);
  if (int_part.empty() ||
      !std::all_of(int_part.begin(), int_part.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw DataError(fmt::format("'{}' is not a plain currency amount", text));
  }
  auto [p, ec] = std::from_chars(int_part.data(), int_part.data() + int_part.size(),
                                 whole);
  if (ec != std::errc{}) throw DataError(fmt::format("'{}' is out of range", text));
  if (dot != std::string_view::npos) {
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || frac.size() > 2 ||
        !std::all_of(frac.begin(), frac.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      throw DataError(fmt::format("'{}' is not a plain currency amount", text));
    }
    std::from_chars(frac.data(), frac.data() + frac.size(), fraction);
    if (frac.size() == 1) fraction *= 10;
  }
  return Money::from_cents(whole * 100 + fraction);
}

std::chrono::year_month_day parse_date(std::string_view text) {
  using namespace std::chrono;
  auto number = [&](std::string_view part) {
    int value = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || p != part.data() + part.size() || part.empty()) {
      throw DataError(fmt::format("'{}' is not a date", text));
    }
    return value;
  };
  const auto first = text.find('-');
  const auto second =
      first == std::string_view::npos ? first : text.find('-', first + 1);
  if (first == std::string_view::npos || second == std::string_view::npos) {
    throw DataError(fmt::format("'{}' is not a date", text));
  }
  const auto a = text.substr(0, first);
  const auto b = text.substr(first + 1, second - first - 1);
  const auto c = text.substr(second + 1);

  year_month_day date{};
  if (a.size() == 4) {  // 2023-06-10
    date = year{number(a)} / month{static_cast<unsigned>(number(b))} /
           day{static_cast<unsigned>(number(c))};
  } else {  // 10-Jun-23
    static constexpr std::array<std::string_view, 12> kMonths = {
        "jan", "feb", "mar", "apr", "may", "jun",
        "jul", "aug", "sep", "oct", "nov", "dec"};
    std::string lower;
    for (char ch : b) {
      lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    const auto it = std::find(kMonths.begin(), kMonths.end(), lower);
    if (it == kMonths.end()) throw DataError(fmt::format("'{}' is not a date", text));
    int y = number(c);
    if (c.size() == 2) y += 2000;
    date = year{y} / month{static_cast<unsigned>(it - kMonths.begin() + 1)} /
           day{static_cast<unsigned>(number(a))};
  }
  if (!date.ok()) throw DataError(fmt::format("'{}' is not a valid date", text));
  return date;
}

std::string format_date(std::chrono::year_month_day date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()),
                     static_cast<unsigned>(date.day()));
}

std::int64_t parse_count(std::string_view text) {
  std::int64_t value = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || p != text.data() + text.size() || text.empty() ||
      value < 0) {
    throw DataError(fmt::format("'{}' is not a non-negative integer", text));
  }
  return value;
}

double parse_share(std::string_view text) {
  std::string_view s = text;
  bool percent = false;
  if (!s.empty() && s.back() == '%') {
    percent = true;
    s.remove_suffix(1);
  }
  double value = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw DataError(fmt::format("'{}' is not a share", text));
  }
  if (percent) value /= 100.0;
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DataError(fmt::format("share '{}' is outside [0, 1]", text));
  }
  return value;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(start, end - start);
    const auto first = item.find_first_not_of(' ');
    if (first != std::string_view::npos) {
      const auto last = item.find_last_not_of(' ');
      out.emplace_back(item.substr(first, last - first + 1));
    }
    start = end + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table loading

namespace {

struct CellError {
  std::string column;
  std::string message;
};

// Column name -> position, checked against the required set.
class Header {
 public:
  Header(const CsvRow& row, std::initializer_list<std::string_view> required,
         std::string_view kind) {
    std::set<std::string_view> wanted(required.begin(), required.end());
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      const auto& name = row.cells[i];
      if (!wanted.count(name)) {
        throw SchemaError(fmt::format("{} table: unknown column '{}'", kind, name));
      }
      if (!positions_.emplace(name, i).second) {
        throw SchemaError(fmt::format("{} table: duplicate column '{}'", kind, name));
      }
    }
    for (auto name : required) {
      if (!positions_.count(std::string(name))) {
        throw SchemaError(fmt::format("{} table: missing column '{}'", kind, name));
      }
    }
    width_ = row.cells.size();
  }

  std::size_t width() const { return width_; }

  const std::string& get(const CsvRow& row, const std::string& column) const {
    return row.cells[positions_.at(column)];
  }

 private:
  std::map<std::string, std::size_t> positions_;
  std::size_t width_ = 0;
};

template <typename Parse>
auto cell(const std::string& column, Parse&& parse) {
  try {
    return parse();
  } catch (const DataError& e) {
    throw CellError{column, e.what()};
  }
}

template <typename Record, typename ParseRow, typename KeyOf>
RecordTable<Record> load_table(std::string_view bytes, std::string_view kind,
                               std::initializer_list<std::string_view> columns,
                               ParseRow&& parse_row, KeyOf&& key_of) {
  RecordTable<Record> table;
  std::vector<CsvRow> rows;
  try {
    rows = parse_csv(bytes);
  } catch (const DataError& e) {
    throw SchemaError(fmt::format("{} table: {}", kind, e.what()));
  }
  if (rows.empty()) {
    throw SchemaError(fmt::format("{} table: missing header row", kind));
  }
  const Header header(rows.front(), columns, kind);
  std::set<std::string> keys;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    ++table.data_rows;
    if (row.cells.size() != header.width()) {
      table.errors.push_back({row.line, "",
                              fmt::format("expected {} cells, found {}",
                                          header.width(), row.cells.size())});
      continue;
    }
    try {
      Record record = parse_row(header, row);
      std::string key = key_of(record);
      if (!keys.insert(key).second) {
        table.errors.push_back({row.line, "", fmt::format("duplicate record '{}'", key)});
        continue;
      }
      table.records.push_back(std::move(record));
    } catch (const CellError& e) {
      table.errors.push_back({row.line, e.column, e.message});
    }
  }
  return table;
}

std::string non_empty(const std::string& text, std::string_view what) {
  if (text.empty()) throw DataError(fmt::format("{} must not be empty", what));
  return text;
}

}  // namespace

RecordTable<AppRecord> load_apps(std::string_view bytes) {
  return load_table<AppRecord>(
      bytes, "apps",
      {"name", "tagline", "description", "price", "billing", "saves",
       "launch_date", "tags"},
      [](const Header& h, const CsvRow& row) {
        AppRecord app;
        app.name = cell("name", [&] { return non_empty(h.get(row, "name"), "name"); });
        app.tagline = h.get(row, "tagline");
        app.description = h.get(row, "description");
        app.billing_raw = h.get(row, "billing");
        app.billing = parse_billing(app.billing_raw);
        app.price = cell("price", [&] {
          const auto& text = h.get(row, "price");
          // Free apps may leave the price blank.
          if (text.empty() && app.billing == Billing::kFreeOnly) return Money{};
          return parse_price(text);
        });
        if (app.billing == Billing::kFreeOnly && app.price != Money{}) {
          throw CellError{"price", "free_only records must have price 0"};
        }
        app.saves = cell("saves", [&] { return parse_count(h.get(row, "saves")); });
        app.launch_date =
            cell("launch_date", [&] { return parse_date(h.get(row, "launch_date")); });
        app.platform_tags = split_list(h.get(row, "tags"));
        return app;
      },
      [](const AppRecord& app) { return app.name; });
}

RecordTable<RobotSubclass> load_robots(std::string_view bytes) {
  return load_table<RobotSubclass>(
      bytes, "robots",
      {"name", "units", "price_low", "price_high", "segments", "ontology_node"},
      [](const Header& h, const CsvRow& row) {
        RobotSubclass robot;
        robot.name =
            cell("name", [&] { return non_empty(h.get(row, "name"), "name"); });
        robot.units = cell("units", [&] { return parse_count(h.get(row, "units")); });
        robot.price_low =
            cell("price_low", [&] { return parse_price(h.get(row, "price_low")); });
        robot.price_high =
            cell("price_high", [&] { return parse_price(h.get(row, "price_high")); });
        if (robot.price_low > robot.price_high) {
          throw CellError{"price_high", "price_high is below price_low"};
        }
        robot.segments = split_list(h.get(row, "segments"));
        if (robot.segments.empty()) throw CellError{"segments", "no segments listed"};
        robot.ontology_node = cell("ontology_node", [&] {
          return non_empty(h.get(row, "ontology_node"), "ontology_node");
        });
        return robot;
      },
      [](const RobotSubclass& robot) { return robot.name; });
}

RecordTable<SegmentShare> load_segments(std::string_view bytes) {
  return load_table<SegmentShare>(
      bytes, "segments", {"segment", "share"},
      [](const Header& h, const CsvRow& row) {
        SegmentShare share;
        share.segment = cell("segment", [&] {
          return non_empty(h.get(row, "segment"), "segment");
        });
        share.share = cell("share", [&] { return parse_share(h.get(row, "share")); });
        return share;
      },
      [](const SegmentShare& share) { return share.segment; });
}

RecordTable<SegmentMapping> load_segment_mapping(std::string_view bytes) {
  return load_table<SegmentMapping>(
      bytes, "segment_mapping", {"segment", "subclass"},
      [](const Header& h, const CsvRow& row) {
        SegmentMapping mapping;
        mapping.segment = cell("segment", [&] {
          return non_empty(h.get(row, "segment"), "segment");
        });
        mapping.subclass = cell("subclass", [&] {
          return non_empty(h.get(row, "subclass"), "subclass");
        });
        return mapping;
      },
      [](const SegmentMapping& m) { return m.segment + '\x1f' + m.subclass; });
}

std::string save_apps(const std::vector<AppRecord>& records) {
  CsvWriter out({"name", "tagline", "description", "price", "billing", "saves",
                 "launch_date", "tags"});
  for (const auto& app : records) {
    out.row({app.name, app.tagline, app.description,
             fmt::format("{}.{:02d}", app.price.cents() / 100, app.price.cents() % 100),
             app.billing_raw.empty() ? std::string(to_string(app.billing))
                                     : app.billing_raw,
             std::to_string(app.saves), format_date(app.launch_date),
             fmt::format("{}", fmt::join(app.platform_tags, ";"))});
  }
  return out.str();
}

}  // namespace workgraph
