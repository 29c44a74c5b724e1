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

#include "workgraph/csv.h"

#include <fmt/format.h>

#include "workgraph/error.h"

namespace workgraph {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<CsvRow> parse_csv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string cell;
  bool quoted = false;      // currently inside quotes
  bool was_quoted = false;  // current cell used quotes
  bool row_has_content = false;
  std::size_t line = 1;
  row.line = 1;

  auto finish_cell = [&] {
    row.cells.push_back(was_quoted ? cell : std::string(trim(cell)));
    cell.clear();
    was_quoted = false;
  };
  auto finish_row = [&] {
    finish_cell();
    const bool blank = !row_has_content && row.cells.size() == 1 &&
                       row.cells.front().empty();
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!trim(cell).empty()) {
          throw DataError(fmt::format("line {}: stray quote inside cell", line));
        }
        cell.clear();
        quoted = true;
        was_quoted = true;
        row_has_content = true;
        break;
      case ',':
        finish_cell();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        finish_row();
        ++line;
        row.line = line;
        break;
      default:
        if (was_quoted) {
          if (c != ' ' && c != '\t') {
            throw DataError(
                fmt::format("line {}: text after closing quote", line));
          }
          break;
        }
        cell += c;
        if (c != ' ' && c != '\t') row_has_content = true;
        break;
    }
  }
  if (quoted) {
    throw DataError(fmt::format("line {}: unterminated quoted cell", row.line));
  }
  if (row_has_content || !cell.empty() || !row.cells.empty()) finish_row();
  return rows;
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(cell);
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header)
    : width_(header.size()) {
  append(std::vector<std::string_view>(header));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) {
    throw InvalidArgument(fmt::format("csv row has {} cells, header has {}",
                                      cells.size(), width_));
  }
  append(std::vector<std::string_view>(cells.begin(), cells.end()));
}

void CsvWriter::append(const std::vector<std::string_view>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += csv_escape(cells[i]);
  }
  out_ += '\n';
}

}  // namespace workgraph
