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

#ifndef WORKGRAPH_CSV_H_
#define WORKGRAPH_CSV_H_

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace workgraph {

struct CsvRow {
  // 1-based physical line where the row starts.
  std::size_t line = 0;
  std::vector<std::string> cells;
};

// RFC 4180 reader: comma separated, double-quote quoting with "" escapes,
// CRLF or LF line endings, quoted cells may span lines. Surrounding spaces of
// unquoted cells are trimmed. Blank lines are skipped. Throws DataError on an
// unterminated quote.
std::vector<CsvRow> parse_csv(std::string_view text);

// Quotes a cell only when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view cell);

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header);

  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

 private:
  void append(const std::vector<std::string_view>& cells);

  std::size_t width_;
  std::string out_;
};

}  // namespace workgraph

#endif  // WORKGRAPH_CSV_H_
