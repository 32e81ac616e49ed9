// Copyright 2026 The Netshuffle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Versioned CSV output. Metadata precedes the header as "# key: value"
// lines; every row ends with the schema and library versions so rows stay
// self-describing after concatenation.

#ifndef NETSHUFFLE_CSV_H_
#define NETSHUFFLE_CSV_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"

namespace netshuffle {

inline constexpr int kCsvSchemaVersion = 1;

class CsvTable {
 public:
  CsvTable(std::string schema, std::vector<std::string> columns);

  const std::string& schema() const { return schema_; }
  // Data columns, without the two trailing version columns.
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void AddMetadata(std::string key, std::string value);
  // InvalidArgument when the cell count differs from the column count.
  absl::Status AddRow(std::vector<std::string> cells);
  // Index of a data column, or -1.
  int ColumnIndex(const std::string& name) const;

  void Write(std::ostream& out) const;
  std::string ToString() const;
  absl::Status WriteFile(const std::filesystem::path& path) const;

 private:
  std::string schema_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::vector<std::string>> rows_;
};

// Shortest representation that round-trips through strtod.
std::string FormatDouble(double value);

}  // namespace netshuffle

#endif  // NETSHUFFLE_CSV_H_
