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

#include "netshuffle/csv.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "netshuffle/version.h"

namespace netshuffle {
namespace {

// Quotes cells that would break the row structure.
std::string Escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

CsvTable::CsvTable(std::string schema, std::vector<std::string> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {}

void CsvTable::AddMetadata(std::string key, std::string value) {
  metadata_.emplace_back(std::move(key), std::move(value));
}

absl::Status CsvTable::AddRow(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(schema_, ": row has ", cells.size(), " cells, expected ",
                     columns_.size()));
  }
  rows_.push_back(std::move(cells));
  return absl::OkStatus();
}

int CsvTable::ColumnIndex(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void CsvTable::Write(std::ostream& out) const {
  out << "# schema: " << schema_ << "\n";
  out << "# schema_version: " << kCsvSchemaVersion << "\n";
  out << "# netshuffle_version: " << kVersion << "\n";
  for (const auto& [key, value] : metadata_) {
    out << "# " << key << ": " << value << "\n";
  }
  std::vector<std::string> header = columns_;
  header.push_back("schema_version");
  header.push_back("netshuffle_version");
  out << absl::StrJoin(header, ",") << "\n";
  const std::string suffix = absl::StrCat(",", kCsvSchemaVersion, ",", kVersion);
  for (const auto& row : rows_) {
    std::vector<std::string> escaped;
    escaped.reserve(row.size());
    for (const auto& cell : row) escaped.push_back(Escape(cell));
    out << absl::StrJoin(escaped, ",") << suffix << "\n";
  }
}

std::string CsvTable::ToString() const {
  std::ostringstream out;
  Write(out);
  return out.str();
}

absl::Status CsvTable::WriteFile(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot open ", path.string(), " for writing"));
  }
  Write(out);
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace netshuffle
