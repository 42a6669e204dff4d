// Copyright 2026 The w2s-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Result tables: CSV with a '#' metadata header, optional JSON mirror.

#ifndef W2S_HARNESS_TABLE_HPP_
#define W2S_HARNESS_TABLE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace w2s::harness {

inline constexpr const char* kSchemaVersion = "w2s-lab/1";

// monostate is a null cell (empty in CSV, null in JSON).
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  // Throws std::logic_error if the row width differs from the header.
  void AddRow(std::vector<Cell> row);
  void AddMeta(std::string key, std::string value);
};

// Shortest decimal that round-trips.
std::string FormatDouble(double x);
std::string FormatCell(const Cell& c);

void WriteCsv(const Table& table, std::ostream& out);
std::string ToJson(const Table& table);

// Writes `path` (and `path` with a .json extension when json_mirror). Parent
// directories are created. Throws std::runtime_error if a target exists and
// force is false.
void WriteOutputs(const Table& table, const std::string& path, bool force, bool json_mirror);

// Shared by verify, which emits JSON only.
void WriteTextFile(const std::string& path, const std::string& text, bool force);

}  // namespace w2s::harness

#endif  // W2S_HARNESS_TABLE_HPP_
