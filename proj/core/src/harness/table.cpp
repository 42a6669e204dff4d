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

#include "w2s/harness/table.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace w2s::harness {
namespace fs = std::filesystem;

void Table::AddRow(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row has " + std::to_string(row.size()) + " cells, header has " +
                           std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void Table::AddMeta(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
}

std::string FormatDouble(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string FormatCell(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return FormatDouble(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
  };
  return std::visit(V{}, c);
}

void WriteCsv(const Table& table, std::ostream& out) {
  out << "# schema: " << kSchemaVersion << '\n';
  for (const auto& [k, v] : table.metadata) {
    std::string flat = v;
    for (char& ch : flat) {
      if (ch == '\n') ch = ' ';
    }
    out << "# " << k << ": " << flat << '\n';
  }
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    out << (j ? "," : "") << table.columns[j];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << FormatCell(row[j]);
    out << '\n';
  }
}

std::string ToJson(const Table& table) {
  nlohmann::ordered_json doc;
  doc["schema"] = kSchemaVersion;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.metadata) meta[k] = v;
  doc["metadata"] = meta;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const Cell& c : row) {
      if (std::holds_alternative<std::monostate>(c)) {
        r.push_back(nullptr);
      } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
        r.push_back(*i);
      } else if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) {
          r.push_back(*d);
        } else {
          r.push_back(nullptr);
        }
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void WriteTextFile(const std::string& path, const std::string& text, bool force) {
  const fs::path target(path);
  if (fs::exists(target) && !force) {
    throw std::runtime_error("refusing to overwrite existing file '" + path +
                             "' (pass --force)");
  }
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void WriteOutputs(const Table& table, const std::string& path, bool force, bool json_mirror) {
  const fs::path csv(path);
  fs::path json = csv;
  json.replace_extension(".json");
  // Check both before writing either, so a refusal leaves nothing behind.
  if (!force) {
    if (fs::exists(csv)) {
      throw std::runtime_error("refusing to overwrite existing file '" + csv.string() +
                               "' (pass --force)");
    }
    if (json_mirror && fs::exists(json)) {
      throw std::runtime_error("refusing to overwrite existing file '" + json.string() +
                               "' (pass --force)");
    }
  }
  std::ostringstream buf;
  WriteCsv(table, buf);
  WriteTextFile(csv.string(), buf.str(), true);
  if (json_mirror) WriteTextFile(json.string(), ToJson(table), true);
}

}  // namespace w2s::harness
