// Copyright 2026 The bistopriv Authors
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

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bistopriv/dataset.hpp"
#include "bistopriv/detail/text.hpp"
#include "bistopriv/errors.hpp"

namespace bistopriv {

// Declared shape of one dataset column. Explicit levels pin the category
// set (and its order); without them levels are inferred in first-appearance
// order.
struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;
  std::optional<std::vector<std::string>> levels;
};

struct SchemaSpec {
  std::vector<ColumnSpec> columns;

  static SchemaSpec validate(std::vector<ColumnSpec> columns) {
    std::unordered_map<std::string, int> names;
    for (const auto& col : columns) {
      if (++names[col.name] > 1) {
        throw Error(errc::invalid_schema,
                    "duplicate column '" + col.name + "' in schema");
      }
      if (col.levels) {
        if (col.kind != ColumnKind::categorical) {
          throw Error(errc::invalid_schema,
                      "numerical column '" + col.name + "' cannot fix levels");
        }
        std::unordered_map<std::string, int> lvl;
        for (const auto& l : *col.levels) {
          if (++lvl[l] > 1) {
            throw Error(errc::invalid_schema,
                        "duplicate level '" + l + "' in column '" + col.name +
                            "'");
          }
        }
        if (col.levels->empty()) {
          throw Error(errc::invalid_schema,
                      "empty level list for column '" + col.name + "'");
        }
      }
    }
    return SchemaSpec{std::move(columns)};
  }
};

// Schema file: one column per line, `name: numerical` or
// `name: categorical` or `name: categorical = lvl1, lvl2, ...`.
// Blank lines and lines starting with '#' are skipped.
inline SchemaSpec load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_failure, "cannot open " + path.string());
  }
  std::vector<ColumnSpec> columns;
  std::string line;
  while (std::getline(in, line)) {
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto colon = trimmed.find(':');
    if (colon == std::string_view::npos) {
      throw Error(errc::invalid_schema,
                  path.string() + ": expected 'name: kind', got '" +
                      std::string(trimmed) + "'");
    }
    ColumnSpec spec;
    spec.name = std::string(detail::trim(trimmed.substr(0, colon)));
    auto rhs = detail::trim(trimmed.substr(colon + 1));
    std::string_view kind = rhs;
    std::string_view level_list;
    if (const auto eq = rhs.find('='); eq != std::string_view::npos) {
      kind = detail::trim(rhs.substr(0, eq));
      level_list = detail::trim(rhs.substr(eq + 1));
    }
    if (kind == "numerical") {
      spec.kind = ColumnKind::numerical;
      if (!level_list.empty()) {
        throw Error(errc::invalid_schema,
                    "numerical column '" + spec.name + "' cannot fix levels");
      }
    } else if (kind == "categorical") {
      spec.kind = ColumnKind::categorical;
      if (!level_list.empty()) {
        std::vector<std::string> levels;
        std::size_t start = 0;
        while (start <= level_list.size()) {
          auto comma = level_list.find(',', start);
          if (comma == std::string_view::npos) comma = level_list.size();
          levels.emplace_back(
              detail::trim(level_list.substr(start, comma - start)));
          start = comma + 1;
        }
        spec.levels = std::move(levels);
      }
    } else {
      throw Error(errc::invalid_schema,
                  "unknown kind '" + std::string(kind) + "' for column '" +
                      spec.name + "'");
    }
    columns.push_back(std::move(spec));
  }
  return SchemaSpec::validate(std::move(columns));
}

// Loads the schema's columns from a headered CSV file. Cells must be
// present and parseable; there are no missingness semantics.
inline Dataset load_dataset(const std::filesystem::path& path,
                            const SchemaSpec& schema) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_failure, "cannot open " + path.string());
  }
  const auto rows = detail::parse_csv(in);
  if (rows.empty()) {
    throw Error(errc::io_failure, path.string() + " has no header row");
  }
  const auto& header = rows[0];
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t j = 0; j < header.size(); ++j) position[header[j]] = j;

  std::vector<AttributeColumn> columns;
  for (const auto& spec : schema.columns) {
    const auto pos_it = position.find(spec.name);
    if (pos_it == position.end()) {
      throw Error(errc::missing_column,
                  path.string() + " lacks column '" + spec.name + "'");
    }
    const std::size_t j = pos_it->second;
    const std::size_t n = rows.size() - 1;

    if (spec.kind == ColumnKind::numerical) {
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i + 1];
        if (j >= row.size()) {
          throw Error(errc::unparseable_cell,
                      path.string() + ": record " + std::to_string(i + 1) +
                          " has only " + std::to_string(row.size()) +
                          " fields");
        }
        if (!detail::parse_double(row[j], values[i])) {
          throw Error(errc::unparseable_cell,
                      path.string() + ": record " + std::to_string(i + 1) +
                          " column '" + spec.name + "': '" + row[j] +
                          "' is not a number");
        }
      }
      columns.push_back(
          AttributeColumn::numerical(spec.name, std::move(values)));
    } else {
      std::vector<std::string> levels;
      std::unordered_map<std::string, std::int32_t> index;
      const bool fixed = spec.levels.has_value();
      if (fixed) {
        levels = *spec.levels;
        for (std::size_t l = 0; l < levels.size(); ++l) {
          index[levels[l]] = static_cast<std::int32_t>(l);
        }
      }
      std::vector<std::int32_t> codes(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i + 1];
        if (j >= row.size()) {
          throw Error(errc::unparseable_cell,
                      path.string() + ": record " + std::to_string(i + 1) +
                          " has only " + std::to_string(row.size()) +
                          " fields");
        }
        const auto it = index.find(row[j]);
        if (it != index.end()) {
          codes[i] = it->second;
        } else if (fixed) {
          throw Error(errc::unknown_level,
                      path.string() + ": record " + std::to_string(i + 1) +
                          " column '" + spec.name + "': level '" + row[j] +
                          "' not in schema");
        } else {
          const auto code = static_cast<std::int32_t>(levels.size());
          levels.push_back(row[j]);
          index[row[j]] = code;
          codes[i] = code;
        }
      }
      if (levels.empty()) {
        // 0-record file with inferred levels: keep the column well formed
        levels.push_back("(none)");
      }
      columns.push_back(AttributeColumn::categorical(
          spec.name, std::move(levels), std::move(codes)));
    }
  }
  return Dataset(std::move(columns));
}

// Writes a headered CSV. Categorical cells round-trip exactly; numerical
// cells use the shortest representation that reparses to the same double.
inline void save_dataset(const Dataset& ds,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(errc::io_failure, "cannot write " + path.string());
  }
  const auto& cols = ds.columns();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (k) out << ',';
    out << detail::csv_field(cols[k].name());
  }
  out << '\n';
  for (std::size_t i = 0; i < ds.record_count(); ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (k) out << ',';
      if (cols[k].kind() == ColumnKind::categorical) {
        const auto& data = cols[k].as_categorical();
        out << detail::csv_field(data.levels[data.codes[i]]);
      } else {
        out << detail::format_shortest(cols[k].as_numerical().values[i]);
      }
    }
    out << '\n';
  }
  if (!out) {
    throw Error(errc::io_failure, "write failed for " + path.string());
  }
}

}  // namespace bistopriv
