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

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "bistopriv/errors.hpp"

namespace bistopriv {

enum class ColumnKind { categorical, numerical };

struct CategoricalData {
  std::vector<std::string> levels;   // r distinct labels, fixed order
  std::vector<std::int32_t> codes;   // one level index per record
};

struct NumericalData {
  std::vector<double> values;
};

// A typed column: categorical (level-coded) or numerical.
class AttributeColumn {
 public:
  static AttributeColumn categorical(std::string name,
                                     std::vector<std::string> levels,
                                     std::vector<std::int32_t> codes) {
    if (levels.empty()) {
      throw Error(errc::invalid_argument,
                  "categorical column '" + name + "' has no levels");
    }
    std::unordered_set<std::string> unique(levels.begin(), levels.end());
    if (unique.size() != levels.size()) {
      throw Error(errc::invalid_argument,
                  "categorical column '" + name + "' has duplicate levels");
    }
    const auto r = static_cast<std::int32_t>(levels.size());
    for (std::int32_t code : codes) {
      if (code < 0 || code >= r) {
        throw Error(errc::invalid_argument,
                    "code " + std::to_string(code) + " outside 0.." +
                        std::to_string(r - 1) + " in column '" + name + "'");
      }
    }
    return AttributeColumn(std::move(name),
                           CategoricalData{std::move(levels),
                                           std::move(codes)});
  }

  static AttributeColumn numerical(std::string name,
                                   std::vector<double> values) {
    return AttributeColumn(std::move(name), NumericalData{std::move(values)});
  }

  const std::string& name() const noexcept { return name_; }

  ColumnKind kind() const noexcept {
    return std::holds_alternative<CategoricalData>(data_)
               ? ColumnKind::categorical
               : ColumnKind::numerical;
  }

  std::size_t record_count() const noexcept {
    if (const auto* c = std::get_if<CategoricalData>(&data_)) {
      return c->codes.size();
    }
    return std::get<NumericalData>(data_).values.size();
  }

  const CategoricalData& as_categorical() const {
    if (const auto* c = std::get_if<CategoricalData>(&data_)) return *c;
    throw Error(errc::non_categorical_column,
                "column '" + name_ + "' is numerical");
  }

  const NumericalData& as_numerical() const {
    if (const auto* n = std::get_if<NumericalData>(&data_)) return *n;
    throw Error(errc::invalid_argument,
                "column '" + name_ + "' is categorical");
  }

 private:
  AttributeColumn(std::string name,
                  std::variant<CategoricalData, NumericalData> data)
      : name_(std::move(name)), data_(std::move(data)) {}

  std::string name_;
  std::variant<CategoricalData, NumericalData> data_;
};

// Columns sharing one record count.
class Dataset {
 public:
  explicit Dataset(std::vector<AttributeColumn> columns)
      : columns_(std::move(columns)) {
    record_count_ = columns_.empty() ? 0 : columns_[0].record_count();
    for (const auto& col : columns_) {
      if (col.record_count() != record_count_) {
        throw Error(errc::invalid_argument,
                    "column '" + col.name() + "' has " +
                        std::to_string(col.record_count()) + " records, " +
                        "expected " + std::to_string(record_count_));
      }
    }
  }

  const std::vector<AttributeColumn>& columns() const noexcept {
    return columns_;
  }
  std::size_t record_count() const noexcept { return record_count_; }

 private:
  std::vector<AttributeColumn> columns_;
  std::size_t record_count_ = 0;
};

}  // namespace bistopriv
