/*
 * Copyright 2026 The cmkl Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cmkl/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>

#include "cmkl/error.hpp"

namespace cmkl {
namespace {

Index column_index(const CsvTable& table, const std::string& name,
                   const std::string& source) {
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    throw DataError(source + ": missing column '" + name + "'");
  }
  return static_cast<Index>(it - table.header.begin());
}

double parse_number(const std::string& cell, std::size_t row,
                    const std::string& column, const std::string& source) {
  const auto bad = [&](const char* why) {
    return DataError(source + ": row " + std::to_string(row) + ", column '" +
                     column + "': " + why + " ('" + cell + "')");
  };
  std::size_t start = cell.find_first_not_of(" \t");
  std::size_t stop = cell.find_last_not_of(" \t");
  if (start == std::string::npos) throw bad("empty feature cell");
  const std::string trimmed = cell.substr(start, stop - start + 1);
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(trimmed.c_str(), &end);
  if (end != trimmed.c_str() + trimmed.size() || errno == ERANGE) {
    throw bad("non-numeric feature");
  }
  if (!std::isfinite(value)) throw bad("non-finite feature");
  return value;
}

class LabelCoder {
 public:
  LabelCoder(std::vector<std::string> known, bool frozen)
      : names_(std::move(known)), frozen_(frozen) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      ids_[names_[i]] = static_cast<int>(i);
    }
  }

  int code(const std::string& cell, std::size_t row, const std::string& column,
           const std::string& source) {
    if (cell.empty()) {
      throw DataError(source + ": row " + std::to_string(row) + ", column '" +
                      column + "': empty label");
    }
    const auto it = ids_.find(cell);
    if (it != ids_.end()) return it->second;
    if (frozen_) {
      throw DataError(source + ": row " + std::to_string(row) + ", column '" +
                      column + "': label '" + cell +
                      "' does not occur in the training data");
    }
    const int id = static_cast<int>(names_.size());
    names_.push_back(cell);
    ids_[cell] = id;
    return id;
  }

  std::vector<std::string> names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> ids_;
  bool frozen_;
};

}  // namespace

Dataset dataset_from_table(const CsvTable& table, const Schema& schema,
                           const Dataset* reference,
                           const std::string& source) {
  if (schema.utility_label.empty() || schema.privacy_label.empty()) {
    throw ConfigError("schema must name the utility and privacy label columns");
  }
  const Index utility_col = column_index(table, schema.utility_label, source);
  const Index privacy_col = column_index(table, schema.privacy_label, source);

  std::vector<std::string> names = schema.features;
  if (names.empty()) {
    for (const auto& h : table.header) {
      if (h != schema.utility_label && h != schema.privacy_label) {
        names.push_back(h);
      }
    }
  }
  if (names.empty()) throw DataError(source + ": no feature columns");
  std::vector<Index> feature_cols;
  for (const auto& name : names) {
    feature_cols.push_back(column_index(table, name, source));
  }
  if (reference && reference->feature_names != names) {
    throw DataError(source + ": feature columns differ from the training file");
  }

  Dataset out;
  out.feature_names = names;
  const Index n = static_cast<Index>(table.rows.size());
  out.features.resize(n, static_cast<Index>(feature_cols.size()));
  LabelCoder utility(reference ? reference->utility_classes
                               : std::vector<std::string>{},
                     reference != nullptr);
  LabelCoder privacy(reference ? reference->privacy_classes
                               : std::vector<std::string>{},
                     reference != nullptr);
  for (Index r = 0; r < n; ++r) {
    const auto& row = table.rows[static_cast<std::size_t>(r)];
    const std::size_t file_row = static_cast<std::size_t>(r) + 2;
    for (std::size_t c = 0; c < feature_cols.size(); ++c) {
      out.features(r, static_cast<Index>(c)) =
          parse_number(row[static_cast<std::size_t>(feature_cols[c])],
                       file_row, names[c], source);
    }
    out.utility.push_back(utility.code(
        row[static_cast<std::size_t>(utility_col)], file_row,
        schema.utility_label, source));
    out.privacy.push_back(privacy.code(
        row[static_cast<std::size_t>(privacy_col)], file_row,
        schema.privacy_label, source));
  }
  out.utility_classes = utility.names();
  out.privacy_classes = privacy.names();

  if (schema.standardize && n > 0) {
    out.features = Standardizer::fit(out.features).apply(out.features);
  }
  return out;
}

Dataset load_dataset(const std::string& path, const Schema& schema,
                     const Dataset* reference) {
  return dataset_from_table(read_csv(path), schema, reference, path);
}

Standardizer Standardizer::fit(const MatrixXd& x) {
  Standardizer s;
  s.mean = x.colwise().mean().transpose();
  s.scale = VectorXd::Ones(x.cols());
  if (x.rows() < 2) return s;
  for (Index c = 0; c < x.cols(); ++c) {
    const double var =
        (x.col(c).array() - s.mean(c)).square().sum() /
        static_cast<double>(x.rows());
    const double sd = std::sqrt(var);
    // Constant column: divide by 1.
    if (sd > 1e-12 * std::max(1.0, std::abs(s.mean(c)))) s.scale(c) = sd;
  }
  return s;
}

MatrixXd Standardizer::apply(const MatrixXd& x) const {
  if (x.cols() != mean.size()) {
    throw ConfigError("Standardizer: feature dimension mismatch");
  }
  MatrixXd out = x.rowwise() - mean.transpose();
  return out.array().rowwise() / scale.transpose().array();
}

Dataset subset(const Dataset& data, const std::vector<Index>& rows) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.utility_classes = data.utility_classes;
  out.privacy_classes = data.privacy_classes;
  out.features.resize(static_cast<Index>(rows.size()), data.dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Index>(i)) = data.features.row(rows[i]);
    out.utility.push_back(data.utility[static_cast<std::size_t>(rows[i])]);
    out.privacy.push_back(data.privacy[static_cast<std::size_t>(rows[i])]);
  }
  return out;
}

void seeded_shuffle(std::vector<Index>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          double test_fraction,
                                          std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
  const Index n = data.size();
  const Index n_test = static_cast<Index>(
      std::llround(test_fraction * static_cast<double>(n)));
  if (n_test < 1 || n_test >= n) {
    throw ConfigError("split leaves an empty train or test set");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  seeded_shuffle(order, seed);
  std::vector<Index> test(order.begin(), order.begin() + n_test);
  std::vector<Index> train(order.begin() + n_test, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {subset(data, train), subset(data, test)};
}

}  // namespace cmkl
