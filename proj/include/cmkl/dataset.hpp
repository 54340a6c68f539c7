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

#ifndef CMKL_DATASET_HPP_
#define CMKL_DATASET_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cmkl/csv.hpp"
#include "cmkl/labels.hpp"
#include "cmkl/numerics.hpp"

namespace cmkl {

struct Schema {
  std::vector<std::string> features;  // empty: every non-label column
  std::string utility_label;
  std::string privacy_label;
  // Zero mean, unit variance per feature using this file's statistics.
  bool standardize = true;
};

// Samples as rows with two label vectors. Class ids follow first appearance
// in the file; the original cell text is kept in *_classes.
struct Dataset {
  MatrixXd features;
  Labels utility;
  Labels privacy;
  std::vector<std::string> feature_names;
  std::vector<std::string> utility_classes;
  std::vector<std::string> privacy_classes;

  Index size() const { return features.rows(); }
  Index dim() const { return features.cols(); }
};

// A test file passes the training Dataset as `reference` so both share
// class ids; labels unseen in the reference are an error.
Dataset dataset_from_table(const CsvTable& table, const Schema& schema,
                           const Dataset* reference = nullptr,
                           const std::string& source = "<table>");
Dataset load_dataset(const std::string& path, const Schema& schema,
                     const Dataset* reference = nullptr);

struct Standardizer {
  VectorXd mean;
  VectorXd scale;  // standard deviation, 1 for constant columns

  static Standardizer fit(const MatrixXd& x);
  MatrixXd apply(const MatrixXd& x) const;
};

Dataset subset(const Dataset& data, const std::vector<Index>& rows);

// Seeded shuffle split; returns (train, test) with rows kept in file order.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          double test_fraction,
                                          std::uint64_t seed);

// In-place Fisher-Yates driven by a 64-bit Mersenne Twister.
void seeded_shuffle(std::vector<Index>& items, std::uint64_t seed);

}  // namespace cmkl

#endif  // CMKL_DATASET_HPP_
