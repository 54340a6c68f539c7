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

#ifndef CMKL_LABELS_HPP_
#define CMKL_LABELS_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cmkl/error.hpp"

namespace cmkl {

// Class ids in [0, L), one per sample.
using Labels = std::vector<int>;

// Number of classes L = max label + 1. Throws on negative labels or on a
// class id in [0, L) without any sample.
inline int num_classes(const Labels& y) {
  if (y.empty()) throw ConfigError("label vector is empty");
  const int hi = *std::max_element(y.begin(), y.end());
  const int lo = *std::min_element(y.begin(), y.end());
  if (lo < 0) throw ConfigError("negative class label " + std::to_string(lo));
  std::vector<int> counts(static_cast<std::size_t>(hi) + 1, 0);
  for (int v : y) ++counts[static_cast<std::size_t>(v)];
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == 0) {
      throw ConfigError("class " + std::to_string(l) + " has no samples");
    }
  }
  return hi + 1;
}

inline std::vector<int> class_counts(const Labels& y, int num_class) {
  std::vector<int> counts(static_cast<std::size_t>(num_class), 0);
  for (int v : y) ++counts[static_cast<std::size_t>(v)];
  return counts;
}

// N x L class-indicator matrix Y with Y(i, y_i) = 1.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> indicator(
    const Labels& y, int num_class) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          static_cast<Eigen::Index>(y.size()), num_class);
  for (std::size_t i = 0; i < y.size(); ++i) {
    out(static_cast<Eigen::Index>(i), y[i]) = Scalar(1);
  }
  return out;
}

}  // namespace cmkl

#endif  // CMKL_LABELS_HPP_
