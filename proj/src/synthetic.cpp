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

#include "cmkl/synthetic.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <random>

#include "cmkl/csv.hpp"
#include "cmkl/error.hpp"

namespace cmkl {

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.utility_classes < 2 || spec.privacy_classes < 2) {
    throw ConfigError("synthetic: need at least 2 classes per label");
  }
  if (spec.utility_dims < 1 || spec.privacy_dims < 1 ||
      spec.utility_dims + spec.privacy_dims > spec.features) {
    throw ConfigError("synthetic: signal blocks do not fit in the features");
  }
  const Index cells =
      static_cast<Index>(spec.utility_classes) * spec.privacy_classes;
  if (spec.samples < cells) {
    throw ConfigError("synthetic: fewer samples than label combinations");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  MatrixXd util_centers(spec.utility_classes, spec.utility_dims);
  MatrixXd priv_centers(spec.privacy_classes, spec.privacy_dims);
  for (Index i = 0; i < util_centers.size(); ++i) {
    util_centers.data()[i] = spec.separation * normal(rng);
  }
  for (Index i = 0; i < priv_centers.size(); ++i) {
    priv_centers.data()[i] = spec.separation * normal(rng);
  }

  std::vector<Index> order(static_cast<std::size_t>(spec.samples));
  for (Index i = 0; i < spec.samples; ++i) {
    order[static_cast<std::size_t>(i)] = i;
  }
  seeded_shuffle(order, spec.seed ^ 0x9e3779b97f4a7c15ULL);

  Dataset out;
  out.features.resize(spec.samples, spec.features);
  out.utility.resize(static_cast<std::size_t>(spec.samples));
  out.privacy.resize(static_cast<std::size_t>(spec.samples));
  for (Index i = 0; i < spec.samples; ++i) {
    const Index cell = order[static_cast<std::size_t>(i)] % cells;
    const int u = static_cast<int>(cell % spec.utility_classes);
    const int p = static_cast<int>(cell / spec.utility_classes);
    out.utility[static_cast<std::size_t>(i)] = u;
    out.privacy[static_cast<std::size_t>(i)] = p;
    for (Index c = 0; c < spec.features; ++c) {
      double v = normal(rng);
      if (c < spec.utility_dims) {
        v += util_centers(u, c);
      } else if (c < spec.utility_dims + spec.privacy_dims) {
        v += priv_centers(p, c - spec.utility_dims);
      }
      out.features(i, c) = v;
    }
  }
  for (Index c = 0; c < spec.features; ++c) {
    out.feature_names.push_back("f" + std::to_string(c));
  }
  for (int l = 0; l < spec.utility_classes; ++l) {
    out.utility_classes.push_back(std::to_string(l));
  }
  for (int l = 0; l < spec.privacy_classes; ++l) {
    out.privacy_classes.push_back(std::to_string(l));
  }
  return out;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out = open_output(path);
  for (const auto& name : data.feature_names) out << name << ",";
  out << "utility,privacy\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < data.size(); ++i) {
    for (Index c = 0; c < data.dim(); ++c) out << data.features(i, c) << ",";
    out << data.utility[static_cast<std::size_t>(i)] << ","
        << data.privacy[static_cast<std::size_t>(i)] << "\n";
  }
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace cmkl
