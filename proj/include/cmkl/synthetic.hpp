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

#ifndef CMKL_SYNTHETIC_HPP_
#define CMKL_SYNTHETIC_HPP_

#include <cstdint>
#include <string>

#include "cmkl/dataset.hpp"

namespace cmkl {

// Two independent labels carried by disjoint feature blocks. Each
// (utility, privacy) pair occurs equally often; class centroids are drawn
// from N(0, separation^2) and every coordinate gets unit Gaussian noise.
struct SyntheticSpec {
  Index samples = 1200;
  Index features = 24;
  int utility_classes = 6;
  int privacy_classes = 10;
  Index utility_dims = 5;  // features [0, utility_dims)
  Index privacy_dims = 5;  // the next privacy_dims features
  double separation = 3.0;
  std::uint64_t seed = 0;
};

Dataset make_synthetic(const SyntheticSpec& spec);

// Header f0..f{M-1},utility,privacy; labels written as class ids.
void write_dataset_csv(const Dataset& data, const std::string& path);

}  // namespace cmkl

#endif  // CMKL_SYNTHETIC_HPP_
