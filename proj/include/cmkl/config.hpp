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

#ifndef CMKL_CONFIG_HPP_
#define CMKL_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmkl/dataset.hpp"
#include "cmkl/kernels.hpp"
#include "cmkl/multikernel.hpp"
#include "cmkl/svm.hpp"

namespace cmkl {

struct KernelEntry {
  KernelSpec spec;
  Index q = 0;  // 0: number of utility classes - 1
};

// Everything one experiment needs. Defaults follow the reference protocol:
// rho = 10, rho' = 1e-4, rho_snr in {0, 0.1}, C chosen from
// {0.01, 0.1, 1, 10, 100} by 5-fold stratified cross-validation.
struct ExperimentConfig {
  std::string name = "experiment";

  // Data: a training file plus either a test file or a seeded split.
  std::string train_path;
  std::string test_path;
  double test_fraction = 0.2;
  Schema schema;  // schema.standardize applies training statistics to both

  std::vector<KernelEntry> kernels;
  double rho = 10.0;
  double rho_prime = 1e-4;

  bool run_single = true;
  bool run_uniform = true;
  bool run_alignment = true;
  std::vector<double> snr_ridges{0.0, 0.1};
  bool run_upr_qp = false;
  RatioForm ratio_form = RatioForm::kCongruent;

  std::vector<double> c_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  int folds = 5;
  SvmOptions svm;

  std::string json_path;
  std::string table_path;
  bool record_timing = false;  // wall times make reports non-reproducible

  std::uint64_t seed = 0;

  // Throws ConfigError on inconsistent settings.
  void validate() const;
};

// Relative paths in the document are resolved against base_dir.
ExperimentConfig config_from_json(const nlohmann::json& doc,
                                  const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);

KernelEntry kernel_entry_from_json(const nlohmann::json& doc);

}  // namespace cmkl

#endif  // CMKL_CONFIG_HPP_
