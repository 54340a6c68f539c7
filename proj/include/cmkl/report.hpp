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

#ifndef CMKL_REPORT_HPP_
#define CMKL_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmkl/compression.hpp"

namespace cmkl {

struct KernelSummary {
  std::string name;
  Index q = 0;
  std::vector<double> snr;  // one score per configured rho_snr
  std::optional<std::string> failure;

  bool operator==(const KernelSummary&) const = default;
};

// One table row. Accuracies are percentages; a failed row keeps its reason
// and leaves the accuracies empty.
struct MethodRow {
  std::string name;
  std::string strategy;  // single | uniform | alignment | snr | upr_qp
  std::optional<double> ridge;
  std::optional<std::string> failure;
  std::optional<double> utility;
  std::optional<double> privacy;
  std::vector<double> weights;
  std::vector<double> snr_scores;
  bool rank_budget_compliant = false;
  Index released_rank = 0;
  std::optional<double> c_utility;
  std::optional<double> c_privacy;
  std::optional<double> wall_seconds;

  bool operator==(const MethodRow&) const = default;
};

struct ExperimentReport {
  std::string name;
  Index train_samples = 0;
  Index test_samples = 0;
  Index feature_dim = 0;
  int utility_classes = 0;
  int privacy_classes = 0;
  double baseline_utility = 0.0;  // 100 / L_u
  double baseline_privacy = 0.0;  // 100 / L_p
  RankBudget budget;
  std::vector<double> snr_ridges;
  std::vector<KernelSummary> kernels;
  std::vector<MethodRow> methods;

  bool operator==(const ExperimentReport&) const = default;
};

// Fraction in [0, 1] as a percentage with two decimals: 0.8567 -> "85.67".
std::string format_percent(double fraction);

// Structured form with a fixed key order ("schema": "cmkl.report/1").
nlohmann::ordered_json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::ordered_json& doc);

// Aligned text table: Method | Utility (%) | Privacy (%), baselines first.
std::string format_table(const ExperimentReport& report);

// Writes whichever of the two paths is non-empty.
void emit_report(const ExperimentReport& report, const std::string& json_path,
                 const std::string& table_path);
ExperimentReport read_report(const std::string& path);

}  // namespace cmkl

#endif  // CMKL_REPORT_HPP_
