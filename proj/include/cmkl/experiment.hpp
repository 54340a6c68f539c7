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

#ifndef CMKL_EXPERIMENT_HPP_
#define CMKL_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmkl/compression.hpp"
#include "cmkl/config.hpp"
#include "cmkl/dataset.hpp"
#include "cmkl/multikernel.hpp"
#include "cmkl/report.hpp"
#include "cmkl/svm.hpp"

namespace cmkl {

// What leaves the private sphere: the combined compressive kernel over the
// training set and its cross block against the test set. Classifiers in the
// public sphere are built from this and public labels only.
class ReleasedKernel {
 public:
  ReleasedKernel(SymMatrix<double> train, MatrixXd cross);

  const SymMatrix<double>& train() const { return train_; }
  const MatrixXd& cross() const { return cross_; }  // N_train x N_test
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  SymMatrix<double> train_;
  MatrixXd cross_;
  std::uint64_t fingerprint_;
};

struct SelectionOptions {
  std::vector<double> c_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  int folds = 5;
  std::uint64_t seed = 0;
  SvmOptions svm;
};

struct Evaluation {
  double accuracy = 0.0;  // fraction
  double c = 0.0;
};

// Stratified folds: each class is shuffled and dealt round-robin.
std::vector<std::vector<Index>> stratified_folds(const Labels& y, int folds,
                                                 std::uint64_t seed);

// C with the best mean fold accuracy, smaller C on ties.
double cross_validate(const SymMatrix<double>& k, const Labels& y, int folds,
                      const std::vector<double>& c_grid, std::uint64_t seed,
                      const SvmOptions& svm = {});

// Cross-validates C on the training block, refits, and scores the test set.
Evaluation evaluate_released(const ReleasedKernel& released,
                             const Labels& y_train, const Labels& y_test,
                             const SelectionOptions& options);

// Loads, splits and standardizes according to the config.
std::pair<Dataset, Dataset> prepare_data(const ExperimentConfig& config);

struct KernelPipeline {
  std::string name;
  Index q = 0;
  std::optional<CompressiveKernel<double>> kernel;  // normalized
  MatrixXd cross;                                   // N_train x N_test
  std::optional<std::string> failure;
};

// gram -> center -> KDCA on utility labels -> compress -> normalize, one
// pipeline per configured kernel. Failures are recorded, not thrown.
std::vector<KernelPipeline> build_compressive_kernels(
    const ExperimentConfig& config, const Dataset& train, const Dataset& test);

WeightVector<double> compute_weights(
    WeightStrategy strategy, double ridge,
    const std::vector<CompressiveKernel<double>>& kernels, const Dataset& train,
    RatioForm form = RatioForm::kCongruent);

// Numerical rank of sum_l mu_l K_hat_l at the given relative cutoff, computed
// from the stacked low-rank factors.
Index released_rank(const std::vector<CompressiveKernel<double>>& kernels,
                    const VectorXd& mu, double tol_rel = 1e-8);

ExperimentReport run_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const Dataset& train, const Dataset& test);

}  // namespace cmkl

#endif  // CMKL_EXPERIMENT_HPP_
