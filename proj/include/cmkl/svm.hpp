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

#ifndef CMKL_SVM_HPP_
#define CMKL_SVM_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "cmkl/labels.hpp"
#include "cmkl/numerics.hpp"

namespace cmkl {

enum class WorkingSetRule {
  kMaxViolatingPair,  // first order: the two most violating indices
  kSecondOrder,       // most violating i, j by second-order gain
};

enum class Multiclass {
  kOneVsRest,  // L machines, argmax of decision values
  kOneVsOne,   // L(L-1)/2 machines, argmax of pairwise votes
};

struct SvmOptions {
  double tolerance = 1e-3;  // stop when m(alpha) - M(alpha) < tolerance
  WorkingSetRule rule = WorkingSetRule::kMaxViolatingPair;
  Multiclass multiclass = Multiclass::kOneVsRest;
  long max_iterations = 0;  // 0: max(10^7, 100 N)
};

// One binary machine: f(x) = sum_i coef_i K(x_i, x) + bias, with
// coef_i = alpha_i y_i.
struct BinarySvm {
  VectorXd alpha;
  VectorXd coef;
  double bias = 0.0;
  long iterations = 0;
};

// Solves the C-SVM dual over a precomputed kernel for labels in {-1, +1}.
BinarySvm fit_binary_svm(const SymMatrix<double>& k,
                         const std::vector<int>& signs, double c,
                         const SvmOptions& options = {});

// Multiclass machine over a precomputed kernel. One-vs-rest by default; two
// classes use a single machine with decision values (f, -f). One-vs-one
// reports vote counts as decision values.
class SvmModel {
 public:
  const std::vector<int>& classes() const { return classes_; }
  const std::vector<BinarySvm>& machines() const { return machines_; }
  double c() const { return c_; }
  std::uint64_t fingerprint() const { return fingerprint_; }
  Index training_size() const { return n_train_; }

  // n_test x L decision values for an N_train x n_test cross-kernel.
  MatrixXd decision_values(const MatrixXd& k_cross) const;

 private:
  friend SvmModel fit_svm(const SymMatrix<double>&, const Labels&, double,
                          const SvmOptions&);
  std::vector<int> classes_;
  std::vector<BinarySvm> machines_;
  // One-vs-one only: training rows and class pair of each machine.
  std::vector<std::vector<Index>> members_;
  std::vector<std::pair<int, int>> pairs_;
  double c_ = 1.0;
  std::uint64_t fingerprint_ = 0;
  Index n_train_ = 0;
};

// FNV-1a over the matrix shape and entries.
std::uint64_t kernel_fingerprint(const MatrixXd& k);

SvmModel fit_svm(const SymMatrix<double>& k_train, const Labels& y, double c,
                 const SvmOptions& options = {});

// Argmax over the per-class decision values; ties go to the lowest class
// index. Throws when train_fingerprint differs from the model's.
Labels predict(const SvmModel& model, const MatrixXd& k_cross,
               std::uint64_t train_fingerprint);

// Index of the largest entry, lowest index among ties.
Index argmax_lowest(const Eigen::Ref<const VectorXd>& values);

double accuracy(const Labels& predicted, const Labels& truth);

}  // namespace cmkl

#endif  // CMKL_SVM_HPP_
