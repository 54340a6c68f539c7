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

#ifndef CMKL_COMPRESSION_HPP_
#define CMKL_COMPRESSION_HPP_

#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cmkl/error.hpp"
#include "cmkl/kernels.hpp"
#include "cmkl/numerics.hpp"

namespace cmkl {

// Rank-reduced kernel K_hat = K_bar A A^T K_bar and its between-class
// counterpart K_hat_B = K_bar A A^T K_B A A^T K_bar. Normalization divides
// K_hat by its trace s and K_hat_B by s^2, since K_hat_B is quadratic in
// K_hat (it equals the between-class matrix of K_hat itself).
template <typename Scalar>
struct CompressiveKernel {
  SymMatrix<Scalar> k_hat;
  SymMatrix<Scalar> k_hat_between;
  Mat<Scalar> projection;  // A, N x Q
  Mat<Scalar> factor;      // K_bar A, so K_hat = factor factor^T / scale
  Index q = 0;
  KernelSpec spec;
  bool normalized = false;
  Scalar scale = Scalar(1);

  Index size() const { return k_hat.dim(); }
};

template <typename Scalar>
CompressiveKernel<Scalar> compress(const GramMatrix<Scalar>& k_bar,
                                   const Mat<Scalar>& projection,
                                   const SymMatrix<Scalar>& k_between,
                                   const KernelSpec& spec = {}) {
  if (!k_bar.centered()) {
    throw ConfigError("compress: kernel matrix must be centered");
  }
  const Index n = k_bar.size();
  if (projection.rows() != n) {
    throw ConfigError("compress: projection has " +
                      std::to_string(projection.rows()) + " rows, kernel " +
                      std::to_string(n));
  }
  if (k_between.dim() != n) {
    throw ConfigError("compress: K_B dimension mismatch");
  }
  CompressiveKernel<Scalar> out;
  out.projection = projection;
  out.factor = k_bar.matrix() * projection;
  out.q = projection.cols();
  out.spec = spec;
  out.k_hat = SymMatrix<Scalar>::outer(out.factor);
  const Mat<Scalar> core =
      projection.transpose() * k_between.matrix() * projection;
  out.k_hat_between =
      SymMatrix<Scalar>::symmetrized(out.factor * core * out.factor.transpose());
  return out;
}

// Unit-trace copy.
template <typename Scalar>
CompressiveKernel<Scalar> normalize(const CompressiveKernel<Scalar>& k) {
  const Scalar tr = k.k_hat.trace();
  if (!(tr > Scalar(1e-14) * Scalar(k.size()))) {
    throw NumericalError("normalize: degenerate compressive kernel (trace " +
                         std::to_string(static_cast<double>(tr)) + ")");
  }
  CompressiveKernel<Scalar> out = k;
  out.k_hat = k.k_hat.scaled(Scalar(1) / tr);
  out.k_hat_between = k.k_hat_between.scaled(Scalar(1) / (tr * tr));
  out.scale = k.scale * tr;
  out.normalized = true;
  return out;
}

// Test-side counterpart of K_hat: K_bar A A^T kbar_j per centered cross
// column, divided by the normalization scale.
template <typename Scalar, typename Derived>
Mat<Scalar> compress_cross(const CompressiveKernel<Scalar>& k,
                           const Eigen::MatrixBase<Derived>& k_bar_test) {
  if (k_bar_test.rows() != k.projection.rows()) {
    throw ConfigError("compress_cross: cross columns have " +
                      std::to_string(k_bar_test.rows()) + " rows, kernel " +
                      std::to_string(k.projection.rows()));
  }
  Mat<Scalar> reduced = k.projection.transpose() * k_bar_test;
  return (k.factor * reduced) / k.scale;
}

template <typename Scalar, typename Derived>
Mat<Scalar> compress_cross(const GramMatrix<Scalar>& k_bar,
                           const Mat<Scalar>& projection,
                           const Eigen::MatrixBase<Derived>& k_bar_test) {
  if (projection.rows() != k_bar.size() ||
      k_bar_test.rows() != k_bar.size()) {
    throw ConfigError("compress_cross: shape mismatch");
  }
  Mat<Scalar> reduced = projection.transpose() * k_bar_test;
  return k_bar.matrix() * (projection * reduced);
}

struct RankBudget {
  bool compliant = false;
  Index total = 0;        // sum of Q_l
  Index feature_dim = 0;  // M
  Index margin = 0;       // M - sum Q_l

  bool operator==(const RankBudget&) const = default;
};

// The released multi-kernel must have rank below the raw feature dimension:
// compliant iff sum Q_l < M.
inline RankBudget rank_budget_check(const std::vector<Index>& ranks,
                                    Index feature_dim) {
  RankBudget out;
  out.total = std::accumulate(ranks.begin(), ranks.end(), Index{0});
  out.feature_dim = feature_dim;
  out.margin = feature_dim - out.total;
  out.compliant = out.total < feature_dim;
  return out;
}

}  // namespace cmkl

#endif  // CMKL_COMPRESSION_HPP_
