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

#ifndef CMKL_DCA_HPP_
#define CMKL_DCA_HPP_

// Scatter matrices and Discriminant Component Analysis, in feature space
// (samples as rows, W is M x Q) and in the empirical kernel space (A is
// N x Q, one coefficient per training sample).

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "cmkl/error.hpp"
#include "cmkl/kernels.hpp"
#include "cmkl/labels.hpp"
#include "cmkl/numerics.hpp"

namespace cmkl {

template <typename Scalar>
struct ScatterTriple {
  SymMatrix<Scalar> between;  // S_B
  SymMatrix<Scalar> within;   // S_W
  SymMatrix<Scalar> total;    // S_bar = centered X^T X
  std::vector<int> class_counts;
  Mat<Scalar> class_means;    // L x M, one mean per row
  Vec<Scalar> grand_mean;
};

template <typename Scalar>
struct EmpiricalScatter {
  SymMatrix<Scalar> k_bar;
  SymMatrix<Scalar> between;  // K_B
  SymMatrix<Scalar> within;   // K_W
  // Class means of the centered kernel columns, C_N (k(mu_l) - k(mu)), one
  // column per class. The grand mean of centered columns is zero.
  Mat<Scalar> class_kernel_means;
  std::vector<int> class_counts;
};

enum class DcaSpace { kIntrinsic, kEmpirical };

template <typename Scalar>
struct DcaModel {
  DcaSpace space = DcaSpace::kIntrinsic;
  Mat<Scalar> projection;     // W (M x Q) or A (N x Q)
  Vec<Scalar> eigenvalues;    // descending, length Q
  Vec<Scalar> feature_mean;   // intrinsic only
  Scalar rho = Scalar(10);
  Scalar rho_prime = Scalar(1e-4);
  Index q = 0;
  int num_class = 0;
};

namespace detail {

template <typename Scalar>
void check_labels(Index n, const Labels& y, const char* who) {
  if (static_cast<Index>(y.size()) != n) {
    throw ConfigError(std::string(who) + ": " + std::to_string(y.size()) +
                      " labels for " + std::to_string(n) + " samples");
  }
}

}  // namespace detail

template <typename Derived>
ScatterTriple<typename Derived::Scalar> scatter(
    const Eigen::MatrixBase<Derived>& x, const Labels& y) {
  using Scalar = typename Derived::Scalar;
  detail::check_labels<Scalar>(x.rows(), y, "scatter");
  const int num_class = num_classes(y);
  const Index m = x.cols();

  ScatterTriple<Scalar> out;
  out.class_counts = class_counts(y, num_class);
  out.grand_mean = x.colwise().mean().transpose();
  out.class_means = Mat<Scalar>::Zero(num_class, m);
  for (Index i = 0; i < x.rows(); ++i) out.class_means.row(y[i]) += x.row(i);
  for (int l = 0; l < num_class; ++l) {
    out.class_means.row(l) /= Scalar(out.class_counts[l]);
  }

  Mat<Scalar> between_factor(m, num_class);
  for (int l = 0; l < num_class; ++l) {
    between_factor.col(l) =
        std::sqrt(Scalar(out.class_counts[l])) *
        (out.class_means.row(l).transpose() - out.grand_mean);
  }
  Mat<Scalar> within_factor(m, x.rows());
  Mat<Scalar> total_factor(m, x.rows());
  for (Index i = 0; i < x.rows(); ++i) {
    within_factor.col(i) = (x.row(i) - out.class_means.row(y[i])).transpose();
    total_factor.col(i) = x.row(i).transpose() - out.grand_mean;
  }
  out.between = SymMatrix<Scalar>::outer(between_factor);
  out.within = SymMatrix<Scalar>::outer(within_factor);
  out.total = SymMatrix<Scalar>::outer(total_factor);
  return out;
}

namespace detail {

// Per-class means of the columns of k minus the overall column mean, then
// row-centered: the vectors C_N (k(mu_l) - k(mu)).
template <typename Scalar>
Mat<Scalar> centered_class_means(const Mat<Scalar>& k, const Labels& y,
                                 const std::vector<int>& counts) {
  const Index n = k.rows();
  const Index num_class = static_cast<Index>(counts.size());
  Mat<Scalar> means = Mat<Scalar>::Zero(n, num_class);
  for (Index j = 0; j < n; ++j) means.col(y[j]) += k.col(j);
  const Vec<Scalar> overall = k.rowwise().mean();
  for (Index l = 0; l < num_class; ++l) {
    means.col(l) /= Scalar(counts[l]);
    means.col(l) -= overall;
    means.col(l).array() -= means.col(l).mean();
  }
  return means;
}

}  // namespace detail

// Between-class kernel matrix of k for labels y:
// C_N [sum_l N_l (k(mu_l) - k(mu))(k(mu_l) - k(mu))^T] C_N.
template <typename Scalar>
SymMatrix<Scalar> between_class_kernel(const SymMatrix<Scalar>& k,
                                       const Labels& y) {
  detail::check_labels<Scalar>(k.dim(), y, "between_class_kernel");
  const int num_class = num_classes(y);
  const std::vector<int> counts = class_counts(y, num_class);
  Mat<Scalar> factor = detail::centered_class_means(k.matrix(), y, counts);
  for (int l = 0; l < num_class; ++l) {
    factor.col(l) *= std::sqrt(Scalar(counts[l]));
  }
  return SymMatrix<Scalar>::outer(factor);
}

template <typename Scalar>
EmpiricalScatter<Scalar> empirical_scatter(const GramMatrix<Scalar>& k_bar,
                                           const Labels& y) {
  if (!k_bar.centered()) {
    throw ConfigError("empirical_scatter: kernel matrix must be centered");
  }
  detail::check_labels<Scalar>(k_bar.size(), y, "empirical_scatter");
  const int num_class = num_classes(y);
  EmpiricalScatter<Scalar> out;
  out.k_bar = k_bar.sym();
  out.class_counts = class_counts(y, num_class);
  out.class_kernel_means =
      detail::centered_class_means(k_bar.matrix(), y, out.class_counts);

  Mat<Scalar> between_factor = out.class_kernel_means;
  for (int l = 0; l < num_class; ++l) {
    between_factor.col(l) *= std::sqrt(Scalar(out.class_counts[l]));
  }
  Mat<Scalar> within_factor = k_bar.matrix();
  for (Index j = 0; j < within_factor.cols(); ++j) {
    within_factor.col(j) -= out.class_kernel_means.col(y[j]);
  }
  out.between = SymMatrix<Scalar>::outer(between_factor);
  out.within = SymMatrix<Scalar>::outer(within_factor);
  return out;
}

// Top-Q generalized eigenvectors of (S_B + rho' I, S_bar + rho I).
template <typename Derived>
DcaModel<typename Derived::Scalar> fit_dca(
    const Eigen::MatrixBase<Derived>& x, const Labels& y, Index q,
    typename Derived::Scalar rho, typename Derived::Scalar rho_prime) {
  using Scalar = typename Derived::Scalar;
  if (q < 1 || q > x.cols()) {
    throw ConfigError("fit_dca: Q=" + std::to_string(q) + " outside [1, " +
                      std::to_string(x.cols()) + "]");
  }
  if (rho < Scalar(0) || rho_prime < Scalar(0)) {
    throw ConfigError("fit_dca: ridge parameters must be non-negative");
  }
  const ScatterTriple<Scalar> s = scatter(x, y);
  const Index m = x.cols();
  const SymMatrix<Scalar> numerator =
      s.between + SymMatrix<Scalar>::identity(m).scaled(rho_prime);
  const SymMatrix<Scalar> denominator =
      s.total + SymMatrix<Scalar>::identity(m).scaled(rho);
  EigPair<Scalar> eig =
      generalized_eig(numerator, denominator, q, "S_bar + rho I");

  DcaModel<Scalar> model;
  model.space = DcaSpace::kIntrinsic;
  model.projection = std::move(eig.vectors);
  model.eigenvalues = std::move(eig.values);
  model.feature_mean = s.grand_mean;
  model.rho = rho;
  model.rho_prime = rho_prime;
  model.q = q;
  model.num_class = static_cast<int>(s.class_counts.size());
  return model;
}

// Kernel DCA: top-Q generalized eigenvectors of
// (K_B + rho' K_bar, K_bar^2 + rho K_bar), normalized so that
// A^T (K_bar^2 + rho K_bar) A = I.
//
// Both pencil matrices are functions of K_bar on its range, so the problem
// is solved in the eigenbasis of K_bar where the right-hand matrix is
// diagonal. Directions where K_bar^2 + rho K_bar is numerically zero carry a
// zero numerator too; they are only used when Q exceeds the usable rank and
// are then normalized against the jittered matrix (jitter 1e-10 trace / N).
template <typename Scalar>
DcaModel<Scalar> fit_kdca(const GramMatrix<Scalar>& k_bar, const Labels& y,
                          const SymMatrix<Scalar>& k_between, Index q,
                          Scalar rho, Scalar rho_prime,
                          Scalar range_tol = Scalar(1e-10)) {
  if (!k_bar.centered()) {
    throw ConfigError("fit_kdca: kernel matrix must be centered");
  }
  const Index n = k_bar.size();
  detail::check_labels<Scalar>(n, y, "fit_kdca");
  if (k_between.dim() != n) {
    throw ConfigError("fit_kdca: K_B dimension mismatch");
  }
  if (q < 1 || q > n) {
    throw ConfigError("fit_kdca: Q=" + std::to_string(q) + " outside [1, " +
                      std::to_string(n) + "]");
  }
  if (rho < Scalar(0) || rho_prime < Scalar(0)) {
    throw ConfigError("fit_kdca: ridge parameters must be non-negative");
  }
  detail::require_finite(k_bar.matrix(), "fit_kdca");

  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(k_bar.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("fit_kdca: eigendecomposition of K_bar failed");
  }
  const Vec<Scalar>& lambda = es.eigenvalues();
  const Mat<Scalar>& basis = es.eigenvectors();
  const Vec<Scalar> denom = lambda.array().square() + rho * lambda.array();
  const Scalar denom_top = denom.maxCoeff();
  if (!(denom_top > Scalar(0))) {
    throw NumericalError("fit_kdca: K_bar^2 + rho K_bar vanishes");
  }

  // Usable directions, strongest first.
  std::vector<Index> usable;
  std::vector<Index> rest;
  for (Index i = n - 1; i >= 0; --i) {
    (denom(i) > range_tol * denom_top ? usable : rest).push_back(i);
  }
  const Index r = static_cast<Index>(usable.size());

  Mat<Scalar> whiten(n, r);
  for (Index c = 0; c < r; ++c) {
    whiten.col(c) = basis.col(usable[c]) / std::sqrt(denom(usable[c]));
  }
  Mat<Scalar> core = whiten.transpose() * k_between.matrix() * whiten;
  for (Index c = 0; c < r; ++c) {
    core(c, c) += rho_prime * lambda(usable[c]) / denom(usable[c]);
  }
  core = Scalar(0.5) * (core + core.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> inner(core);

  DcaModel<Scalar> model;
  model.space = DcaSpace::kEmpirical;
  model.rho = rho;
  model.rho_prime = rho_prime;
  model.q = q;
  model.num_class = num_classes(y);
  model.projection.resize(n, q);
  model.eigenvalues.resize(q);
  const Index from_range = std::min(q, r);
  for (Index c = 0; c < from_range; ++c) {
    model.eigenvalues(c) = inner.eigenvalues()(r - 1 - c);
    model.projection.col(c) = whiten * inner.eigenvectors().col(r - 1 - c);
  }
  if (q > r) {
    const Scalar jitter =
        Scalar(1e-10) * denom.cwiseMax(Scalar(0)).sum() / Scalar(n);
    for (Index c = r; c < q; ++c) {
      const Index idx = rest[static_cast<std::size_t>(c - r)];
      const Scalar h = std::abs(denom(idx)) + jitter;
      const Vec<Scalar> u = basis.col(idx);
      const Scalar g = u.dot(k_between.matrix() * u) + rho_prime * lambda(idx);
      model.eigenvalues(c) = g / h;
      model.projection.col(c) = u / std::sqrt(h);
    }
  }
  detail::canonical_sign(model.projection);
  return model;
}

template <typename Scalar>
DcaModel<Scalar> fit_kdca(const GramMatrix<Scalar>& k_bar, const Labels& y,
                          Index q, Scalar rho, Scalar rho_prime) {
  return fit_kdca(k_bar, y, between_class_kernel(k_bar.sym(), y), q, rho,
                  rho_prime);
}

// Reduced features, one row per sample. Intrinsic models take raw feature
// rows (N x M); empirical models take centered kernel columns against the
// training set (N_train x N_test).
template <typename Scalar, typename Derived>
Mat<Scalar> project(const DcaModel<Scalar>& model,
                    const Eigen::MatrixBase<Derived>& data) {
  if (model.space == DcaSpace::kIntrinsic) {
    if (data.cols() != model.projection.rows()) {
      throw ConfigError("project: expected " +
                        std::to_string(model.projection.rows()) +
                        " features, got " + std::to_string(data.cols()));
    }
    Mat<Scalar> centered = data.rowwise() - model.feature_mean.transpose();
    return centered * model.projection;
  }
  if (data.rows() != model.projection.rows()) {
    throw ConfigError("project: expected kernel columns of length " +
                      std::to_string(model.projection.rows()) + ", got " +
                      std::to_string(data.rows()));
  }
  return data.transpose() * model.projection;
}

}  // namespace cmkl

#endif  // CMKL_DCA_HPP_
