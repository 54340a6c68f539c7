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

#ifndef CMKL_NUMERICS_HPP_
#define CMKL_NUMERICS_HPP_

// Dense linear algebra shared by the kernel, DCA and multi-kernel code:
// symmetric matrices with enforced symmetry, the symmetric-definite
// generalized eigenproblem, trace norms, ridge/pseudo inverses, numerical
// rank and a small non-negative quadratic program solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "cmkl/error.hpp"

namespace cmkl {

using Eigen::Index;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Mat<double>;
using VectorXd = Vec<double>;

// Square matrix with symmetric access. Construction from an arbitrary
// matrix checks |a_ij - a_ji| <= tol * max(1, |a_ij|); the named factories
// build exactly symmetric values from computed products.
template <typename Scalar>
class SymMatrix {
 public:
  using MatrixType = Mat<Scalar>;

  SymMatrix() = default;

  template <typename Derived>
  explicit SymMatrix(const Eigen::MatrixBase<Derived>& m,
                     const std::string& name = "matrix")
      : m_(m) {
    if (m_.rows() != m_.cols()) {
      throw ConfigError(name + " is not square (" + std::to_string(m_.rows()) +
                        "x" + std::to_string(m_.cols()) + ")");
    }
    const Scalar tol = Eigen::NumTraits<Scalar>::dummy_precision();
    for (Index j = 0; j < m_.cols(); ++j) {
      for (Index i = j + 1; i < m_.rows(); ++i) {
        const Scalar a = m_(i, j);
        const Scalar b = m_(j, i);
        const Scalar scale = std::max<Scalar>(Scalar(1), std::abs(a));
        if (!(std::abs(a - b) <= tol * scale)) {
          throw ConfigError(name + " is not symmetric at (" +
                            std::to_string(i) + ", " + std::to_string(j) + ")");
        }
      }
    }
  }

  // Mirrors the lower triangle of m.
  template <typename Derived>
  static SymMatrix from_lower(const Eigen::MatrixBase<Derived>& m) {
    MatrixType lower = m;
    MatrixType out = lower.template selfadjointView<Eigen::Lower>();
    return SymMatrix(std::move(out), Unchecked{});
  }

  // (m + m^T) / 2, for products that are symmetric up to rounding.
  template <typename Derived>
  static SymMatrix symmetrized(const Eigen::MatrixBase<Derived>& m) {
    MatrixType tmp = m;
    MatrixType out = Scalar(0.5) * (tmp + tmp.transpose());
    return SymMatrix(std::move(out), Unchecked{});
  }

  // Gram product F * F^T.
  template <typename Derived>
  static SymMatrix outer(const Eigen::MatrixBase<Derived>& f) {
    MatrixType out = MatrixType::Zero(f.rows(), f.rows());
    out.template selfadjointView<Eigen::Lower>().rankUpdate(f);
    return from_lower(out);
  }

  static SymMatrix identity(Index n) {
    return SymMatrix(MatrixType::Identity(n, n), Unchecked{});
  }
  static SymMatrix zero(Index n) {
    return SymMatrix(MatrixType::Zero(n, n), Unchecked{});
  }

  Index dim() const { return m_.rows(); }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }
  const MatrixType& matrix() const { return m_; }
  Scalar trace() const { return m_.trace(); }

  SymMatrix scaled(Scalar c) const {
    return SymMatrix(MatrixType(c * m_), Unchecked{});
  }
  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(MatrixType(a.m_ + b.m_), Unchecked{});
  }

 private:
  struct Unchecked {};
  SymMatrix(MatrixType m, Unchecked) : m_(std::move(m)) {}

  MatrixType m_;
};

// Eigenvalues in descending order with eigenvectors in matching columns.
template <typename Scalar>
struct EigPair {
  Vec<Scalar> values;
  Mat<Scalar> vectors;
};

namespace detail {

// Flips each column so its first non-negligible coordinate is positive.
template <typename Scalar>
void canonical_sign(Mat<Scalar>& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    const Scalar peak = vectors.col(c).cwiseAbs().maxCoeff();
    if (peak == Scalar(0)) continue;
    for (Index r = 0; r < vectors.rows(); ++r) {
      if (std::abs(vectors(r, c)) > Scalar(1e-8) * peak) {
        if (vectors(r, c) < Scalar(0)) vectors.col(c) *= Scalar(-1);
        break;
      }
    }
  }
}

// Ascending solver output reordered to descending, keeping the top k.
template <typename Scalar>
EigPair<Scalar> top_k_descending(const Vec<Scalar>& ascending_values,
                                 const Mat<Scalar>& ascending_vectors,
                                 Index k) {
  const Index n = ascending_values.size();
  EigPair<Scalar> out;
  out.values.resize(k);
  out.vectors.resize(ascending_vectors.rows(), k);
  for (Index i = 0; i < k; ++i) {
    out.values(i) = ascending_values(n - 1 - i);
    out.vectors.col(i) = ascending_vectors.col(n - 1 - i);
  }
  return out;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite()) {
    throw NumericalError(std::string(what) + ": non-finite matrix entries");
  }
}

}  // namespace detail

// Top-k eigenpairs of the symmetric-definite pencil (G, H):
// G v = lambda H v with V^T H V = I. Cholesky H = L L^T reduces the pencil to
// the standard problem for L^-1 G L^-T. If H fails to factor, a jitter of
// 1e-10 * trace(H) / dim is added once; a second failure is an error naming
// h_name.
template <typename Scalar>
EigPair<Scalar> generalized_eig(const SymMatrix<Scalar>& g,
                                const SymMatrix<Scalar>& h, Index k,
                                const std::string& h_name = "H") {
  const Index n = h.dim();
  if (g.dim() != n) {
    throw ConfigError("generalized_eig: pencil dimensions differ (" +
                      std::to_string(g.dim()) + " vs " + std::to_string(n) +
                      ")");
  }
  if (k < 1 || k > n) {
    throw ConfigError("generalized_eig: k=" + std::to_string(k) +
                      " outside [1, " + std::to_string(n) + "]");
  }
  detail::require_finite(g.matrix(), "generalized_eig");
  detail::require_finite(h.matrix(), "generalized_eig");

  Eigen::LLT<Mat<Scalar>> llt(h.matrix());
  if (llt.info() != Eigen::Success) {
    Scalar jitter = Scalar(1e-10) * h.trace() / Scalar(n);
    if (!(jitter > Scalar(0))) jitter = Scalar(1e-10);
    Mat<Scalar> shifted = h.matrix();
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("generalized_eig: " + h_name +
                           " is not positive definite (Cholesky failed after "
                           "jitter)");
    }
  }
  const auto lower = llt.matrixL();
  Mat<Scalar> half = lower.solve(g.matrix());              // L^-1 G
  Mat<Scalar> reduced = lower.solve(half.transpose());     // L^-1 G L^-T
  reduced = Scalar(0.5) * (reduced + reduced.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(reduced);
  if (es.info() != Eigen::Success) {
    throw NumericalError("generalized_eig: symmetric eigensolver failed");
  }
  EigPair<Scalar> out =
      detail::top_k_descending<Scalar>(es.eigenvalues(), es.eigenvectors(), k);
  out.vectors = llt.matrixU().solve(out.vectors);          // L^-T Y
  detail::canonical_sign(out.vectors);
  return out;
}

// Sum of singular values.
template <typename Derived>
typename Derived::Scalar trace_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(a, "trace_norm");
  if (a.size() == 0) return Scalar(0);
  Eigen::BDCSVD<Mat<Scalar>> svd(a.eval());
  return svd.singularValues().sum();
}

template <typename Derived>
Vec<typename Derived::Scalar> singular_values(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(a, "singular_values");
  if (a.size() == 0) return Vec<Scalar>();
  Eigen::BDCSVD<Mat<Scalar>> svd(a.eval());
  return svd.singularValues();
}

// Count of singular values above tol_rel * sigma_max.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& a,
                     typename Derived::Scalar tol_rel) {
  const auto sv = singular_values(a);
  if (sv.size() == 0) return 0;
  const auto top = sv.maxCoeff();
  if (!(top > 0)) return 0;
  return (sv.array() > tol_rel * top).count();
}

// (A + ridge I)^-1 for ridge > 0; the Moore-Penrose pseudo-inverse with
// cutoff tol * sigma_max when ridge == 0.
template <typename Scalar>
SymMatrix<Scalar> ridge_inverse(const SymMatrix<Scalar>& a, Scalar ridge,
                                Scalar tol = Scalar(1e-10)) {
  if (ridge < Scalar(0)) {
    throw ConfigError("ridge_inverse: negative ridge");
  }
  detail::require_finite(a.matrix(), "ridge_inverse");
  const Index n = a.dim();
  if (ridge > Scalar(0)) {
    Mat<Scalar> shifted = a.matrix();
    shifted.diagonal().array() += ridge;
    Eigen::LLT<Mat<Scalar>> llt(shifted);
    if (llt.info() == Eigen::Success) {
      return SymMatrix<Scalar>::symmetrized(
          llt.solve(Mat<Scalar>::Identity(n, n)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(a.matrix());
  Vec<Scalar> lambda = es.eigenvalues().array() + ridge;
  const Scalar top = lambda.cwiseAbs().maxCoeff();
  Vec<Scalar> inv = Vec<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(lambda(i)) > tol * top) inv(i) = Scalar(1) / lambda(i);
  }
  const Mat<Scalar>& v = es.eigenvectors();
  return SymMatrix<Scalar>::symmetrized(v * inv.asDiagonal() * v.transpose());
}

// Eigenvalues (descending) of D^-1/2 N D^-1/2, where D^-1/2 is the
// pseudo-inverse square root of the PSD matrix D restricted to eigenvalues
// above tol * lambda_max. Returns an empty vector when D vanishes.
template <typename Scalar>
Vec<Scalar> whitened_spectrum(const SymMatrix<Scalar>& d,
                              const SymMatrix<Scalar>& num,
                              Scalar tol = Scalar(1e-10)) {
  if (d.dim() != num.dim()) {
    throw ConfigError("whitened_spectrum: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(d.matrix());
  const Vec<Scalar>& lambda = es.eigenvalues();
  const Scalar top = lambda.size() ? lambda.maxCoeff() : Scalar(0);
  if (!(top > Scalar(0))) return Vec<Scalar>();
  std::vector<Index> keep;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > tol * top) keep.push_back(i);
  }
  Mat<Scalar> w(d.dim(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    w.col(static_cast<Index>(c)) =
        es.eigenvectors().col(keep[c]) / std::sqrt(lambda(keep[c]));
  }
  Mat<Scalar> core = w.transpose() * num.matrix() * w;
  core = Scalar(0.5) * (core + core.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> inner(core,
                                                   Eigen::EigenvaluesOnly);
  return inner.eigenvalues().reverse();
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar frobenius_inner(
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b) {
  return a.cwiseProduct(b).sum();
}

// max_i |KKT violation| of v for min v^T M v - 2 v^T a subject to v >= 0,
// with gradient g = 2 M v - 2 a.
template <typename Scalar>
Scalar qp_kkt_residual(const SymMatrix<Scalar>& m, const Vec<Scalar>& a,
                       const Vec<Scalar>& v) {
  const Vec<Scalar> grad = Scalar(2) * (m.matrix() * v - a);
  Scalar worst = Scalar(0);
  for (Index i = 0; i < v.size(); ++i) {
    worst = std::max(worst, std::max(Scalar(0), -v(i)));
    if (v(i) > Scalar(0)) {
      worst = std::max(worst, std::abs(grad(i)));
    } else {
      worst = std::max(worst, std::max(Scalar(0), -grad(i)));
    }
  }
  return worst;
}

// Largest problem nonneg_qp accepts; the solver enumerates supports.
inline constexpr Index kMaxQpDimension = 16;

// argmin over v >= 0 of v^T M v - 2 v^T a for PSD M.
//
// Every support S is visited in increasing bitmask order. On S the
// stationarity system M_SS u = a_S is solved in the minimum-norm sense and
// kept if it is consistent, non-negative and the complement gradient is
// non-negative. Any such point is a global minimizer; the one with the
// smallest Euclidean norm is returned, which makes the answer unique when the
// minimizer set is a face. No KKT point at all means the objective is
// unbounded below on the orthant.
template <typename Scalar>
Vec<Scalar> nonneg_qp(const SymMatrix<Scalar>& m, const Vec<Scalar>& a) {
  const Index p = m.dim();
  if (a.size() != p) throw ConfigError("nonneg_qp: dimension mismatch");
  if (p < 1) throw ConfigError("nonneg_qp: empty problem");
  if (p > kMaxQpDimension) {
    throw ConfigError("nonneg_qp: at most " + std::to_string(kMaxQpDimension) +
                      " variables supported");
  }
  detail::require_finite(m.matrix(), "nonneg_qp");
  detail::require_finite(a, "nonneg_qp");

  const Scalar scale = std::max<Scalar>(
      {m.matrix().cwiseAbs().maxCoeff(), a.cwiseAbs().maxCoeff(),
       std::numeric_limits<Scalar>::min()});
  const Scalar eq_tol = Scalar(1e-9) * scale;

  bool found = false;
  Vec<Scalar> best = Vec<Scalar>::Zero(p);
  Scalar best_norm = std::numeric_limits<Scalar>::infinity();

  const std::uint32_t count = std::uint32_t{1} << p;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    std::vector<Index> support;
    for (Index i = 0; i < p; ++i) {
      if (mask & (std::uint32_t{1} << i)) support.push_back(i);
    }
    const Index s = static_cast<Index>(support.size());
    Vec<Scalar> u = Vec<Scalar>::Zero(p);
    if (s > 0) {
      Mat<Scalar> mss(s, s);
      Vec<Scalar> as(s);
      for (Index r = 0; r < s; ++r) {
        as(r) = a(support[r]);
        for (Index c = 0; c < s; ++c) mss(r, c) = m(support[r], support[c]);
      }
      Eigen::CompleteOrthogonalDecomposition<Mat<Scalar>> cod(mss);
      const Vec<Scalar> us = cod.solve(as);
      const Scalar mag = std::max<Scalar>(Scalar(1), us.cwiseAbs().maxCoeff());
      if ((mss * us - as).cwiseAbs().maxCoeff() > eq_tol * mag) continue;
      if (us.minCoeff() < -Scalar(1e-12) * mag) continue;
      for (Index r = 0; r < s; ++r) {
        u(support[r]) = std::max(Scalar(0), us(r));
      }
    }
    const Scalar mag = std::max<Scalar>(Scalar(1), u.cwiseAbs().maxCoeff());
    const Vec<Scalar> half_grad = m.matrix() * u - a;
    bool ok = true;
    for (Index i = 0; i < p && ok; ++i) {
      if (!(mask & (std::uint32_t{1} << i)) && half_grad(i) < -eq_tol * mag) {
        ok = false;
      }
    }
    if (!ok) continue;
    const Scalar norm = u.norm();
    if (!found || norm < best_norm * (Scalar(1) - Scalar(1e-12))) {
      found = true;
      best = u;
      best_norm = norm;
    }
  }
  if (!found) {
    throw NumericalError(
        "nonneg_qp: objective is unbounded below on the non-negative orthant");
  }
  return best;
}

}  // namespace cmkl

#endif  // CMKL_NUMERICS_HPP_
