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

#ifndef CMKL_MULTIKERNEL_HPP_
#define CMKL_MULTIKERNEL_HPP_

// Kernel weight strategies and the weighted combination of compressive
// kernels, K_mu = sum_l mu_l K_hat_l.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "cmkl/compression.hpp"
#include "cmkl/dca.hpp"
#include "cmkl/error.hpp"
#include "cmkl/labels.hpp"
#include "cmkl/numerics.hpp"

namespace cmkl {

enum class WeightStrategy { kUniform, kSnr, kAlignment, kUprQp };

inline const char* strategy_name(WeightStrategy s) {
  switch (s) {
    case WeightStrategy::kUniform: return "uniform";
    case WeightStrategy::kSnr: return "snr";
    case WeightStrategy::kAlignment: return "alignment";
    case WeightStrategy::kUprQp: return "upr_qp";
  }
  return "unknown";
}

inline WeightStrategy parse_strategy(const std::string& name) {
  if (name == "uniform") return WeightStrategy::kUniform;
  if (name == "snr") return WeightStrategy::kSnr;
  if (name == "alignment") return WeightStrategy::kAlignment;
  if (name == "upr_qp" || name == "upr") return WeightStrategy::kUprQp;
  throw ConfigError("unknown weight strategy '" + name + "'");
}

template <typename Scalar>
struct WeightVector {
  Vec<Scalar> mu;
  WeightStrategy strategy = WeightStrategy::kUniform;
  Scalar ridge = Scalar(0);  // rho_snr or rho_upr where applicable
};

template <typename Scalar>
struct MultiKernel {
  SymMatrix<Scalar> k_mu;
  WeightVector<Scalar> weights;
  std::vector<Index> ranks;  // Q_l of the components
  std::optional<Mat<Scalar>> cross;
};

// How the trace norm of the ratio matrix is evaluated.
//   kCongruent:  eigenvalues of D^-1/2 N D^-1/2 (PSD, trace norm = trace).
//   kProductSvd: singular values of pinv(D) N as written; for comparison.
enum class RatioForm { kCongruent, kProductSvd };

// Spectrum of (K_hat^2 + rho K_hat)^-1/2 K_hat_B (K_hat^2 + rho K_hat)^-1/2,
// descending. K_hat^2 + rho K_hat shares eigenvectors with K_hat, so its
// square root is formed from the eigenvalues of K_hat directly; eigenvalues
// of K_hat at or below tol * max are treated as zero.
template <typename Scalar>
Vec<Scalar> snr_spectrum(const CompressiveKernel<Scalar>& k, Scalar rho_snr,
                         Scalar tol = Scalar(1e-10)) {
  if (rho_snr < Scalar(0)) throw ConfigError("snr: negative ridge");
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(k.k_hat.matrix());
  const Vec<Scalar>& lambda = es.eigenvalues();
  const Scalar top = lambda.size() ? lambda.maxCoeff() : Scalar(0);
  if (!(top > Scalar(0))) return Vec<Scalar>();
  std::vector<Index> keep;
  for (Index i = lambda.size() - 1; i >= 0; --i) {
    if (lambda(i) > tol * top) keep.push_back(i);
  }
  Mat<Scalar> whiten(k.size(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const Scalar l = lambda(keep[c]);
    whiten.col(static_cast<Index>(c)) =
        es.eigenvectors().col(keep[c]) / std::sqrt(l * l + rho_snr * l);
  }
  Mat<Scalar> core = whiten.transpose() * k.k_hat_between.matrix() * whiten;
  core = Scalar(0.5) * (core + core.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> inner(core,
                                                   Eigen::EigenvaluesOnly);
  return inner.eigenvalues().reverse();
}

// Trace norm of the ridged, whitened between-class matrix of one
// compressive kernel.
template <typename Scalar>
Scalar snr_score(const CompressiveKernel<Scalar>& k, Scalar rho_snr,
                 RatioForm form = RatioForm::kCongruent,
                 Scalar tol = Scalar(1e-10)) {
  if (form == RatioForm::kCongruent) {
    const Vec<Scalar> spectrum = snr_spectrum(k, rho_snr, tol);
    if (spectrum.size() == 0) return Scalar(0);
    return trace_norm(Mat<Scalar>(spectrum.asDiagonal()));
  }
  const Mat<Scalar>& kh = k.k_hat.matrix();
  const SymMatrix<Scalar> denom =
      SymMatrix<Scalar>::symmetrized(kh * kh + rho_snr * kh);
  const SymMatrix<Scalar> inv = ridge_inverse(denom, Scalar(0), tol);
  return trace_norm(inv.matrix() * k.k_hat_between.matrix());
}

template <typename Scalar>
WeightVector<Scalar> weights_uniform(Index p) {
  if (p < 1) throw ConfigError("weights_uniform: need at least one kernel");
  WeightVector<Scalar> w;
  w.mu = Vec<Scalar>::Constant(p, Scalar(1) / Scalar(p));
  w.strategy = WeightStrategy::kUniform;
  return w;
}

// mu = scores / |scores|_2.
template <typename Scalar>
WeightVector<Scalar> weights_snr(const Vec<Scalar>& scores,
                                 Scalar rho_snr = Scalar(0)) {
  if (scores.size() < 1) throw ConfigError("weights_snr: no scores");
  if (!scores.allFinite() || scores.minCoeff() < Scalar(0)) {
    throw ConfigError("weights_snr: scores must be finite and non-negative");
  }
  const Scalar norm = scores.norm();
  if (!(norm > Scalar(0))) {
    throw NumericalError("weights_snr: every kernel has zero SNR");
  }
  WeightVector<Scalar> w;
  w.mu = scores / norm;
  w.strategy = WeightStrategy::kSnr;
  w.ridge = rho_snr;
  return w;
}

namespace detail {

template <typename Scalar>
std::vector<const SymMatrix<Scalar>*> kernel_refs(
    const std::vector<CompressiveKernel<Scalar>>& kernels) {
  std::vector<const SymMatrix<Scalar>*> out;
  out.reserve(kernels.size());
  for (const auto& k : kernels) out.push_back(&k.k_hat);
  return out;
}

template <typename Scalar>
std::vector<const SymMatrix<Scalar>*> kernel_refs(
    const std::vector<SymMatrix<Scalar>>& kernels) {
  std::vector<const SymMatrix<Scalar>*> out;
  out.reserve(kernels.size());
  for (const auto& k : kernels) out.push_back(&k);
  return out;
}

template <typename Scalar>
void check_same_size(const std::vector<const SymMatrix<Scalar>*>& ks,
                     const char* who) {
  for (const auto* k : ks) {
    if (k->dim() != ks.front()->dim()) {
      throw ConfigError(std::string(who) + ": kernel sizes differ");
    }
  }
}

// trace(Y^T K Y) for the class-indicator matrix Y of y.
template <typename Scalar>
Scalar label_quadratic(const SymMatrix<Scalar>& k, const Labels& y) {
  if (static_cast<Index>(y.size()) != k.dim()) {
    throw ConfigError("label vector length does not match kernel size");
  }
  const Mat<Scalar> ind = indicator<Scalar>(y, num_classes(y));
  return (ind.transpose() * k.matrix() * ind).trace();
}

template <typename Scalar>
WeightVector<Scalar> normalized_qp_weights(const Vec<Scalar>& v,
                                           WeightStrategy strategy,
                                           const char* who) {
  const Scalar norm = v.norm();
  if (!(norm > Scalar(0))) {
    throw NumericalError(std::string(who) +
                         ": no kernel has a positive target alignment");
  }
  WeightVector<Scalar> w;
  w.mu = v / norm;
  w.strategy = strategy;
  return w;
}

template <typename Scalar>
WeightVector<Scalar> alignment_impl(
    const std::vector<const SymMatrix<Scalar>*>& ks, const Labels& y_u) {
  const Index p = static_cast<Index>(ks.size());
  if (p < 2) throw ConfigError("weights_alignment: need at least 2 kernels");
  check_same_size(ks, "weights_alignment");
  Mat<Scalar> gram(p, p);
  Vec<Scalar> target(p);
  for (Index a = 0; a < p; ++a) {
    target(a) = label_quadratic(*ks[a], y_u);
    for (Index b = 0; b <= a; ++b) {
      gram(a, b) = frobenius_inner(ks[a]->matrix(), ks[b]->matrix());
    }
  }
  const Vec<Scalar> v =
      nonneg_qp(SymMatrix<Scalar>::from_lower(gram), target);
  return normalized_qp_weights(v, WeightStrategy::kAlignment,
                               "weights_alignment");
}

template <typename Scalar>
WeightVector<Scalar> upr_qp_impl(
    const std::vector<const SymMatrix<Scalar>*>& ks, const Labels& y_u,
    const Labels& y_p) {
  const Index p = static_cast<Index>(ks.size());
  if (p < 1) throw ConfigError("weights_upr_qp: no kernels");
  check_same_size(ks, "weights_upr_qp");
  Vec<Scalar> a_u(p);
  Vec<Scalar> a_p(p);
  for (Index l = 0; l < p; ++l) {
    a_u(l) = label_quadratic(*ks[l], y_u);
    a_p(l) = label_quadratic(*ks[l], y_p);
    if (!(a_p(l) > Scalar(0))) {
      throw NumericalError("weights_upr_qp: privacy alignment of kernel " +
                           std::to_string(l) + " is not positive");
    }
  }
  const Mat<Scalar> col = a_p;
  const Vec<Scalar> v = nonneg_qp(SymMatrix<Scalar>::outer(col), a_u);
  return normalized_qp_weights(v, WeightStrategy::kUprQp, "weights_upr_qp");
}

}  // namespace detail

// Centered-alignment maximization: v = argmin_{v>=0} v^T M v - 2 v^T a with
// M_kl = <K_k, K_l>_F and a_k = <K_k, Y Y^T>_F, then mu = v / |v|_2.
template <typename Scalar>
WeightVector<Scalar> weights_alignment(
    const std::vector<CompressiveKernel<Scalar>>& kernels, const Labels& y_u) {
  return detail::alignment_impl(detail::kernel_refs(kernels), y_u);
}

template <typename Scalar>
WeightVector<Scalar> weights_alignment(
    const std::vector<SymMatrix<Scalar>>& kernels, const Labels& y_u) {
  return detail::alignment_impl(detail::kernel_refs(kernels), y_u);
}

// Utility-to-privacy alignment ratio: v = argmin_{v>=0}
// v^T a_p a_p^T v - 2 v^T a_u with a_u,l = trace(Y_u^T K_l Y_u) and
// a_p,l = trace(Y_p^T K_l Y_p); mu = v / |v|_2. a_p must be positive.
template <typename Scalar>
WeightVector<Scalar> weights_upr_qp(
    const std::vector<CompressiveKernel<Scalar>>& kernels, const Labels& y_u,
    const Labels& y_p) {
  return detail::upr_qp_impl(detail::kernel_refs(kernels), y_u, y_p);
}

template <typename Scalar>
WeightVector<Scalar> weights_upr_qp(
    const std::vector<SymMatrix<Scalar>>& kernels, const Labels& y_u,
    const Labels& y_p) {
  return detail::upr_qp_impl(detail::kernel_refs(kernels), y_u, y_p);
}

// Spectrum of (K_B_P + rho K)^-1/2 K_B_U (K_B_P + rho K)^-1/2 for a centered
// kernel K (a centered Gram or a compressive kernel).
template <typename Scalar>
Vec<Scalar> upr_spectrum(const SymMatrix<Scalar>& k, const Labels& y_u,
                         const Labels& y_p, Scalar rho_upr,
                         Scalar tol = Scalar(1e-10)) {
  if (rho_upr < Scalar(0)) throw ConfigError("upr: negative ridge");
  const SymMatrix<Scalar> utility = between_class_kernel(k, y_u);
  const SymMatrix<Scalar> privacy = between_class_kernel(k, y_p);
  const SymMatrix<Scalar> denom = privacy + k.scaled(rho_upr);
  return whitened_spectrum(denom, utility, tol);
}

template <typename Scalar>
Scalar upr_trace(const SymMatrix<Scalar>& k, const Labels& y_u,
                 const Labels& y_p, Scalar rho_upr,
                 RatioForm form = RatioForm::kCongruent,
                 Scalar tol = Scalar(1e-10)) {
  if (form == RatioForm::kCongruent) {
    const Vec<Scalar> spectrum = upr_spectrum(k, y_u, y_p, rho_upr, tol);
    if (spectrum.size() == 0) return Scalar(0);
    return trace_norm(Mat<Scalar>(spectrum.asDiagonal()));
  }
  const SymMatrix<Scalar> utility = between_class_kernel(k, y_u);
  const SymMatrix<Scalar> privacy = between_class_kernel(k, y_p);
  const SymMatrix<Scalar> inv =
      ridge_inverse(privacy + k.scaled(rho_upr), Scalar(0), tol);
  return trace_norm(inv.matrix() * utility.matrix());
}

namespace detail {

template <typename Scalar>
void check_weights(Index p, const WeightVector<Scalar>& w, const char* who) {
  if (w.mu.size() != p) {
    throw ConfigError(std::string(who) + ": " + std::to_string(w.mu.size()) +
                      " weights for " + std::to_string(p) + " kernels");
  }
}

}  // namespace detail

// Weighted sum in index order.
template <typename Scalar>
MultiKernel<Scalar> combine(const std::vector<CompressiveKernel<Scalar>>& ks,
                            const WeightVector<Scalar>& w) {
  const Index p = static_cast<Index>(ks.size());
  if (p < 1) throw ConfigError("combine: no kernels");
  detail::check_weights(p, w, "combine");
  const Index n = ks.front().size();
  Mat<Scalar> sum = Mat<Scalar>::Zero(n, n);
  MultiKernel<Scalar> out;
  for (Index l = 0; l < p; ++l) {
    if (ks[l].size() != n) throw ConfigError("combine: kernel sizes differ");
    sum += w.mu(l) * ks[l].k_hat.matrix();
    out.ranks.push_back(ks[l].q);
  }
  out.k_mu = SymMatrix<Scalar>::from_lower(sum);
  out.weights = w;
  return out;
}

template <typename Scalar>
Mat<Scalar> combine_cross(const std::vector<Mat<Scalar>>& crosses,
                          const WeightVector<Scalar>& w) {
  const Index p = static_cast<Index>(crosses.size());
  if (p < 1) throw ConfigError("combine_cross: no kernels");
  detail::check_weights(p, w, "combine_cross");
  Mat<Scalar> sum =
      Mat<Scalar>::Zero(crosses.front().rows(), crosses.front().cols());
  for (Index l = 0; l < p; ++l) {
    if (crosses[l].rows() != sum.rows() || crosses[l].cols() != sum.cols()) {
      throw ConfigError("combine_cross: cross-kernel shapes differ");
    }
    sum += w.mu(l) * crosses[l];
  }
  return sum;
}

}  // namespace cmkl

#endif  // CMKL_MULTIKERNEL_HPP_
