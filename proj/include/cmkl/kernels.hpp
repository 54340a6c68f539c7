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

#ifndef CMKL_KERNELS_HPP_
#define CMKL_KERNELS_HPP_

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "cmkl/error.hpp"
#include "cmkl/numerics.hpp"

namespace cmkl {

enum class KernelKind { kLinear, kPolynomial, kRbf, kLaplacian, kSigmoid };

// linear      x.y
// polynomial  (gamma x.y + c0)^degree
// rbf         exp(-gamma |x - y|_2^2)
// laplacian   exp(-gamma |x - y|_1)
// sigmoid     tanh(gamma x.y + c0)
struct KernelSpec {
  KernelKind kind = KernelKind::kRbf;
  double gamma = 1.0;
  int degree = 1;
  double c0 = 0.0;

  // Throws ConfigError unless gamma > 0 (where used) and degree >= 1.
  void validate() const {
    if (kind != KernelKind::kLinear && !(gamma > 0.0)) {
      throw ConfigError("kernel gamma must be positive");
    }
    if (kind == KernelKind::kPolynomial && degree < 1) {
      throw ConfigError("polynomial degree must be >= 1");
    }
  }

  // Positive-definite-symmetric kinds; sigmoid is indefinite in general.
  bool is_pds() const {
    return kind != KernelKind::kSigmoid &&
           !(kind == KernelKind::kPolynomial && c0 < 0.0);
  }
};

inline const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::kLinear: return "linear";
    case KernelKind::kPolynomial: return "polynomial";
    case KernelKind::kRbf: return "rbf";
    case KernelKind::kLaplacian: return "laplacian";
    case KernelKind::kSigmoid: return "sigmoid";
  }
  return "unknown";
}

inline KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "linear") return KernelKind::kLinear;
  if (name == "polynomial" || name == "poly") return KernelKind::kPolynomial;
  if (name == "rbf" || name == "gaussian") return KernelKind::kRbf;
  if (name == "laplacian") return KernelKind::kLaplacian;
  if (name == "sigmoid") return KernelKind::kSigmoid;
  throw ConfigError("unknown kernel kind '" + name + "'");
}

// Short label such as "rbf(gamma=0.01)".
inline std::string to_string(const KernelSpec& spec) {
  std::ostringstream os;
  os << kernel_kind_name(spec.kind);
  switch (spec.kind) {
    case KernelKind::kLinear:
      break;
    case KernelKind::kPolynomial:
      os << "(gamma=" << spec.gamma << ",degree=" << spec.degree
         << ",c0=" << spec.c0 << ")";
      break;
    case KernelKind::kSigmoid:
      os << "(gamma=" << spec.gamma << ",c0=" << spec.c0 << ")";
      break;
    default:
      os << "(gamma=" << spec.gamma << ")";
  }
  return os.str();
}

// Parses "kind[:key=value,...]", e.g. "polynomial:gamma=1,degree=3,c0=1".
inline KernelSpec parse_kernel_spec(const std::string& text) {
  KernelSpec spec;
  const auto colon = text.find(':');
  spec.kind = parse_kernel_kind(text.substr(0, colon));
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("kernel parameter '" + item + "' is not key=value");
      }
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      try {
        if (key == "gamma") {
          spec.gamma = std::stod(value);
        } else if (key == "degree" || key == "p") {
          spec.degree = std::stoi(value);
        } else if (key == "c0") {
          spec.c0 = std::stod(value);
        } else {
          throw ConfigError("unknown kernel parameter '" + key + "'");
        }
      } catch (const std::logic_error&) {
        throw ConfigError("bad value for kernel parameter '" + key + "'");
      }
    }
  }
  spec.validate();
  return spec;
}

template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar eval_kernel(const KernelSpec& spec,
                                      const Eigen::MatrixBase<DerivedX>& x,
                                      const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  if (x.size() != y.size()) {
    throw ConfigError("eval_kernel: dimension mismatch (" +
                      std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  }
  const Scalar gamma = static_cast<Scalar>(spec.gamma);
  const Scalar c0 = static_cast<Scalar>(spec.c0);
  switch (spec.kind) {
    case KernelKind::kLinear:
      return x.cwiseProduct(y).sum();
    case KernelKind::kPolynomial:
      return std::pow(gamma * x.cwiseProduct(y).sum() + c0, spec.degree);
    case KernelKind::kRbf:
      return std::exp(-gamma * (x - y).squaredNorm());
    case KernelKind::kLaplacian:
      return std::exp(-gamma * (x - y).template lpNorm<1>());
    case KernelKind::kSigmoid:
      return std::tanh(gamma * x.cwiseProduct(y).sum() + c0);
  }
  return Scalar(0);
}

enum class GramState { kRaw, kCentered, kNormalized };

// Row means and grand mean of a raw training Gram, kept for centering
// kernel columns of unseen samples.
template <typename Scalar>
struct CenteringStats {
  Vec<Scalar> row_means;
  Scalar grand_mean = Scalar(0);
};

template <typename Scalar>
class GramMatrix {
 public:
  GramMatrix() = default;
  GramMatrix(SymMatrix<Scalar> k, GramState state,
             std::optional<CenteringStats<Scalar>> stats = std::nullopt,
             Scalar scale = Scalar(1))
      : k_(std::move(k)), state_(state), stats_(std::move(stats)),
        scale_(scale) {}

  const SymMatrix<Scalar>& sym() const { return k_; }
  const Mat<Scalar>& matrix() const { return k_.matrix(); }
  Index size() const { return k_.dim(); }
  GramState state() const { return state_; }
  bool centered() const { return state_ != GramState::kRaw; }
  const std::optional<CenteringStats<Scalar>>& stats() const { return stats_; }
  // Divisor applied by trace normalization (1 before normalization).
  Scalar scale() const { return scale_; }

 private:
  SymMatrix<Scalar> k_;
  GramState state_ = GramState::kRaw;
  std::optional<CenteringStats<Scalar>> stats_;
  Scalar scale_ = Scalar(1);
};

// Raw Gram over the rows of x (samples as rows). One triangle is evaluated
// and mirrored, so the result is exactly symmetric.
template <typename Derived>
GramMatrix<typename Derived::Scalar> gram(const KernelSpec& spec,
                                          const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  spec.validate();
  const Index n = x.rows();
  if (n < 2) throw ConfigError("gram: need at least 2 samples");
  Mat<Scalar> k(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      k(i, j) = eval_kernel(spec, x.row(i), x.row(j));
    }
  }
  return GramMatrix<Scalar>(SymMatrix<Scalar>::from_lower(k), GramState::kRaw);
}

// Raw cross-kernel: out(i, j) = k(train_i, test_j).
template <typename DerivedA, typename DerivedB>
Mat<typename DerivedA::Scalar> cross_gram(
    const KernelSpec& spec, const Eigen::MatrixBase<DerivedA>& train,
    const Eigen::MatrixBase<DerivedB>& test) {
  spec.validate();
  if (train.cols() != test.cols()) {
    throw ConfigError("cross_gram: feature dimension mismatch");
  }
  Mat<typename DerivedA::Scalar> out(train.rows(), test.rows());
  for (Index j = 0; j < test.rows(); ++j) {
    for (Index i = 0; i < train.rows(); ++i) {
      out(i, j) = eval_kernel(spec, train.row(i), test.row(j));
    }
  }
  return out;
}

// C_N K C_N by mean subtraction: K_ij - r_i - r_j + g.
template <typename Scalar>
GramMatrix<Scalar> center_gram(const GramMatrix<Scalar>& raw) {
  if (raw.state() != GramState::kRaw) {
    throw ConfigError("center_gram: matrix is already centered");
  }
  const Mat<Scalar>& k = raw.matrix();
  const Index n = k.rows();
  CenteringStats<Scalar> stats;
  stats.row_means = k.rowwise().mean();
  stats.grand_mean = stats.row_means.mean();
  Mat<Scalar> out(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      out(i, j) = k(i, j) - stats.row_means(i) - stats.row_means(j) +
                  stats.grand_mean;
    }
  }
  return GramMatrix<Scalar>(SymMatrix<Scalar>::from_lower(out),
                            GramState::kCentered, std::move(stats));
}

// Centers raw cross-kernel columns (N_train x N_test) against the training
// statistics: kbar_j[i] = k_j[i] - mean(k_j) - r_i + g.
template <typename Derived, typename Scalar>
Mat<Scalar> center_cross(const Eigen::MatrixBase<Derived>& k_cross,
                         const std::optional<CenteringStats<Scalar>>& stats) {
  if (!stats) throw ConfigError("center_cross: centering statistics missing");
  const Index n = stats->row_means.size();
  if (k_cross.rows() != n) {
    throw ConfigError("center_cross: cross-kernel has " +
                      std::to_string(k_cross.rows()) + " rows, training set " +
                      std::to_string(n));
  }
  Mat<Scalar> out = k_cross;
  const Vec<Scalar> col_means = out.colwise().mean().transpose();
  for (Index j = 0; j < out.cols(); ++j) {
    out.col(j).array() -= col_means(j);
    out.col(j) -= stats->row_means;
    out.col(j).array() += stats->grand_mean;
  }
  return out;
}

template <typename Derived, typename Scalar>
Mat<Scalar> center_cross(const Eigen::MatrixBase<Derived>& k_cross,
                         const CenteringStats<Scalar>& stats) {
  return center_cross(k_cross, std::optional<CenteringStats<Scalar>>(stats));
}

// Divides every entry by the trace so the result has unit trace.
template <typename Scalar>
GramMatrix<Scalar> normalize_trace(const GramMatrix<Scalar>& k) {
  if (!k.centered()) {
    throw ConfigError("normalize_trace: matrix must be centered first");
  }
  const Scalar tr = k.sym().trace();
  if (!(tr > Scalar(1e-14) * Scalar(k.size()))) {
    throw NumericalError("normalize_trace: degenerate kernel (trace " +
                         std::to_string(static_cast<double>(tr)) + ")");
  }
  return GramMatrix<Scalar>(k.sym().scaled(Scalar(1) / tr),
                            GramState::kNormalized, k.stats(),
                            k.scale() * tr);
}

}  // namespace cmkl

#endif  // CMKL_KERNELS_HPP_
