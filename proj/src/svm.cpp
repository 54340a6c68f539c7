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

#include "cmkl/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "cmkl/error.hpp"

namespace cmkl {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

BinarySvm fit_binary_svm(const SymMatrix<double>& k,
                         const std::vector<int>& signs, double c,
                         const SvmOptions& options) {
  const Index n = k.dim();
  if (static_cast<Index>(signs.size()) != n) {
    throw ConfigError("fit_binary_svm: label count does not match kernel");
  }
  if (!(c > 0.0)) throw ConfigError("fit_binary_svm: C must be positive");
  const MatrixXd& km = k.matrix();
  VectorXd y(n);
  for (Index i = 0; i < n; ++i) {
    if (signs[i] != 1 && signs[i] != -1) {
      throw ConfigError("fit_binary_svm: labels must be +1 or -1");
    }
    y(i) = signs[i];
  }

  VectorXd alpha = VectorXd::Zero(n);
  VectorXd grad = VectorXd::Constant(n, -1.0);  // Q alpha - e
  const VectorXd diag = km.diagonal();
  const long max_iter =
      options.max_iterations > 0
          ? options.max_iterations
          : std::max<long>(10000000L, 100L * static_cast<long>(n));

  auto upper = [&](Index t) { return alpha(t) >= c; };
  auto lower = [&](Index t) { return alpha(t) <= 0.0; };

  long iter = 0;
  for (; iter < max_iter; ++iter) {
    // i: most violating index in I_up.
    double gmax = -kInf;
    Index i = -1;
    for (Index t = 0; t < n; ++t) {
      if (y(t) > 0) {
        if (!upper(t) && -grad(t) >= gmax) { gmax = -grad(t); i = t; }
      } else {
        if (!lower(t) && grad(t) >= gmax) { gmax = grad(t); i = t; }
      }
    }
    if (i < 0) break;
    const auto ki = km.col(i);

    double gmax2 = -kInf;
    Index j_first = -1;
    Index j_second = -1;
    double best_obj = kInf;
    for (Index t = 0; t < n; ++t) {
      double viol;
      if (y(t) > 0) {
        if (lower(t)) continue;
        viol = grad(t);
      } else {
        if (upper(t)) continue;
        viol = -grad(t);
      }
      if (viol >= gmax2) { gmax2 = viol; j_first = t; }
      const double grad_diff = gmax + viol;
      if (grad_diff > 0.0) {
        double quad = diag(i) + diag(t) - 2.0 * ki(t);
        if (quad <= 0.0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj <= best_obj) { best_obj = obj; j_second = t; }
      }
    }
    if (gmax + gmax2 < options.tolerance) break;
    const Index j = options.rule == WorkingSetRule::kSecondOrder ? j_second
                                                                 : j_first;
    if (j < 0 || j == i) break;
    const auto kj = km.col(j);

    const double old_i = alpha(i);
    const double old_j = alpha(j);
    const double qij = y(i) * y(j) * ki(j);
    if (y(i) != y(j)) {
      double quad = diag(i) + diag(j) + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0.0) {
        if (alpha(j) < 0.0) { alpha(j) = 0.0; alpha(i) = diff; }
      } else {
        if (alpha(i) < 0.0) { alpha(i) = 0.0; alpha(j) = -diff; }
      }
      if (diff > 0.0) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = c - diff; }
      } else {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = c + diff; }
      }
    } else {
      double quad = diag(i) + diag(j) - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = sum - c; }
      } else {
        if (alpha(j) < 0.0) { alpha(j) = 0.0; alpha(i) = sum; }
      }
      if (sum > c) {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = sum - c; }
      } else {
        if (alpha(i) < 0.0) { alpha(i) = 0.0; alpha(j) = sum; }
      }
    }
    const double di = (alpha(i) - old_i) * y(i);
    const double dj = (alpha(j) - old_j) * y(j);
    // grad_t += y_t (K_ti di + K_tj dj)
    grad.array() += y.array() * (di * ki.array() + dj * kj.array());
  }

  // Bias from free vectors, else the midpoint of the feasible interval.
  double ub = kInf;
  double lb = -kInf;
  double free_sum = 0.0;
  long free_count = 0;
  for (Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (upper(t)) {
      if (y(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho =
      free_count > 0 ? free_sum / static_cast<double>(free_count)
                     : 0.5 * (ub + lb);

  BinarySvm out;
  out.alpha = alpha;
  out.coef = alpha.cwiseProduct(y);
  out.bias = -rho;
  out.iterations = iter;
  return out;
}

std::uint64_t kernel_fingerprint(const MatrixXd& k) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t rows = k.rows();
  const std::int64_t cols = k.cols();
  mix(&rows, sizeof rows);
  mix(&cols, sizeof cols);
  mix(k.data(), static_cast<std::size_t>(k.size()) * sizeof(double));
  return h;
}

SvmModel fit_svm(const SymMatrix<double>& k_train, const Labels& y, double c,
                 const SvmOptions& options) {
  if (static_cast<Index>(y.size()) != k_train.dim()) {
    throw ConfigError("fit_svm: label count does not match kernel");
  }
  if (!(c > 0.0)) throw ConfigError("fit_svm: C must be positive");
  const std::set<int> distinct(y.begin(), y.end());
  if (distinct.size() < 2) {
    throw ConfigError("fit_svm: need at least two classes");
  }
  SvmModel model;
  model.classes_.assign(distinct.begin(), distinct.end());
  model.c_ = c;
  model.fingerprint_ = kernel_fingerprint(k_train.matrix());
  model.n_train_ = k_train.dim();

  if (options.multiclass == Multiclass::kOneVsOne &&
      model.classes_.size() > 2) {
    for (std::size_t a = 0; a < model.classes_.size(); ++a) {
      for (std::size_t b = a + 1; b < model.classes_.size(); ++b) {
        std::vector<Index> rows;
        std::vector<int> signs;
        for (std::size_t i = 0; i < y.size(); ++i) {
          if (y[i] == model.classes_[a] || y[i] == model.classes_[b]) {
            rows.push_back(static_cast<Index>(i));
            signs.push_back(y[i] == model.classes_[a] ? 1 : -1);
          }
        }
        const SymMatrix<double> block(k_train.matrix()(rows, rows));
        model.machines_.push_back(fit_binary_svm(block, signs, c, options));
        model.members_.push_back(std::move(rows));
        model.pairs_.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
    return model;
  }

  const std::size_t machines = model.classes_.size() == 2
                                   ? 1
                                   : model.classes_.size();
  std::vector<int> signs(y.size());
  for (std::size_t m = 0; m < machines; ++m) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      signs[i] = y[i] == model.classes_[m] ? 1 : -1;
    }
    model.machines_.push_back(fit_binary_svm(k_train, signs, c, options));
  }
  return model;
}

MatrixXd SvmModel::decision_values(const MatrixXd& k_cross) const {
  if (k_cross.rows() != n_train_) {
    throw ConfigError("decision_values: cross-kernel has " +
                      std::to_string(k_cross.rows()) + " rows, model " +
                      std::to_string(n_train_));
  }
  const Index classes = static_cast<Index>(classes_.size());
  MatrixXd out(k_cross.cols(), classes);
  if (!pairs_.empty()) {
    out.setZero();
    for (std::size_t m = 0; m < machines_.size(); ++m) {
      const VectorXd f =
          k_cross(members_[m], Eigen::all).transpose() *
              machines_[m].coef +
          VectorXd::Constant(k_cross.cols(), machines_[m].bias);
      for (Index t = 0; t < f.size(); ++t) {
        out(t, f(t) >= 0.0 ? pairs_[m].first : pairs_[m].second) += 1.0;
      }
    }
    return out;
  }
  if (classes == 2) {
    const BinarySvm& m = machines_.front();
    VectorXd f = k_cross.transpose() * m.coef;
    f.array() += m.bias;
    out.col(0) = f;
    out.col(1) = -f;
    return out;
  }
  for (Index l = 0; l < classes; ++l) {
    const BinarySvm& m = machines_[static_cast<std::size_t>(l)];
    out.col(l) = k_cross.transpose() * m.coef;
    out.col(l).array() += m.bias;
  }
  return out;
}

Index argmax_lowest(const Eigen::Ref<const VectorXd>& values) {
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = i;
  }
  return best;
}

Labels predict(const SvmModel& model, const MatrixXd& k_cross,
               std::uint64_t train_fingerprint) {
  if (train_fingerprint != model.fingerprint()) {
    throw ConfigError("predict: kernel fingerprint does not match the model");
  }
  const MatrixXd values = model.decision_values(k_cross);
  Labels out(static_cast<std::size_t>(values.rows()));
  for (Index r = 0; r < values.rows(); ++r) {
    out[static_cast<std::size_t>(r)] =
        model.classes()[static_cast<std::size_t>(
            argmax_lowest(values.row(r).transpose()))];
  }
  return out;
}

double accuracy(const Labels& predicted, const Labels& truth) {
  if (predicted.size() != truth.size()) {
    throw ConfigError("accuracy: length mismatch");
  }
  if (truth.empty()) throw ConfigError("accuracy: empty label vectors");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace cmkl
