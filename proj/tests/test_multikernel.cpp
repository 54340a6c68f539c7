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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cmkl/compression.hpp"
#include "cmkl/dca.hpp"
#include "cmkl/error.hpp"
#include "cmkl/kernels.hpp"
#include "cmkl/multikernel.hpp"
#include "oracles.hpp"

namespace cmkl {
namespace {

using Sym = SymMatrix<double>;

KernelSpec rbf(double gamma) {
  KernelSpec s;
  s.kind = KernelKind::kRbf;
  s.gamma = gamma;
  return s;
}

// Compressive kernel from an arbitrary projection.
CompressiveKernel<double> from_projection(const MatrixXd& x, const Labels& y,
                                          const KernelSpec& spec,
                                          const MatrixXd& a) {
  const GramMatrix<double> k = center_gram(gram(spec, x));
  return compress(k, a, between_class_kernel(k.sym(), y), spec);
}

CompressiveKernel<double> fitted(const MatrixXd& x, const Labels& y,
                                 const KernelSpec& spec, Index q) {
  const GramMatrix<double> k = center_gram(gram(spec, x));
  const Sym kb = between_class_kernel(k.sym(), y);
  const DcaModel<double> m = fit_kdca(k, y, kb, q, 10.0, 1e-4);
  return compress(k, m.projection, kb, spec);
}

// Fisher score of explicit features phi (rows are samples).
double intrinsic_score(const MatrixXd& phi, const Labels& y, double rho) {
  const oracle::Scatter s = oracle::scatter(phi, y);
  const MatrixXd h =
      s.total + rho * MatrixXd::Identity(phi.cols(), phi.cols());
  return (h.inverse() * s.between).trace();
}

const Labels kYu = {0, 0, 1, 1};
const Labels kYp = {0, 1, 0, 1};

MatrixXd block(const Labels& y) {
  const MatrixXd ind = oracle::indicator(y);
  return ind * ind.transpose();
}

// K = a B_u + b B_p + c I has (a_u, a_p) = (8a + 4b + 4c, 4a + 8b + 4c).
Sym mixed(double a, double b, double c) {
  return Sym::symmetrized(a * block(kYu) + b * block(kYp) +
                          c * MatrixXd::Identity(4, 4));
}

TEST(Snr, ZeroWhenClassMeansCoincide) {
  MatrixXd x(8, 2);
  x << 1, 0, -1, 0, 2, 0, -2, 0, 0, 1, 0, -1, 0, 3, 0, -3;
  const Labels y = {0, 0, 0, 0, 1, 1, 1, 1};
  KernelSpec lin;
  lin.kind = KernelKind::kLinear;
  const CompressiveKernel<double> k =
      from_projection(x, y, lin, oracle::gaussian(8, 3, 1));
  EXPECT_NEAR(snr_score(k, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(snr_score(k, 0.1), 0.0, 1e-12);
}

TEST(Snr, InvariantToNormalizationWithoutRidge) {
  const Labels y = oracle::labels(40, 4, 2);
  const MatrixXd x = oracle::blobs(y, 3, 1.5, 3);
  const CompressiveKernel<double> k = fitted(x, y, rbf(0.3), 3);
  const double raw = snr_score(k, 0.0);
  EXPECT_NEAR(snr_score(normalize(k), 0.0), raw, 1e-8 * raw);
  CompressiveKernel<double> doubled = k;
  doubled.k_hat = k.k_hat.scaled(7.0);
  doubled.k_hat_between = k.k_hat_between.scaled(49.0);
  EXPECT_NEAR(snr_score(doubled, 0.0), raw, 1e-8 * raw);
}

TEST(Snr, MatchesFisherScoreOfCompressedFeatures) {
  for (std::uint64_t seed = 4; seed < 7; ++seed) {
    const Labels y = oracle::labels(30, 3, seed);
    const MatrixXd x = oracle::blobs(y, 3, 1.0, seed + 10);
    const MatrixXd a = oracle::gaussian(30, 6, seed + 20) * 0.01;
    const CompressiveKernel<double> k = from_projection(x, y, rbf(0.2), a);
    for (double rho : {0.0, 0.1, 1.0}) {
      const double ref = intrinsic_score(k.factor, y, rho);
      EXPECT_NEAR(snr_score(k, rho), ref, 1e-6 * std::max(1.0, ref))
          << "rho=" << rho;
    }
  }
}

TEST(Snr, LinearKernelWithFullProjection) {
  const Labels y = oracle::labels(12, 3, 7);
  const MatrixXd x = oracle::blobs(y, 3, 1.0, 8);
  KernelSpec lin;
  lin.kind = KernelKind::kLinear;
  const MatrixXd a = oracle::gaussian(12, 11, 9);
  const CompressiveKernel<double> k = from_projection(x, y, lin, a);
  // The compressed features are a linear image of the centered data.
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const MatrixXd xbar = x.rowwise() - mean;
  const MatrixXd phi = xbar * (xbar.transpose() * a);
  EXPECT_NEAR(snr_score(k, 0.5), intrinsic_score(phi, y, 0.5), 1e-6);
}

TEST(Snr, CongruentSpectrumBounds) {
  const Labels y = oracle::labels(50, 4, 11);
  const MatrixXd x = oracle::blobs(y, 4, 1.0, 12);
  const CompressiveKernel<double> k =
      from_projection(x, y, rbf(0.2), oracle::gaussian(50, 10, 13));
  const VectorXd s = snr_spectrum(k, 0.0);
  EXPECT_GE(s.minCoeff(), -1e-10);
  EXPECT_LE(s.maxCoeff(), 1.0 + 1e-8);
  Index above = 0;
  for (Index i = 0; i < s.size(); ++i) above += s(i) > 1e-8;
  EXPECT_LE(above, 3);
}

TEST(Snr, ProductFormBoundsCongruentForm) {
  const Labels y = oracle::labels(40, 3, 14);
  const MatrixXd x = oracle::blobs(y, 3, 1.0, 15);
  const CompressiveKernel<double> k = fitted(x, y, rbf(0.3), 2);
  const double congruent = snr_score(k, 0.1);
  const double product = snr_score(k, 0.1, RatioForm::kProductSvd);
  EXPECT_GE(product, congruent - 1e-9);
  EXPECT_THROW(snr_score(k, -1.0), ConfigError);
}

TEST(Weights, Uniform) {
  const WeightVector<double> w = weights_uniform<double>(3);
  EXPECT_EQ(w.mu, VectorXd::Constant(3, 1.0 / 3.0));
  EXPECT_THROW(weights_uniform<double>(0), ConfigError);
}

TEST(Weights, SnrExamplesAndErrors) {
  VectorXd s(2);
  s << 3, 4;
  const WeightVector<double> w = weights_snr(s, 0.1);
  EXPECT_NEAR(w.mu(0), 0.6, 1e-15);
  EXPECT_NEAR(w.mu(1), 0.8, 1e-15);
  EXPECT_EQ(w.ridge, 0.1);
  VectorXd r(4);
  r << 0.5, 2.0, 0.1, 1.0;
  const VectorXd mu = weights_snr(r).mu;
  EXPECT_NEAR(mu.norm(), 1.0, 1e-12);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      if (r(i) < r(j)) EXPECT_LT(mu(i), mu(j));
    }
  }
  VectorXd neg(2);
  neg << 1, -1;
  EXPECT_THROW(weights_snr(neg), ConfigError);
  EXPECT_THROW(weights_snr(VectorXd(VectorXd::Zero(3))), NumericalError);
}

TEST(Weights, AlignmentDuplicateKernelSplitsEvenly) {
  const Sym k = Sym::symmetrized(oracle::random_psd(4, 3, 16));
  const WeightVector<double> w = weights_alignment<double>({k, k}, kYu);
  EXPECT_NEAR(w.mu(0), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(w.mu(1), 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(Weights, AlignmentIgnoresOrthogonalKernel) {
  MatrixXd d = MatrixXd::Zero(4, 4);
  d.diagonal() << 1, -1, -1, 1;
  const WeightVector<double> w = weights_alignment<double>(
      {Sym::symmetrized(block(kYu)), Sym::symmetrized(d)}, kYu);
  EXPECT_NEAR(w.mu(0), 1.0, 1e-12);
  EXPECT_EQ(w.mu(1), 0.0);
}

TEST(Weights, AlignmentMatchesGridSearch) {
  const Labels y = oracle::labels(24, 3, 17);
  const MatrixXd x = oracle::blobs(y, 3, 1.0, 18);
  std::vector<CompressiveKernel<double>> ks;
  std::vector<MatrixXd> raw;
  for (double g : {0.05, 0.5, 5.0}) {
    ks.push_back(normalize(fitted(x, y, rbf(g), 2)));
    raw.push_back(ks.back().k_hat.matrix());
  }
  const MatrixXd target = block(y);
  const WeightVector<double> w = weights_alignment(ks, y);
  EXPECT_NEAR(w.mu.norm(), 1.0, 1e-12);
  EXPECT_GE(w.mu.minCoeff(), 0.0);
  const double best = oracle::alignment_grid_max(raw, target, 400);
  EXPECT_NEAR(oracle::alignment_value(raw, target, w.mu), best, 1e-3);
  EXPECT_THROW(weights_alignment(std::vector<CompressiveKernel<double>>{ks[0]},
                                 y),
               ConfigError);
}

TEST(Upr, PrivacyFreeLabelsReduceToScaledPencil) {
  const Labels y = oracle::labels(30, 3, 19);
  const MatrixXd x = oracle::blobs(y, 3, 1.0, 20);
  const Sym k = fitted(x, y, rbf(0.3), 2).k_hat;
  const Labels constant(30, 0);
  const double one = upr_trace(k, y, constant, 1.0);
  EXPECT_GT(one, 0.0);
  EXPECT_NEAR(upr_trace(k, y, constant, 2.0), 0.5 * one, 1e-8 * one);
}

TEST(Upr, SameLabelsApproachOneAsRidgeVanishes) {
  const Labels y = oracle::labels(30, 3, 21);
  const MatrixXd x = oracle::blobs(y, 3, 1.0, 22);
  const Sym k = fitted(x, y, rbf(0.3), 2).k_hat;
  const VectorXd s = upr_spectrum(k, y, y, 1e-9);
  ASSERT_GE(s.size(), 2);
  EXPECT_NEAR(s(0), 1.0, 1e-4);
  EXPECT_NEAR(s(1), 1.0, 1e-4);
  EXPECT_LE(s.maxCoeff(), 1.0 + 1e-8);
}

TEST(Upr, TraceDecreasesWithRidge) {
  const Labels yu = oracle::labels(36, 3, 23);
  const Labels yp = oracle::labels(36, 4, 24);
  const MatrixXd x = oracle::blobs(yu, 4, 1.0, 25);
  const Sym k = fitted(x, yu, rbf(0.2), 2).k_hat;
  double prev = upr_trace(k, yu, yp, 1e-3);
  for (double rho : {1e-2, 1e-1, 1.0, 10.0}) {
    const double cur = upr_trace(k, yu, yp, rho);
    EXPECT_LT(cur, prev) << "rho=" << rho;
    prev = cur;
  }
}

TEST(Upr, QpPicksBestUtilityPerPrivacy) {
  // (a_u, a_p) = (3, 1) and (1, 1).
  const WeightVector<double> w = weights_upr_qp<double>(
      {mixed(5.0 / 12.0, -1.0 / 12.0, 0.0), mixed(0.0, 0.0, 0.25)}, kYu, kYp);
  EXPECT_NEAR(w.mu(0), 1.0, 1e-12);
  EXPECT_NEAR(w.mu(1), 0.0, 1e-12);
}

TEST(Upr, QpProportionalTargetsGiveMinimumNorm) {
  // a_u = 2 a_p with a_p = (1, 2).
  const WeightVector<double> w = weights_upr_qp<double>(
      {mixed(0.25, 0.0, 0.0), mixed(0.5, 0.0, 0.0)}, kYu, kYp);
  EXPECT_NEAR(w.mu(0), 1.0 / std::sqrt(5.0), 1e-9);
  EXPECT_NEAR(w.mu(1), 2.0 / std::sqrt(5.0), 1e-9);
}

TEST(Upr, QpMatchesGridSearch) {
  const Labels yu = oracle::labels(24, 3, 26);
  const Labels yp = oracle::labels(24, 2, 27);
  const MatrixXd x = oracle::blobs(yu, 3, 1.0, 28);
  std::vector<Sym> ks;
  VectorXd au(3), ap(3);
  for (int l = 0; l < 3; ++l) {
    ks.push_back(normalize(fitted(x, yu, rbf(0.1 * (l + 1)), 2)).k_hat);
    const MatrixXd& m = ks.back().matrix();
    au(l) = (block(yu).cwiseProduct(m)).sum();
    ap(l) = (block(yp).cwiseProduct(m)).sum();
  }
  const WeightVector<double> w = weights_upr_qp(ks, yu, yp);
  const MatrixXd m = ap * ap.transpose();
  // Undo the unit-norm scaling: the optimum lies on a_p^T v = max a_u / a_p.
  const double t = (au.array() / ap.array()).maxCoeff();
  const VectorXd v = w.mu * (t / ap.dot(w.mu));
  const double grid = oracle::qp_grid_min(m, au, 2.0 * t / ap.minCoeff(), 40);
  EXPECT_NEAR(oracle::qp_objective(m, au, v), grid, 1e-3 * std::abs(grid));
}

TEST(Upr, NonPositivePrivacyAlignmentNamesKernel) {
  try {
    weights_upr_qp<double>({mixed(0.25, 0.0, 0.0), mixed(0.0, 0.0, -0.25)},
                           kYu, kYp);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("kernel 1"), std::string::npos);
  }
}

class Combine : public ::testing::Test {
 protected:
  void SetUp() override {
    y_ = oracle::labels(30, 3, 29);
    x_ = oracle::blobs(y_, 3, 1.0, 30);
    for (double g : {0.05, 0.3, 2.0}) {
      ks_.push_back(normalize(fitted(x_, y_, rbf(g), 2)));
    }
  }
  Labels y_;
  MatrixXd x_;
  std::vector<CompressiveKernel<double>> ks_;
};

TEST_F(Combine, BasisWeightSelectsKernel) {
  WeightVector<double> w;
  w.mu = VectorXd::Unit(3, 1);
  EXPECT_EQ(combine(ks_, w).k_mu.matrix(), ks_[1].k_hat.matrix());
}

TEST_F(Combine, LinearInWeights) {
  WeightVector<double> a, b, sum;
  a.mu = VectorXd::LinSpaced(3, 0.1, 0.7);
  b.mu = VectorXd::LinSpaced(3, 0.9, 0.2);
  sum.mu = a.mu + b.mu;
  const MatrixXd lhs = combine(ks_, sum).k_mu.matrix();
  const MatrixXd rhs =
      combine(ks_, a).k_mu.matrix() + combine(ks_, b).k_mu.matrix();
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
  std::vector<MatrixXd> crosses = {MatrixXd::Ones(30, 2), MatrixXd::Zero(30, 2),
                                   MatrixXd::Identity(30, 2)};
  const MatrixXd c = combine_cross(crosses, a);
  EXPECT_LT((c - a.mu(0) * crosses[0] - a.mu(2) * crosses[2]).norm(), 1e-15);
}

TEST_F(Combine, RankBoundedBySumOfRanks) {
  const MultiKernel<double> m = combine(ks_, weights_uniform<double>(3));
  EXPECT_LE(numerical_rank(m.k_mu.matrix(), 1e-8), 6);
  EXPECT_EQ(m.ranks, (std::vector<Index>{2, 2, 2}));
}

TEST_F(Combine, EveryStrategyHasUnitNorm) {
  VectorXd scores(3);
  for (Index l = 0; l < 3; ++l) scores(l) = snr_score(ks_[l], 0.1);
  const Labels yp = oracle::labels(30, 2, 31);
  for (const WeightVector<double>& w :
       {weights_snr(scores), weights_alignment(ks_, y_),
        weights_upr_qp(ks_, y_, yp)}) {
    EXPECT_NEAR(w.mu.norm(), 1.0, 1e-12) << strategy_name(w.strategy);
    EXPECT_GE(w.mu.minCoeff(), 0.0);
  }
}

TEST_F(Combine, ShapeErrors) {
  EXPECT_THROW(combine(ks_, weights_uniform<double>(2)), ConfigError);
  EXPECT_THROW(combine_cross<double>({MatrixXd::Ones(3, 2), MatrixXd::Ones(2, 2)},
                                     weights_uniform<double>(2)),
               ConfigError);
}

TEST(Strategy, NamesRoundTrip) {
  for (WeightStrategy s : {WeightStrategy::kUniform, WeightStrategy::kSnr,
                           WeightStrategy::kAlignment, WeightStrategy::kUprQp}) {
    EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  }
  EXPECT_THROW(parse_strategy("mkl"), ConfigError);
}

}  // namespace
}  // namespace cmkl
