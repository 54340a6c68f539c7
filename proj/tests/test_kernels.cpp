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

#include <gtest/gtest.h>

#include "cmkl/error.hpp"
#include "cmkl/kernels.hpp"
#include "oracles.hpp"

namespace cmkl {
namespace {

KernelSpec spec(KernelKind kind, double gamma = 1.0, int degree = 1,
                double c0 = 0.0) {
  KernelSpec s;
  s.kind = kind;
  s.gamma = gamma;
  s.degree = degree;
  s.c0 = c0;
  return s;
}

oracle::Kind oracle_kind(KernelKind k) {
  switch (k) {
    case KernelKind::kLinear: return oracle::Kind::kLinear;
    case KernelKind::kPolynomial: return oracle::Kind::kPoly;
    case KernelKind::kRbf: return oracle::Kind::kRbf;
    case KernelKind::kLaplacian: return oracle::Kind::kLaplacian;
    case KernelKind::kSigmoid: return oracle::Kind::kSigmoid;
  }
  return oracle::Kind::kLinear;
}

const KernelSpec kAllKinds[] = {
    spec(KernelKind::kLinear), spec(KernelKind::kPolynomial, 0.5, 3, 1.0),
    spec(KernelKind::kRbf, 0.2), spec(KernelKind::kLaplacian, 0.3),
    spec(KernelKind::kSigmoid, 0.05, 1, 0.5)};

MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
  MatrixXd m(static_cast<Index>(r.size()),
             static_cast<Index>(r.begin()->size()));
  Index i = 0;
  for (const auto& row : r) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

TEST(EvalKernel, Examples) {
  const VectorXd a = Eigen::Vector2d(1, 2), b = Eigen::Vector2d(3, 4);
  EXPECT_EQ(eval_kernel(spec(KernelKind::kLinear), a, b), 11);
  EXPECT_EQ(eval_kernel(spec(KernelKind::kRbf, 0.7), a, a), 1);
  EXPECT_NEAR(eval_kernel(spec(KernelKind::kLaplacian, 0.1),
                          VectorXd(Eigen::Vector2d(0, 0)),
                          VectorXd(Eigen::Vector2d(1, 1))),
              0.818731, 1e-6);
  EXPECT_NEAR(eval_kernel(spec(KernelKind::kSigmoid, 0.1, 1, 1.0), a, b),
              std::tanh(2.1), 1e-15);
  EXPECT_THROW(eval_kernel(spec(KernelKind::kLinear), a,
                           VectorXd(Eigen::Vector3d(1, 2, 3))),
               ConfigError);
}

TEST(KernelSpec, ParseAndValidate) {
  const KernelSpec p = parse_kernel_spec("polynomial:gamma=1,degree=3,c0=1");
  EXPECT_EQ(p.kind, KernelKind::kPolynomial);
  EXPECT_EQ(p.degree, 3);
  EXPECT_EQ(p.c0, 1.0);
  EXPECT_EQ(parse_kernel_spec("rbf:gamma=0.01").gamma, 0.01);
  EXPECT_EQ(parse_kernel_spec("linear").kind, KernelKind::kLinear);
  EXPECT_THROW(parse_kernel_spec("cosine"), ConfigError);
  EXPECT_THROW(parse_kernel_spec("rbf:gamma=-1"), ConfigError);
  EXPECT_THROW(parse_kernel_spec("rbf:gamma=abc"), ConfigError);
  EXPECT_THROW(parse_kernel_spec("rbf:sigma=1"), ConfigError);
  EXPECT_THROW(parse_kernel_spec("polynomial:degree=0"), ConfigError);
  EXPECT_EQ(to_string(parse_kernel_spec("rbf:gamma=0.01")), "rbf(gamma=0.01)");
}

TEST(Gram, Examples) {
  const GramMatrix<double> lin =
      gram(spec(KernelKind::kLinear), rows({{1, 0}, {0, 1}}));
  EXPECT_EQ(lin.matrix(), MatrixXd::Identity(2, 2));
  EXPECT_EQ(lin.state(), GramState::kRaw);

  const GramMatrix<double> rbf =
      gram(spec(KernelKind::kRbf, 0.3), oracle::gaussian(6, 3, 1));
  for (Index i = 0; i < 6; ++i) EXPECT_EQ(rbf.matrix()(i, i), 1);

  const GramMatrix<double> poly = gram(spec(KernelKind::kPolynomial, 1, 2, 0),
                                       rows({{1, 1}, {2, 0}}));
  EXPECT_EQ(poly.matrix(), rows({{4, 4}, {4, 16}}));
  EXPECT_THROW(gram(spec(KernelKind::kLinear), rows({{1, 2}})), ConfigError);
}

TEST(Gram, MatchesDirectFormulaAndIsExactlySymmetric) {
  const MatrixXd x = oracle::gaussian(9, 4, 2);
  for (const KernelSpec& s : kAllKinds) {
    const MatrixXd k = gram(s, x).matrix();
    const MatrixXd ref =
        oracle::gram(oracle_kind(s.kind), s.gamma, s.degree, s.c0, x, x);
    EXPECT_LT((k - ref).cwiseAbs().maxCoeff(), 1e-12) << to_string(s);
    EXPECT_EQ(k, k.transpose());
  }
}

TEST(Gram, PositiveSemidefiniteForDefiniteKinds) {
  const MatrixXd x = oracle::gaussian(25, 5, 3);
  for (const KernelSpec& s : kAllKinds) {
    if (!s.is_pds()) continue;
    const GramMatrix<double> raw = gram(s, x);
    const GramMatrix<double> c = center_gram(raw);
    const GramMatrix<double> n = normalize_trace(c);
    for (const GramMatrix<double>* k : {&raw, &c, &n}) {
      const double lo = Eigen::SelfAdjointEigenSolver<MatrixXd>(k->matrix())
                            .eigenvalues()
                            .minCoeff();
      EXPECT_GE(lo, -1e-8 * k->sym().trace()) << to_string(s);
    }
  }
}

TEST(Gram, TranslationInvarianceOfDistanceKernels) {
  const MatrixXd x = oracle::gaussian(8, 3, 4);
  const MatrixXd shifted = x.rowwise() + Eigen::RowVector3d(5, -2, 0.5);
  for (const KernelSpec& s :
       {spec(KernelKind::kRbf, 0.2), spec(KernelKind::kLaplacian, 0.3)}) {
    EXPECT_LT((gram(s, x).matrix() - gram(s, shifted).matrix())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(CrossGram, MatchesDirectFormula) {
  const MatrixXd a = oracle::gaussian(7, 3, 5), b = oracle::gaussian(4, 3, 6);
  for (const KernelSpec& s : kAllKinds) {
    const MatrixXd ref =
        oracle::gram(oracle_kind(s.kind), s.gamma, s.degree, s.c0, a, b);
    EXPECT_LT((cross_gram(s, a, b) - ref).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(cross_gram(spec(KernelKind::kLinear), a,
                          oracle::gaussian(2, 4, 1)),
               ConfigError);
}

GramMatrix<double> raw(const MatrixXd& k) {
  return GramMatrix<double>(SymMatrix<double>(k), GramState::kRaw);
}

TEST(CenterGram, Examples) {
  EXPECT_LT(center_gram(raw(MatrixXd::Ones(4, 4))).matrix().cwiseAbs().maxCoeff(),
            1e-15);
  EXPECT_EQ(center_gram(raw(2 * MatrixXd::Identity(2, 2))).matrix(),
            rows({{1, -1}, {-1, 1}}));
  const MatrixXd k = oracle::random_psd(5, 5, 7);
  const MatrixXd ref =
      oracle::centering(5) * k * oracle::centering(5);
  const GramMatrix<double> c = center_gram(raw(k));
  EXPECT_LT((c.matrix() - ref).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(c.centered());
  ASSERT_TRUE(c.stats().has_value());
  EXPECT_THROW(center_gram(c), ConfigError);
}

TEST(CenterGram, RowSumsVanishAndIdempotentOnCenteredInput) {
  const MatrixXd k =
      gram(spec(KernelKind::kRbf, 0.1), oracle::gaussian(30, 4, 8)).matrix();
  const GramMatrix<double> c = center_gram(raw(k));
  EXPECT_LE(c.matrix().rowwise().sum().cwiseAbs().maxCoeff(), 1e-8 * 30);
  const GramMatrix<double> twice = center_gram(raw(c.matrix()));
  EXPECT_LT((twice.matrix() - c.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CenterCross, TrainingPointReproducesTrainingColumn) {
  const MatrixXd x = oracle::gaussian(10, 3, 9);
  for (const KernelSpec& s : kAllKinds) {
    const GramMatrix<double> c = center_gram(gram(s, x));
    const MatrixXd cross = cross_gram(s, x, MatrixXd(x.topRows(3)));
    const MatrixXd centered = center_cross(cross, c.stats());
    EXPECT_LT((centered - c.matrix().leftCols(3)).cwiseAbs().maxCoeff(),
              1e-10)
        << to_string(s);
  }
}

TEST(CenterCross, ConstantKernelAndExplicitOracle) {
  const GramMatrix<double> c = center_gram(raw(MatrixXd::Ones(4, 4)));
  EXPECT_LT(center_cross(MatrixXd::Ones(4, 2), c.stats()).cwiseAbs().maxCoeff(),
            1e-15);

  const MatrixXd x = oracle::gaussian(8, 3, 10), t = oracle::gaussian(5, 3, 11);
  const KernelSpec s = spec(KernelKind::kLaplacian, 0.4);
  const MatrixXd k = gram(s, x).matrix();
  const MatrixXd cross = cross_gram(s, x, t);
  const MatrixXd got = center_cross(cross, center_gram(raw(k)).stats());
  EXPECT_LT((got - oracle::center_cross(k, cross)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(CenterCross, Errors) {
  const std::optional<CenteringStats<double>> none;
  EXPECT_THROW(center_cross(MatrixXd::Ones(3, 1), none), ConfigError);
  const GramMatrix<double> c = center_gram(raw(MatrixXd::Identity(3, 3)));
  EXPECT_THROW(center_cross(MatrixXd::Ones(4, 1), c.stats()), ConfigError);
}

TEST(NormalizeTrace, Examples) {
  const GramMatrix<double> fake(
      SymMatrix<double>(MatrixXd(Eigen::Vector3d(1, 1, 2).asDiagonal())),
      GramState::kCentered);
  const GramMatrix<double> n = normalize_trace(fake);
  EXPECT_EQ(n.matrix(), MatrixXd(Eigen::Vector3d(0.25, 0.25, 0.5).asDiagonal()));
  EXPECT_EQ(n.scale(), 4);
  EXPECT_EQ(n.state(), GramState::kNormalized);

  const GramMatrix<double> again = normalize_trace(n);
  EXPECT_TRUE(again.matrix().isApprox(n.matrix(), 1e-15));

  for (const KernelSpec& s : kAllKinds) {
    const GramMatrix<double> c =
        center_gram(gram(s, oracle::gaussian(12, 3, 12)));
    EXPECT_NEAR(normalize_trace(c).sym().trace(), 1.0, 1e-12);
  }
}

TEST(NormalizeTrace, Errors) {
  EXPECT_THROW(normalize_trace(raw(MatrixXd::Identity(3, 3))), ConfigError);
  EXPECT_THROW(normalize_trace(center_gram(raw(MatrixXd::Ones(3, 3)))),
               NumericalError);
}

TEST(FloatInstantiation, GramPipeline) {
  const Eigen::MatrixXf x = oracle::gaussian(6, 2, 13).cast<float>();
  const GramMatrix<float> k =
      normalize_trace(center_gram(gram(spec(KernelKind::kRbf, 0.5), x)));
  EXPECT_NEAR(k.sym().trace(), 1.0f, 1e-5f);
}

}  // namespace
}  // namespace cmkl
