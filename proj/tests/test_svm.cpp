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

#include <vector>

#include <gtest/gtest.h>

#include "cmkl/error.hpp"
#include "cmkl/kernels.hpp"
#include "cmkl/svm.hpp"
#include "oracles.hpp"

namespace cmkl {
namespace {

using Sym = SymMatrix<double>;

SvmOptions tight(WorkingSetRule rule = WorkingSetRule::kMaxViolatingPair) {
  SvmOptions o;
  o.tolerance = 1e-9;
  o.rule = rule;
  return o;
}

MatrixXd rbf_cross(const MatrixXd& a, const MatrixXd& b, double gamma) {
  KernelSpec s;
  s.kind = KernelKind::kRbf;
  s.gamma = gamma;
  return cross_gram(s, a, b);
}

std::vector<int> signs_of(const Labels& y) {
  std::vector<int> s;
  for (int v : y) s.push_back(v == 0 ? 1 : -1);
  return s;
}

VectorXd decision(const BinarySvm& m, const MatrixXd& cross) {
  return (cross.transpose() * m.coef).array() + m.bias;
}

struct Problem {
  MatrixXd x;
  Labels y;
  Sym k;
};

Problem overlapping(Index n, int classes, double spread, std::uint64_t seed) {
  Problem p;
  p.y = oracle::labels(n, classes, seed);
  p.x = oracle::blobs(p.y, 2, spread, seed + 1);
  p.k = Sym::symmetrized(rbf_cross(p.x, p.x, 0.5));
  return p;
}

TEST(BinarySvm, SeparableFourPoints) {
  MatrixXd x(4, 1);
  x << -2, -1, 1, 2;
  const Sym k = Sym::symmetrized(x * x.transpose());
  const BinarySvm m = fit_binary_svm(k, {-1, -1, 1, 1}, 100.0, tight());
  EXPECT_NEAR(m.alpha(0), 0.0, 1e-9);
  EXPECT_NEAR(m.alpha(1), 0.5, 1e-9);
  EXPECT_NEAR(m.alpha(2), 0.5, 1e-9);
  EXPECT_NEAR(m.alpha(3), 0.0, 1e-9);
  EXPECT_NEAR(m.bias, 0.0, 1e-9);
  MatrixXd probe(1, 3);
  probe << -3, 0.25, 5;
  const VectorXd f = decision(m, x * probe);
  EXPECT_NEAR(f(0), -3.0, 1e-8);
  EXPECT_NEAR(f(1), 0.25, 1e-8);
  EXPECT_NEAR(f(2), 5.0, 1e-8);
}

TEST(BinarySvm, MatchesDualOracle) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Problem p = overlapping(40, 2, 2.0, seed);
    const std::vector<int> s = signs_of(p.y);
    const BinarySvm m = fit_binary_svm(p.k, s, 1.0, tight());
    VectorXd ys(40);
    for (Index i = 0; i < 40; ++i) ys(i) = s[static_cast<std::size_t>(i)];
    const oracle::DualSolution ref = oracle::svm_dual(p.k.matrix(), ys, 1.0, 60000);
    const VectorXd f_ref =
        (p.k.matrix() * ref.alpha.cwiseProduct(ys)).array() + ref.bias;
    const VectorXd f = decision(m, p.k.matrix());
    EXPECT_LT((f - f_ref).cwiseAbs().maxCoeff(), 1e-4) << "seed " << seed;
  }
}

TEST(BinarySvm, FeasibleDualVariables) {
  const Problem p = overlapping(60, 2, 2.5, 4);
  const std::vector<int> s = signs_of(p.y);
  const BinarySvm m = fit_binary_svm(p.k, s, 0.7);
  double sum = 0.0;
  for (Index i = 0; i < 60; ++i) {
    EXPECT_GE(m.alpha(i), 0.0);
    EXPECT_LE(m.alpha(i), 0.7);
    sum += m.alpha(i) * s[static_cast<std::size_t>(i)];
    EXPECT_DOUBLE_EQ(m.coef(i), m.alpha(i) * s[static_cast<std::size_t>(i)]);
  }
  EXPECT_NEAR(sum, 0.0, 1e-6);
}

TEST(BinarySvm, DuplicatedDataEqualsDoubledC) {
  const Problem p = overlapping(30, 2, 2.0, 5);
  MatrixXd xx(60, 2);
  xx << p.x, p.x;
  std::vector<int> s = signs_of(p.y);
  std::vector<int> ss = s;
  ss.insert(ss.end(), s.begin(), s.end());
  const Sym kk = Sym::symmetrized(rbf_cross(xx, xx, 0.5));
  const BinarySvm dup = fit_binary_svm(kk, ss, 0.5, tight());
  const BinarySvm orig = fit_binary_svm(p.k, s, 1.0, tight());
  MatrixXd grid(49, 2);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) grid.row(i * 7 + j) << i - 3.0, j - 3.0;
  }
  const VectorXd a = decision(dup, rbf_cross(xx, grid, 0.5));
  const VectorXd b = decision(orig, rbf_cross(p.x, grid, 0.5));
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(BinarySvm, KernelScaleTradesAgainstC) {
  const Problem p = overlapping(40, 2, 2.0, 6);
  const std::vector<int> s = signs_of(p.y);
  const BinarySvm a = fit_binary_svm(p.k, s, 2.0, tight());
  const BinarySvm b = fit_binary_svm(p.k.scaled(4.0), s, 0.5, tight());
  const VectorXd fa = decision(a, p.k.matrix());
  const VectorXd fb = decision(b, 4.0 * p.k.matrix());
  EXPECT_LT((fa - fb).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(BinarySvm, WorkingSetRulesAgree) {
  const Problem p = overlapping(50, 2, 2.0, 7);
  const std::vector<int> s = signs_of(p.y);
  const BinarySvm a = fit_binary_svm(p.k, s, 1.0, tight());
  const BinarySvm b =
      fit_binary_svm(p.k, s, 1.0, tight(WorkingSetRule::kSecondOrder));
  EXPECT_LT((decision(a, p.k.matrix()) - decision(b, p.k.matrix()))
                .cwiseAbs()
                .maxCoeff(),
            1e-6);
}

TEST(BinarySvm, BadArguments) {
  const Sym k = Sym::identity(3);
  EXPECT_THROW(fit_binary_svm(k, {1, -1}, 1.0), ConfigError);
  EXPECT_THROW(fit_binary_svm(k, {1, -1, 0}, 1.0), ConfigError);
  EXPECT_THROW(fit_binary_svm(k, {1, -1, 1}, 0.0), ConfigError);
}

TEST(Svm, PredictsTrainingPointsOfSeparableBlobs) {
  const Problem p = overlapping(60, 3, 10.0, 8);
  const SvmModel m = fit_svm(p.k, p.y, 10.0);
  EXPECT_EQ(m.machines().size(), 3u);
  EXPECT_EQ(predict(m, p.k.matrix(), kernel_fingerprint(p.k.matrix())), p.y);
}

TEST(Svm, GeneralizesOnBlobs) {
  const Labels y = oracle::labels(200, 4, 9);
  const MatrixXd x = oracle::blobs(y, 3, 8.0, 10);
  const Sym k = Sym::symmetrized(rbf_cross(x.topRows(150), x.topRows(150), 0.3));
  const Labels y_train(y.begin(), y.begin() + 150);
  const Labels y_test(y.begin() + 150, y.end());
  const MatrixXd cross = rbf_cross(x.topRows(150), x.bottomRows(50), 0.3);
  for (Multiclass mode : {Multiclass::kOneVsRest, Multiclass::kOneVsOne}) {
    SvmOptions o;
    o.multiclass = mode;
    const SvmModel m = fit_svm(k, y_train, 1.0, o);
    EXPECT_GE(accuracy(predict(m, cross, m.fingerprint()), y_test), 0.95);
  }
}

TEST(Svm, TwoClassesUseOneMachine) {
  const Problem p = overlapping(30, 2, 1.0, 11);
  const SvmModel m = fit_svm(p.k, p.y, 1.0);
  ASSERT_EQ(m.machines().size(), 1u);
  const MatrixXd v = m.decision_values(p.k.matrix());
  EXPECT_LT((v.col(0) + v.col(1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Svm, OneVsOneCountsVotes) {
  const Problem p = overlapping(60, 4, 1.0, 12);
  SvmOptions o;
  o.multiclass = Multiclass::kOneVsOne;
  const SvmModel m = fit_svm(p.k, p.y, 1.0, o);
  EXPECT_EQ(m.machines().size(), 6u);
  const MatrixXd v = m.decision_values(p.k.matrix());
  for (Index r = 0; r < v.rows(); ++r) EXPECT_EQ(v.row(r).sum(), 6.0);
}

TEST(Svm, Deterministic) {
  const Problem p = overlapping(50, 3, 1.5, 13);
  const SvmModel a = fit_svm(p.k, p.y, 1.0);
  const SvmModel b = fit_svm(p.k, p.y, 1.0);
  for (std::size_t l = 0; l < a.machines().size(); ++l) {
    EXPECT_EQ(a.machines()[l].alpha, b.machines()[l].alpha);
    EXPECT_EQ(a.machines()[l].bias, b.machines()[l].bias);
  }
}

TEST(Svm, RejectsForeignKernel) {
  const Problem p = overlapping(20, 2, 1.0, 14);
  const SvmModel m = fit_svm(p.k, p.y, 1.0);
  const MatrixXd other = p.k.matrix() * 2.0;
  EXPECT_THROW(predict(m, p.k.matrix(), kernel_fingerprint(other)),
               ConfigError);
  EXPECT_THROW(m.decision_values(MatrixXd::Ones(19, 2)), ConfigError);
}

TEST(Svm, RejectsDegenerateLabels) {
  const Sym k = Sym::identity(3);
  EXPECT_THROW(fit_svm(k, {1, 1, 1}, 1.0), ConfigError);
  EXPECT_THROW(fit_svm(k, {0, 1}, 1.0), ConfigError);
  EXPECT_THROW(fit_svm(k, {0, 1, 1}, -1.0), ConfigError);
}

TEST(Svm, ArgmaxTiesGoToLowestIndex) {
  VectorXd v(3);
  v << 1, 3, 3;
  EXPECT_EQ(argmax_lowest(v), 1);
  v << 2, 2, 2;
  EXPECT_EQ(argmax_lowest(v), 0);
}

TEST(Accuracy, Examples) {
  EXPECT_DOUBLE_EQ(accuracy({0, 1, 2}, {0, 1, 1}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(accuracy({4, 4}, {4, 4}), 1.0);
  EXPECT_THROW(accuracy({0}, {0, 1}), ConfigError);
  EXPECT_THROW(accuracy({}, {}), ConfigError);
}

}  // namespace
}  // namespace cmkl
