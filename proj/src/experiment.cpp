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

#include "cmkl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>

#include "cmkl/dca.hpp"
#include "cmkl/error.hpp"
#include "cmkl/kernels.hpp"

namespace cmkl {
namespace {

SymMatrix<double> principal_block(const SymMatrix<double>& k,
                                  const std::vector<Index>& rows) {
  return SymMatrix<double>(k.matrix()(rows, rows));
}

std::string ridge_label(double ridge) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", ridge);
  return buf;
}

SelectionOptions selection(const ExperimentConfig& config) {
  SelectionOptions s;
  s.c_grid = config.c_grid;
  s.folds = config.folds;
  s.seed = config.seed;
  s.svm = config.svm;
  return s;
}

struct RowInput {
  std::vector<std::size_t> members;  // pipeline indices with a kernel
  VectorXd mu;
};

}  // namespace

ReleasedKernel::ReleasedKernel(SymMatrix<double> train, MatrixXd cross)
    : train_(std::move(train)), cross_(std::move(cross)) {
  if (cross_.rows() != train_.dim()) {
    throw ConfigError("ReleasedKernel: cross block has " +
                      std::to_string(cross_.rows()) + " rows, kernel " +
                      std::to_string(train_.dim()));
  }
  fingerprint_ = kernel_fingerprint(train_.matrix());
}

std::vector<std::vector<Index>> stratified_folds(const Labels& y, int folds,
                                                 std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  const int num_class = num_classes(y);
  const std::vector<int> counts = class_counts(y, num_class);
  for (int l = 0; l < num_class; ++l) {
    if (counts[static_cast<std::size_t>(l)] < folds) {
      throw DataError("class " + std::to_string(l) + " has " +
                      std::to_string(counts[static_cast<std::size_t>(l)]) +
                      " samples, fewer than " + std::to_string(folds) +
                      " folds");
    }
  }
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  std::size_t next = 0;
  for (int l = 0; l < num_class; ++l) {
    std::vector<Index> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == l) members.push_back(static_cast<Index>(i));
    }
    seeded_shuffle(members, seed + static_cast<std::uint64_t>(l));
    for (Index i : members) {
      out[next].push_back(i);
      next = (next + 1) % out.size();
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

double cross_validate(const SymMatrix<double>& k, const Labels& y, int folds,
                      const std::vector<double>& c_grid, std::uint64_t seed,
                      const SvmOptions& svm) {
  if (c_grid.empty()) throw ConfigError("cross_validate: empty C grid");
  if (static_cast<Index>(y.size()) != k.dim()) {
    throw ConfigError("cross_validate: label count does not match kernel");
  }
  std::vector<double> grid = c_grid;
  std::sort(grid.begin(), grid.end());
  if (grid.size() == 1) return grid.front();

  const auto parts = stratified_folds(y, folds, seed);
  std::vector<double> score(grid.size(), 0.0);
  for (std::size_t f = 0; f < parts.size(); ++f) {
    std::vector<Index> train;
    for (std::size_t g = 0; g < parts.size(); ++g) {
      if (g != f) train.insert(train.end(), parts[g].begin(), parts[g].end());
    }
    std::sort(train.begin(), train.end());
    const std::vector<Index>& held = parts[f];
    Labels y_train, y_held;
    for (Index i : train) y_train.push_back(y[static_cast<std::size_t>(i)]);
    for (Index i : held) y_held.push_back(y[static_cast<std::size_t>(i)]);

    const SymMatrix<double> k_train = principal_block(k, train);
    const MatrixXd cross = k.matrix()(train, held);
    const std::uint64_t fp = kernel_fingerprint(k_train.matrix());
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const SvmModel model = fit_svm(k_train, y_train, grid[c], svm);
      score[c] += accuracy(predict(model, cross, fp), y_held);
    }
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < grid.size(); ++c) {
    if (score[c] > score[best]) best = c;
  }
  return grid[best];
}

Evaluation evaluate_released(const ReleasedKernel& released,
                             const Labels& y_train, const Labels& y_test,
                             const SelectionOptions& options) {
  if (static_cast<Index>(y_test.size()) != released.cross().cols()) {
    throw ConfigError("evaluate_released: test label count mismatch");
  }
  Evaluation out;
  out.c = cross_validate(released.train(), y_train, options.folds,
                         options.c_grid, options.seed, options.svm);
  const SvmModel model =
      fit_svm(released.train(), y_train, out.c, options.svm);
  out.accuracy = accuracy(
      predict(model, released.cross(), released.fingerprint()), y_test);
  return out;
}

std::pair<Dataset, Dataset> prepare_data(const ExperimentConfig& config) {
  Schema raw = config.schema;
  raw.standardize = false;
  Dataset train, test;
  if (!config.test_path.empty()) {
    train = load_dataset(config.train_path, raw);
    test = load_dataset(config.test_path, raw, &train);
  } else {
    std::tie(train, test) = split_dataset(load_dataset(config.train_path, raw),
                                          config.test_fraction, config.seed);
  }
  if (config.schema.standardize) {
    const Standardizer s = Standardizer::fit(train.features);
    train.features = s.apply(train.features);
    test.features = s.apply(test.features);
  }
  return {std::move(train), std::move(test)};
}

std::vector<KernelPipeline> build_compressive_kernels(
    const ExperimentConfig& config, const Dataset& train, const Dataset& test) {
  if (train.dim() != test.dim()) {
    throw DataError("train and test feature dimensions differ");
  }
  const Index default_q = num_classes(train.utility) - 1;
  auto run = [&](const KernelEntry& entry) {
    KernelPipeline p;
    p.name = to_string(entry.spec);
    p.q = entry.q > 0 ? entry.q : default_q;
    try {
      const GramMatrix<double> k_bar =
          center_gram(gram(entry.spec, train.features));
      const SymMatrix<double> k_between =
          between_class_kernel(k_bar.sym(), train.utility);
      const DcaModel<double> dca =
          fit_kdca(k_bar, train.utility, k_between, p.q, config.rho,
                   config.rho_prime);
      p.kernel = normalize(compress(k_bar, dca.projection, k_between,
                                    entry.spec));
      const MatrixXd raw_cross =
          cross_gram(entry.spec, train.features, test.features);
      p.cross = compress_cross(*p.kernel, center_cross(raw_cross,
                                                       k_bar.stats()));
    } catch (const Error& e) {
      p.kernel.reset();
      p.failure = e.what();
    }
    return p;
  };
  std::vector<std::future<KernelPipeline>> jobs;
  for (const auto& entry : config.kernels) {
    jobs.push_back(std::async(std::launch::async, run, std::cref(entry)));
  }
  std::vector<KernelPipeline> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

WeightVector<double> compute_weights(
    WeightStrategy strategy, double ridge,
    const std::vector<CompressiveKernel<double>>& kernels, const Dataset& train,
    RatioForm form) {
  const Index p = static_cast<Index>(kernels.size());
  switch (strategy) {
    case WeightStrategy::kUniform:
      return weights_uniform<double>(p);
    case WeightStrategy::kAlignment:
      return weights_alignment(kernels, train.utility);
    case WeightStrategy::kUprQp:
      return weights_upr_qp(kernels, train.utility, train.privacy);
    case WeightStrategy::kSnr: {
      VectorXd scores(p);
      for (Index l = 0; l < p; ++l) {
        scores(l) = snr_score(kernels[static_cast<std::size_t>(l)], ridge, form);
      }
      return weights_snr(scores, ridge);
    }
  }
  throw ConfigError("unknown weight strategy");
}

Index released_rank(const std::vector<CompressiveKernel<double>>& kernels,
                    const VectorXd& mu, double tol_rel) {
  if (static_cast<Index>(kernels.size()) != mu.size()) {
    throw ConfigError("released_rank: weight count mismatch");
  }
  if (kernels.empty()) return 0;
  Index cols = 0;
  for (const auto& k : kernels) cols += k.factor.cols();
  MatrixXd stacked(kernels.front().size(), cols);
  Index at = 0;
  for (std::size_t l = 0; l < kernels.size(); ++l) {
    const auto& k = kernels[l];
    const double w = std::max(mu(static_cast<Index>(l)), 0.0);
    stacked.middleCols(at, k.factor.cols()) = std::sqrt(w / k.scale) * k.factor;
    at += k.factor.cols();
  }
  // Eigenvalues of the combination are the squared singular values.
  const VectorXd sv = singular_values(stacked);
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  const double top = sv(0) * sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) * sv(i) > tol_rel * top) ++rank;
  }
  return rank;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto [train, test] = prepare_data(config);
  return run_experiment(config, train, test);
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const Dataset& train, const Dataset& test) {
  config.validate();
  ExperimentReport report;
  report.name = config.name;
  report.train_samples = train.size();
  report.test_samples = test.size();
  report.feature_dim = train.dim();
  report.utility_classes = num_classes(train.utility);
  report.privacy_classes = num_classes(train.privacy);
  report.baseline_utility = 100.0 / report.utility_classes;
  report.baseline_privacy = 100.0 / report.privacy_classes;
  report.snr_ridges = config.snr_ridges;

  const std::vector<KernelPipeline> pipes =
      build_compressive_kernels(config, train, test);
  const std::size_t p = pipes.size();
  std::vector<Index> qs;
  for (const auto& k : pipes) qs.push_back(k.q);
  report.budget = rank_budget_check(qs, train.dim());

  std::vector<CompressiveKernel<double>> kernels;
  std::optional<std::string> pipeline_failure;
  for (const auto& k : pipes) {
    if (k.kernel) {
      kernels.push_back(*k.kernel);
    } else if (!pipeline_failure) {
      pipeline_failure = "kernel " + k.name + " failed: " + *k.failure;
    }
  }

  // SNR score table, one row per kernel and one column per ridge.
  std::vector<std::vector<std::optional<double>>> snr(p);
  for (std::size_t l = 0; l < p; ++l) {
    KernelSummary s;
    s.name = pipes[l].name;
    s.q = pipes[l].q;
    s.failure = pipes[l].failure;
    snr[l].assign(config.snr_ridges.size(), std::nullopt);
    if (pipes[l].kernel) {
      for (std::size_t r = 0; r < config.snr_ridges.size(); ++r) {
        try {
          snr[l][r] = snr_score(*pipes[l].kernel, config.snr_ridges[r],
                                config.ratio_form);
          s.snr.push_back(*snr[l][r]);
        } catch (const Error& e) {
          if (!s.failure) s.failure = std::string("snr: ") + e.what();
        }
      }
    }
    report.kernels.push_back(std::move(s));
  }

  const SelectionOptions options = selection(config);
  auto evaluate = [&](MethodRow row, const std::vector<std::size_t>& members,
                      const VectorXd& mu) {
    const auto start = std::chrono::steady_clock::now();
    try {
      std::vector<CompressiveKernel<double>> used;
      std::vector<MatrixXd> crosses;
      Index total_q = 0;
      for (std::size_t idx : members) {
        used.push_back(*pipes[idx].kernel);
        crosses.push_back(pipes[idx].cross);
      }
      WeightVector<double> w;
      w.mu = mu;
      const MultiKernel<double> combined = combine(used, w);
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (mu(static_cast<Index>(i)) > 0.0) total_q += used[i].q;
      }
      row.rank_budget_compliant = total_q < train.dim();
      row.released_rank = released_rank(used, mu);
      const ReleasedKernel released(combined.k_mu, combine_cross(crosses, w));
      const Evaluation u =
          evaluate_released(released, train.utility, test.utility, options);
      const Evaluation q =
          evaluate_released(released, train.privacy, test.privacy, options);
      row.utility = 100.0 * u.accuracy;
      row.privacy = 100.0 * q.accuracy;
      row.c_utility = u.c;
      row.c_privacy = q.c;
    } catch (const Error& e) {
      row.failure = e.what();
    }
    if (config.record_timing) {
      row.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    report.methods.push_back(std::move(row));
  };

  if (config.run_single) {
    for (std::size_t l = 0; l < p; ++l) {
      MethodRow row;
      row.name = "Single " + pipes[l].name;
      row.strategy = "single";
      row.weights.assign(p, 0.0);
      row.weights[l] = 1.0;
      if (!pipes[l].kernel) {
        row.failure = *pipes[l].failure;
        report.methods.push_back(std::move(row));
        continue;
      }
      evaluate(std::move(row), {l}, VectorXd::Ones(1));
    }
  }
  if (p < 2) return report;

  auto multi = [&](MethodRow row, const std::function<VectorXd()>& weigh) {
    if (pipeline_failure) {
      row.failure = *pipeline_failure;
      report.methods.push_back(std::move(row));
      return;
    }
    std::vector<std::size_t> members(p);
    for (std::size_t l = 0; l < p; ++l) members[l] = l;
    VectorXd mu;
    try {
      mu = weigh();
    } catch (const Error& e) {
      row.failure = e.what();
      report.methods.push_back(std::move(row));
      return;
    }
    row.weights.assign(mu.data(), mu.data() + mu.size());
    evaluate(std::move(row), members, mu);
  };

  if (config.run_uniform) {
    MethodRow row;
    row.name = "Uniform";
    row.strategy = "uniform";
    multi(std::move(row), [&] {
      return compute_weights(WeightStrategy::kUniform, 0.0, kernels, train).mu;
    });
  }
  if (config.run_alignment) {
    MethodRow row;
    row.name = "Alignment";
    row.strategy = "alignment";
    multi(std::move(row), [&] {
      return compute_weights(WeightStrategy::kAlignment, 0.0, kernels, train).mu;
    });
  }
  for (std::size_t r = 0; r < config.snr_ridges.size(); ++r) {
    MethodRow row;
    const double ridge = config.snr_ridges[r];
    row.name = "SNR (rho_snr=" + ridge_label(ridge) + ")";
    row.strategy = "snr";
    row.ridge = ridge;
    for (std::size_t l = 0; l < p; ++l) {
      if (snr[l][r]) row.snr_scores.push_back(*snr[l][r]);
    }
    const std::vector<double> row_scores = row.snr_scores;
    multi(std::move(row), [&] {
      if (row_scores.size() != p) {
        return compute_weights(WeightStrategy::kSnr, ridge, kernels, train,
                               config.ratio_form)
            .mu;
      }
      return weights_snr(VectorXd(Eigen::Map<const VectorXd>(
                             row_scores.data(),
                             static_cast<Index>(row_scores.size()))),
                         ridge)
          .mu;
    });
  }
  if (config.run_upr_qp) {
    MethodRow row;
    row.name = "UPR-QP";
    row.strategy = "upr_qp";
    multi(std::move(row), [&] {
      return compute_weights(WeightStrategy::kUprQp, 0.0, kernels, train).mu;
    });
  }
  return report;
}

}  // namespace cmkl
