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

// Command-line front end: run, gram, weights, report, synth.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmkl/config.hpp"
#include "cmkl/csv.hpp"
#include "cmkl/error.hpp"
#include "cmkl/experiment.hpp"
#include "cmkl/kernels.hpp"
#include "cmkl/report.hpp"
#include "cmkl/synthetic.hpp"

namespace {

using namespace cmkl;

int run_command(const std::string& config_path, const std::string& json_out,
                const std::string& table_out, bool timing) {
  ExperimentConfig config = load_config(config_path);
  if (!json_out.empty()) config.json_path = json_out;
  if (!table_out.empty()) config.table_path = table_out;
  if (timing) config.record_timing = true;
  const ExperimentReport report = run_experiment(config);
  emit_report(report, config.json_path, config.table_path);
  std::cout << format_table(report);
  return 0;
}

int gram_command(const std::string& kernel, const std::string& data,
                 const std::string& utility_label,
                 const std::string& privacy_label, bool center,
                 bool normalize, bool standardize, const std::string& out) {
  const KernelSpec spec = parse_kernel_spec(kernel);
  Schema schema;
  schema.utility_label = utility_label;
  schema.privacy_label = privacy_label;
  schema.standardize = standardize;
  const Dataset ds = load_dataset(data, schema);
  GramMatrix<double> k = gram(spec, ds.features);
  if (center || normalize) k = center_gram(k);
  if (normalize) k = normalize_trace(k);

  std::ofstream file;
  if (!out.empty()) {
    file = open_output(out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  const MatrixXd& m = k.matrix();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      os << (j ? "," : "") << m(i, j);
    }
    os << "\n";
  }
  return 0;
}

int weights_command(const std::string& config_path,
                    const std::string& strategy_name, double ridge) {
  const ExperimentConfig config = load_config(config_path);
  const WeightStrategy strategy = parse_strategy(strategy_name);
  const auto [train, test] = prepare_data(config);
  const auto pipes = build_compressive_kernels(config, train, test);
  std::vector<CompressiveKernel<double>> kernels;
  nlohmann::ordered_json doc;
  doc["strategy"] = strategy_name;
  doc["ridge"] = ridge;
  doc["kernels"] = nlohmann::ordered_json::array();
  for (const auto& p : pipes) {
    if (!p.kernel) throw NumericalError("kernel " + p.name + ": " + *p.failure);
    kernels.push_back(*p.kernel);
    doc["kernels"].push_back(p.name);
  }
  const WeightVector<double> w =
      compute_weights(strategy, ridge, kernels, train, config.ratio_form);
  doc["mu"] = std::vector<double>(w.mu.data(), w.mu.data() + w.mu.size());
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int report_command(const std::string& in, const std::string& format) {
  const ExperimentReport report = read_report(in);
  if (format == "json") {
    std::cout << report_to_json(report).dump(2) << "\n";
  } else {
    std::cout << format_table(report);
  }
  return 0;
}

int synth_command(const SyntheticSpec& spec, const std::string& out) {
  write_dataset_csv(make_synthetic(spec), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive multi-kernel learning"};
  app.require_subcommand(1);

  std::string config_path, json_out, table_out;
  bool timing = false;
  auto* run = app.add_subcommand("run", "Run a full experiment");
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  run->add_option("--json", json_out, "Override output.json");
  run->add_option("--table", table_out, "Override output.table");
  run->add_flag("--timing", timing, "Record wall time per method");

  std::string kernel, data, utility_label = "utility",
                            privacy_label = "privacy", out;
  bool center = false, normalize = false, no_standardize = false;
  auto* gram_cmd = app.add_subcommand("gram", "Dump a Gram matrix as CSV");
  gram_cmd->add_option("--kernel", kernel, "e.g. rbf:gamma=0.01")->required();
  gram_cmd->add_option("--data", data, "CSV with a header row")->required();
  gram_cmd->add_option("--utility-label", utility_label);
  gram_cmd->add_option("--privacy-label", privacy_label);
  gram_cmd->add_flag("--center", center, "Double-center the matrix");
  gram_cmd->add_flag("--normalize", normalize, "Center, then unit trace");
  gram_cmd->add_flag("--no-standardize", no_standardize);
  gram_cmd->add_option("--out", out, "Output file (default stdout)");

  std::string strategy;
  double ridge = 0.0;
  auto* weights = app.add_subcommand("weights", "Print kernel weights");
  weights->add_option("--strategy", strategy,
                      "uniform | alignment | snr | upr_qp")
      ->required();
  weights->add_option("--config", config_path)->required();
  weights->add_option("--rho", ridge, "rho_snr for the snr strategy");

  std::string in, format = "table";
  auto* report = app.add_subcommand("report", "Render a stored report");
  report->add_option("--in", in, "Structured report file")->required();
  report->add_option("--format", format)
      ->check(CLI::IsMember({"table", "json"}));

  SyntheticSpec spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write the synthetic benchmark");
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--samples", spec.samples);
  synth->add_option("--features", spec.features);
  synth->add_option("--separation", spec.separation);
  synth->add_option("--seed", spec.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(config_path, json_out, table_out,
                                          timing);
    if (gram_cmd->parsed()) {
      return gram_command(kernel, data, utility_label, privacy_label, center,
                          normalize, !no_standardize, out);
    }
    if (weights->parsed()) return weights_command(config_path, strategy, ridge);
    if (report->parsed()) return report_command(in, format);
    if (synth->parsed()) return synth_command(spec, synth_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
