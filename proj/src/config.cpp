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

#include "cmkl/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "cmkl/error.hpp"

namespace cmkl {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (train_path.empty()) throw ConfigError("data.train is required");
  if (test_path.empty() && !(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("data.test_fraction must lie in (0, 1)");
  }
  if (schema.utility_label.empty() || schema.privacy_label.empty()) {
    throw ConfigError("data.utility_label and data.privacy_label are required");
  }
  if (kernels.empty()) throw ConfigError("at least one kernel is required");
  for (const auto& k : kernels) {
    k.spec.validate();
    if (k.q < 0) throw ConfigError("kernel q must be >= 1");
  }
  if (rho < 0.0 || rho_prime < 0.0) {
    throw ConfigError("dca ridges must be non-negative");
  }
  for (double r : snr_ridges) {
    if (r < 0.0) throw ConfigError("snr ridges must be non-negative");
  }
  if (c_grid.empty()) throw ConfigError("svm.c_grid is empty");
  for (double c : c_grid) {
    if (!(c > 0.0)) throw ConfigError("svm.c_grid entries must be positive");
  }
  if (folds < 2) throw ConfigError("svm.folds must be >= 2");
  if (!(svm.tolerance > 0.0)) throw ConfigError("svm.tolerance must be > 0");
}

KernelEntry kernel_entry_from_json(const json& doc) {
  reject_unknown(doc, {"kind", "gamma", "degree", "c0", "q"}, "kernel");
  KernelEntry entry;
  if (!doc.contains("kind")) throw ConfigError("kernel.kind is required");
  entry.spec.kind = parse_kernel_kind(doc.at("kind").get<std::string>());
  read(doc, "gamma", entry.spec.gamma);
  read(doc, "degree", entry.spec.degree);
  read(doc, "c0", entry.spec.c0);
  if (doc.contains("q")) {
    entry.q = doc.at("q").get<Index>();
    if (entry.q < 1) throw ConfigError("kernel q must be >= 1");
  }
  entry.spec.validate();
  return entry;
}

ExperimentConfig config_from_json(const json& doc, const std::string& base_dir) {
  ExperimentConfig cfg;
  try {
    reject_unknown(doc, {"name", "data", "kernels", "dca", "methods", "svm",
                         "output", "seed"},
                   "config");
    read(doc, "name", cfg.name);
    read(doc, "seed", cfg.seed);

    if (!doc.contains("data")) throw ConfigError("config.data is required");
    const json& data = doc.at("data");
    reject_unknown(data, {"train", "test", "test_fraction", "features",
                          "utility_label", "privacy_label", "standardize"},
                   "data");
    read(data, "train", cfg.train_path);
    read(data, "test", cfg.test_path);
    cfg.train_path = resolve(cfg.train_path, base_dir);
    cfg.test_path = resolve(cfg.test_path, base_dir);
    read(data, "test_fraction", cfg.test_fraction);
    read(data, "features", cfg.schema.features);
    read(data, "utility_label", cfg.schema.utility_label);
    read(data, "privacy_label", cfg.schema.privacy_label);
    read(data, "standardize", cfg.schema.standardize);

    if (!doc.contains("kernels") || !doc.at("kernels").is_array()) {
      throw ConfigError("config.kernels must be an array");
    }
    for (const auto& k : doc.at("kernels")) {
      cfg.kernels.push_back(kernel_entry_from_json(k));
    }

    if (doc.contains("dca")) {
      const json& dca = doc.at("dca");
      reject_unknown(dca, {"rho", "rho_prime"}, "dca");
      read(dca, "rho", cfg.rho);
      read(dca, "rho_prime", cfg.rho_prime);
    }
    if (doc.contains("methods")) {
      const json& m = doc.at("methods");
      reject_unknown(m, {"single", "uniform", "alignment", "snr_ridges",
                         "upr_qp", "ratio_form"},
                     "methods");
      read(m, "single", cfg.run_single);
      read(m, "uniform", cfg.run_uniform);
      read(m, "alignment", cfg.run_alignment);
      read(m, "snr_ridges", cfg.snr_ridges);
      read(m, "upr_qp", cfg.run_upr_qp);
      if (m.contains("ratio_form")) {
        const auto form = m.at("ratio_form").get<std::string>();
        if (form == "congruent") {
          cfg.ratio_form = RatioForm::kCongruent;
        } else if (form == "product_svd") {
          cfg.ratio_form = RatioForm::kProductSvd;
        } else {
          throw ConfigError("methods.ratio_form must be congruent or "
                            "product_svd");
        }
      }
    }
    if (doc.contains("svm")) {
      const json& s = doc.at("svm");
      reject_unknown(s, {"c_grid", "folds", "tolerance", "working_set",
                         "multiclass"}, "svm");
      read(s, "c_grid", cfg.c_grid);
      read(s, "folds", cfg.folds);
      read(s, "tolerance", cfg.svm.tolerance);
      if (s.contains("working_set")) {
        const auto rule = s.at("working_set").get<std::string>();
        if (rule == "max_violating_pair") {
          cfg.svm.rule = WorkingSetRule::kMaxViolatingPair;
        } else if (rule == "second_order") {
          cfg.svm.rule = WorkingSetRule::kSecondOrder;
        } else {
          throw ConfigError("svm.working_set must be max_violating_pair or "
                            "second_order");
        }
      }
      if (s.contains("multiclass")) {
        const auto scheme = s.at("multiclass").get<std::string>();
        if (scheme == "one_vs_rest") {
          cfg.svm.multiclass = Multiclass::kOneVsRest;
        } else if (scheme == "one_vs_one") {
          cfg.svm.multiclass = Multiclass::kOneVsOne;
        } else {
          throw ConfigError("svm.multiclass must be one_vs_rest or "
                            "one_vs_one");
        }
      }
    }
    if (doc.contains("output")) {
      const json& o = doc.at("output");
      reject_unknown(o, {"json", "table", "timing"}, "output");
      read(o, "json", cfg.json_path);
      read(o, "table", cfg.table_path);
      read(o, "timing", cfg.record_timing);
      cfg.json_path = resolve(cfg.json_path, base_dir);
      cfg.table_path = resolve(cfg.table_path, base_dir);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  return config_from_json(doc, dir);
}

}  // namespace cmkl
