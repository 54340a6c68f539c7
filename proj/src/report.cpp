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

#include "cmkl/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cmkl/csv.hpp"
#include "cmkl/error.hpp"

namespace cmkl {
namespace {

using nlohmann::ordered_json;

template <typename T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const ordered_json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<T>();
}

std::string two_decimals(double percent) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", percent);
  return buf;
}

}  // namespace

std::string format_percent(double fraction) {
  return two_decimals(100.0 * fraction);
}

ordered_json report_to_json(const ExperimentReport& r) {
  ordered_json doc;
  doc["schema"] = "cmkl.report/1";
  doc["name"] = r.name;
  doc["dataset"] = {{"train_samples", r.train_samples},
                    {"test_samples", r.test_samples},
                    {"features", r.feature_dim},
                    {"utility_classes", r.utility_classes},
                    {"privacy_classes", r.privacy_classes}};
  doc["baselines"] = {{"utility", r.baseline_utility},
                      {"privacy", r.baseline_privacy}};
  doc["rank_budget"] = {{"total", r.budget.total},
                        {"feature_dim", r.budget.feature_dim},
                        {"margin", r.budget.margin},
                        {"compliant", r.budget.compliant}};
  doc["snr_ridges"] = r.snr_ridges;
  ordered_json kernels = ordered_json::array();
  for (const auto& k : r.kernels) {
    kernels.push_back({{"name", k.name},
                       {"q", k.q},
                       {"snr", k.snr},
                       {"failure", optional_json(k.failure)}});
  }
  doc["kernels"] = kernels;
  ordered_json methods = ordered_json::array();
  for (const auto& m : r.methods) {
    ordered_json row;
    row["name"] = m.name;
    row["strategy"] = m.strategy;
    row["ridge"] = optional_json(m.ridge);
    row["failure"] = optional_json(m.failure);
    row["utility"] = optional_json(m.utility);
    row["privacy"] = optional_json(m.privacy);
    row["weights"] = m.weights;
    row["snr_scores"] = m.snr_scores;
    row["rank_budget_compliant"] = m.rank_budget_compliant;
    row["released_rank"] = m.released_rank;
    row["c_utility"] = optional_json(m.c_utility);
    row["c_privacy"] = optional_json(m.c_privacy);
    if (m.wall_seconds) row["wall_seconds"] = *m.wall_seconds;
    methods.push_back(row);
  }
  doc["methods"] = methods;
  return doc;
}

ExperimentReport report_from_json(const ordered_json& doc) {
  ExperimentReport r;
  try {
    if (doc.value("schema", std::string()) != "cmkl.report/1") {
      throw DataError("report: unsupported or missing schema tag");
    }
    r.name = doc.at("name").get<std::string>();
    const auto& ds = doc.at("dataset");
    r.train_samples = ds.at("train_samples").get<Index>();
    r.test_samples = ds.at("test_samples").get<Index>();
    r.feature_dim = ds.at("features").get<Index>();
    r.utility_classes = ds.at("utility_classes").get<int>();
    r.privacy_classes = ds.at("privacy_classes").get<int>();
    r.baseline_utility = doc.at("baselines").at("utility").get<double>();
    r.baseline_privacy = doc.at("baselines").at("privacy").get<double>();
    const auto& rb = doc.at("rank_budget");
    r.budget.total = rb.at("total").get<Index>();
    r.budget.feature_dim = rb.at("feature_dim").get<Index>();
    r.budget.margin = rb.at("margin").get<Index>();
    r.budget.compliant = rb.at("compliant").get<bool>();
    r.snr_ridges = doc.at("snr_ridges").get<std::vector<double>>();
    for (const auto& k : doc.at("kernels")) {
      KernelSummary s;
      s.name = k.at("name").get<std::string>();
      s.q = k.at("q").get<Index>();
      s.snr = k.at("snr").get<std::vector<double>>();
      s.failure = optional_from<std::string>(k, "failure");
      r.kernels.push_back(std::move(s));
    }
    for (const auto& row : doc.at("methods")) {
      MethodRow m;
      m.name = row.at("name").get<std::string>();
      m.strategy = row.at("strategy").get<std::string>();
      m.ridge = optional_from<double>(row, "ridge");
      m.failure = optional_from<std::string>(row, "failure");
      m.utility = optional_from<double>(row, "utility");
      m.privacy = optional_from<double>(row, "privacy");
      m.weights = row.at("weights").get<std::vector<double>>();
      m.snr_scores = row.at("snr_scores").get<std::vector<double>>();
      m.rank_budget_compliant = row.at("rank_budget_compliant").get<bool>();
      m.released_rank = row.at("released_rank").get<Index>();
      m.c_utility = optional_from<double>(row, "c_utility");
      m.c_privacy = optional_from<double>(row, "c_privacy");
      m.wall_seconds = optional_from<double>(row, "wall_seconds");
      r.methods.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report: ") + e.what());
  }
  return r;
}

std::string format_table(const ExperimentReport& r) {
  struct Line {
    std::string label, utility, privacy;
  };
  std::vector<Line> lines;
  lines.push_back({"Random guess", two_decimals(r.baseline_utility),
                   two_decimals(r.baseline_privacy)});
  for (const auto& m : r.methods) {
    if (m.failure) {
      lines.push_back({m.name, "failed", *m.failure});
    } else {
      lines.push_back({m.name, two_decimals(m.utility.value_or(0.0)),
                       two_decimals(m.privacy.value_or(0.0))});
    }
  }
  std::size_t width = std::string("Method").size();
  for (const auto& l : lines) width = std::max(width, l.label.size());

  std::ostringstream os;
  os << r.name << "\n";
  auto put = [&](const std::string& a, const std::string& b,
                 const std::string& c) {
    os << a << std::string(width - a.size() + 2, ' ');
    os << std::string(b.size() < 11 ? 11 - b.size() : 0, ' ') << b << "  ";
    os << std::string(c.size() < 11 ? 11 - c.size() : 0, ' ') << c << "\n";
  };
  put("Method", "Utility (%)", "Privacy (%)");
  os << std::string(width + 2 + 11 + 2 + 11, '-') << "\n";
  for (const auto& l : lines) put(l.label, l.utility, l.privacy);
  os << "\nrank budget: sum Q = " << r.budget.total
     << ", M = " << r.budget.feature_dim << " ("
     << (r.budget.compliant ? "compliant" : "NOT compliant") << ")\n";
  return os.str();
}

void emit_report(const ExperimentReport& report, const std::string& json_path,
                 const std::string& table_path) {
  if (!json_path.empty()) {
    std::ofstream out = open_output(json_path);
    out << report_to_json(report).dump(2) << "\n";
    if (!out) throw ConfigError("failed writing '" + json_path + "'");
  }
  if (!table_path.empty()) {
    std::ofstream out = open_output(table_path);
    out << format_table(report);
    if (!out) throw ConfigError("failed writing '" + table_path + "'");
  }
}

ExperimentReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report '" + path + "'");
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("report '" + path + "': " + e.what());
  }
  return report_from_json(doc);
}

}  // namespace cmkl
