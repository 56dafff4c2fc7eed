// Copyright 2026 The socsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// socsim: run, compare and sweep admission-control scenarios.

#include "socsim/batch.hpp"
#include "socsim/output.hpp"
#include "socsim/scenario.hpp"
#include "socsim/simulator.hpp"
#include "socsim/stats.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

socsim::PolicyKind policy_or_throw(const std::string& name) {
  auto k = socsim::parse_policy_kind(name);
  if (!k) throw socsim::ConfigError("unknown policy '" + name + "'");
  return *k;
}

struct SummaryField {
  std::string name;
  double (*get)(const socsim::RunResult&);
};

std::optional<double> db_rt95(const socsim::RunResult& r) { return r.summary.rt95.back(); }

const std::vector<SummaryField>& summary_fields() {
  static const std::vector<SummaryField> fields = {
      {"mean_lambda_in", [](const socsim::RunResult& r) { return r.summary.mean_lambda_in; }},
      {"mean_lambda_adm", [](const socsim::RunResult& r) { return r.summary.mean_lambda_adm; }},
      {"mean_p", [](const socsim::RunResult& r) { return r.summary.mean_admission_probability; }},
      {"throughput", [](const socsim::RunResult& r) { return r.summary.throughput; }},
      {"rejection_rate", [](const socsim::RunResult& r) { return r.summary.rejection_rate; }},
      {"sla_violation_fraction", [](const socsim::RunResult& r) { return r.summary.sla_violation_fraction; }},
      {"rt95_last_tier", [](const socsim::RunResult& r) { return db_rt95(r).value_or(0.0); }},
      {"rt95_cv_last_tier", [](const socsim::RunResult& r) { return r.summary.rt95_window_cv.back(); }},
      {"abandoned", [](const socsim::RunResult& r) { return static_cast<double>(r.summary.abandoned_sessions); }},
  };
  return fields;
}

int cmd_run(const std::string& path, const std::optional<std::string>& policy,
            const std::optional<std::uint64_t>& seed, const std::optional<double>& horizon,
            const std::string& out_dir) {
  auto sc = socsim::load_scenario(path);
  if (policy) sc.policy.kind = policy_or_throw(*policy);
  if (seed) sc.seed = *seed;
  if (horizon) sc.horizon = *horizon;
  sc.validate();
  const auto result = socsim::run(sc);
  socsim::write_run_outputs(out_dir, result, sc);
  socsim::write_comparison_table(std::cout, {result.policy}, {result});
  return kOk;
}

int cmd_compare(const std::string& path, const std::string& policies, const std::string& out_dir) {
  const auto base = socsim::load_scenario(path);
  const auto names = split_list(policies);
  if (names.size() < 2) throw socsim::ConfigError("compare needs at least two policies");
  std::vector<socsim::Scenario> runs;
  for (const auto& n : names) {
    auto sc = base;
    sc.policy.kind = policy_or_throw(n);
    sc.validate();
    runs.push_back(sc);
  }
  const auto results = socsim::run_batch_parallel(runs);
  for (std::size_t i = 0; i < results.size(); ++i) {
    socsim::write_run_outputs((std::filesystem::path(out_dir) / names[i]).string(), results[i], runs[i]);
  }
  std::ofstream table(std::filesystem::path(out_dir) / "compare.txt", std::ios::binary);
  socsim::write_comparison_table(table, names, results);
  socsim::write_comparison_table(std::cout, names, results);
  return kOk;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::string& values,
              const std::string& out_dir) {
  if (!socsim::is_sweep_parameter(param))
    throw socsim::ConfigError("unknown sweep parameter '" + param +
                              "' (arrival_rate, T_AC, l_lambda, k_sigma, seed)");
  const auto base = socsim::load_scenario(path);
  const auto value_text = split_list(values);
  if (value_text.empty()) throw socsim::ConfigError("--values must list at least one value");
  std::vector<socsim::Scenario> runs;
  for (const auto& v : value_text) {
    auto sc = base;
    double x = 0.0;
    try {
      x = std::stod(v);
    } catch (const std::exception&) {
      throw socsim::ConfigError("--values: '" + v + "' is not a number");
    }
    socsim::apply_parameter(sc, param, x);
    runs.push_back(sc);
  }
  const auto results = socsim::run_batch_parallel(runs);

  std::filesystem::create_directories(out_dir);
  std::ofstream csv(std::filesystem::path(out_dir) / "sweep.csv", std::ios::binary);
  const auto& fields = summary_fields();
  csv << param;
  std::cout << param;
  for (const auto& f : fields) {
    csv << ',' << f.name;
    std::cout << '\t' << f.name;
  }
  csv << '\n';
  std::cout << '\n';
  for (std::size_t i = 0; i < results.size(); ++i) {
    csv << value_text[i];
    std::cout << value_text[i];
    for (const auto& f : fields) {
      const auto s = socsim::format_number(f.get(results[i]));
      csv << ',' << s;
      std::cout << '\t' << s;
    }
    csv << '\n';
    std::cout << '\n';
  }
  // Replication summary: mean and sample standard deviation per metric.
  std::cout << "mean+-std";
  csv << "mean";
  std::ostringstream std_row;
  std_row << "std";
  for (const auto& f : fields) {
    socsim::RunningMoments m;
    for (const auto& r : results) m.add(f.get(r));
    csv << ',' << socsim::format_number(m.mean());
    std_row << ',' << socsim::format_number(m.stddev());
    std::cout << '\t' << socsim::format_number(m.mean()) << "+-" << socsim::format_number(m.stddev());
  }
  csv << '\n' << std_row.str() << '\n';
  std::cout << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"socsim - session admission control simulator"};
  app.require_subcommand(1);

  std::string scenario, out_dir = "out", policies, param, values;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--policy", policy, "Override the policy (soc, soc-base, tbac, pac, always)");
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--horizon", horizon, "Override the horizon in seconds");
  run->add_option("--out", out_dir, "Output directory");

  auto* compare = app.add_subcommand("compare", "Run several policies on identical traffic");
  compare->add_option("scenario", scenario, "Scenario file")->required();
  compare->add_option("--policies", policies, "Comma-separated policy list")->required();
  compare->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter");
  sweep->add_option("scenario", scenario, "Scenario file")->required();
  sweep->add_option("--param", param, "arrival_rate, T_AC, l_lambda, k_sigma or seed")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(scenario, policy, seed, horizon, out_dir);
    if (*compare) return cmd_compare(scenario, policies, out_dir);
    if (*sweep) return cmd_sweep(scenario, param, values, out_dir);
  } catch (const socsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const socsim::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
