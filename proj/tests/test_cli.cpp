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

#include "doctest.h"
#include "support.hpp"

#include "socsim/batch.hpp"
#include "socsim/output.hpp"
#include "socsim/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace socsim;
namespace fs = std::filesystem;

namespace {

const std::string kScenarioDir = SOCSIM_SOURCE_DIR "/scenarios";

const char* kMinimal = R"(schema_version: 1
seed: 3
horizon: 500
cluster:
  tiers:
    - {name: web, servers: 4, mean_service: 0.1}
    - {name: db, servers: 2, mean_service: 0.5}
sla:
  rt_limit: [1, 3]
  lambda_min: 1
  check_interval: 20
traffic:
  profile:
    - {start: 0, rate: 2}
  session:
    phases:
      - {tier: 1, count: 2}
      - {tier: 2, count: {dist: uniform, low: 1, high: 3}}
    think_mean: 5
    think_floor: 1
    client_timeout: inf
policy:
  name: pac
  pac: {period: 20, rt_low: 1, rt_high: 2}
output:
  sample_interval: 20
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "x.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("socsim_test_" + name);
  fs::remove_all(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SOCSIM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("scenario parsing: a complete file") {
  const Scenario sc = parse_scenario(kMinimal);
  CHECK(sc.seed == 3);
  CHECK(sc.cluster.tier_count() == 2);
  CHECK(sc.cluster.tiers[1].server_count == 2);
  CHECK(sc.session.phase_plan[1].tier == TierIndex{1});
  CHECK(sc.session.phase_plan[1].count.kind == CountDistribution::Kind::uniform);
  CHECK(std::isinf(sc.session.client_timeout));
  CHECK(sc.policy.kind == PolicyKind::pac);
  CHECK(sc.policy.pac.rt_high == 2.0);
  CHECK(sc.policy.tbac.rt_threshold == std::vector<double>{1.0, 3.0});
  CHECK(sc.effective_warmup() == doctest::Approx(400.0));
}

TEST_CASE("scenario parsing: errors carry the line number") {
  CHECK(error_of(replace(kMinimal, "  lambda_min: 1\n", "")).find("x.yaml:") == 0);
  CHECK(error_of(replace(kMinimal, "  lambda_min: 1\n", "")).find("lambda_min") != std::string::npos);
  const auto unknown = error_of(replace(kMinimal, "seed: 3", "seed: 3\nsedd: 4"));
  CHECK(unknown.find("x.yaml:3") == 0);
  CHECK(unknown.find("sedd") != std::string::npos);
  const auto bad_tier = error_of(replace(kMinimal, "{tier: 2, count", "{tier: 7, count"));
  CHECK(bad_tier.find("x.yaml:18") == 0);
  const auto bad_number = error_of(replace(kMinimal, "horizon: 500", "horizon: soon"));
  CHECK(bad_number.find("x.yaml:3") == 0);
  CHECK(error_of(replace(kMinimal, "schema_version: 1", "schema_version: 9")).find("schema") !=
        std::string::npos);
  CHECK(error_of(replace(kMinimal, "name: pac", "name: magic")).find("magic") != std::string::npos);
  CHECK(error_of(replace(kMinimal, "horizon: 500", "horizon: 100")).find("warmup") !=
        std::string::npos);
  CHECK(error_of("[1, 2").find("x.yaml") == 0);
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.yaml"), ConfigError);
}

TEST_CASE("canned scenarios load") {
  for (const char* name : {"steady", "oscillation", "insensitivity", "flash_crowd"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_scenario(kScenarioDir + "/" + name + ".yaml"));
  }
}

TEST_CASE("policy names") {
  CHECK(parse_policy_kind("soc") == PolicyKind::soc);
  CHECK(parse_policy_kind("soc-base") == PolicyKind::soc_base);
  CHECK(parse_policy_kind("soc-fcm") == PolicyKind::soc);
  CHECK(parse_policy_kind("tbac") == PolicyKind::tbac);
  CHECK(parse_policy_kind("always") == PolicyKind::always);
  CHECK_FALSE(parse_policy_kind("nope").has_value());
}

TEST_CASE("sweep parameters") {
  Scenario sc = default_scenario();
  apply_parameter(sc, "arrival_rate", 3.0);
  CHECK(sc.profile.rate_at(100.0) == 3.0);
  apply_parameter(sc, "T_AC", 20.0);
  CHECK(sc.policy.soc.control_period == 20.0);
  apply_parameter(sc, "l_lambda", 0.4);
  CHECK(sc.policy.soc.slice_width == 0.4);
  apply_parameter(sc, "k_sigma", 2.0);
  CHECK(sc.policy.soc.k_sigma == 2.0);
  apply_parameter(sc, "seed", 17.0);
  CHECK(sc.seed == 17);
  CHECK_THROWS_AS(apply_parameter(sc, "seed", 1.5), ConfigError);
  CHECK_THROWS_AS(apply_parameter(sc, "servers", 1.0), ConfigError);
  CHECK(is_sweep_parameter("T_AC"));
  CHECK_FALSE(is_sweep_parameter("horizon"));
}

TEST_CASE("session capacity of the default cluster") {
  CHECK(session_capacity(default_scenario()) == doctest::Approx(4.0));
}

TEST_CASE("serial and parallel batches agree") {
  std::vector<Scenario> runs;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) runs.push_back(test::three_tier(8.0, 600.0, PolicyKind::soc, seed));
  const auto serial = run_batch_serial(runs);
  const auto parallel = run_batch_parallel(runs);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    std::ostringstream a, b;
    write_series_csv(a, serial[i], runs[i]);
    write_series_csv(b, parallel[i], runs[i]);
    CHECK(a.str() == b.str());
    CHECK(summary_to_json(serial[i], runs[i]).dump() == summary_to_json(parallel[i], runs[i]).dump());
  }
}

TEST_CASE("batch errors propagate") {
  std::vector<Scenario> runs{test::three_tier(8.0, 600.0, PolicyKind::soc)};
  runs.push_back(runs.front());
  runs.back().horizon = -1.0;
  CHECK_THROWS_AS(run_batch_parallel(runs), ConfigError);
}

TEST_CASE("output files are byte-identical across repeated runs") {
  const Scenario sc = load_scenario(kScenarioDir + "/flash_crowd.yaml");
  const fs::path a = temp_dir("rep_a"), b = temp_dir("rep_b");
  write_run_outputs(a.string(), run(sc), sc);
  write_run_outputs(b.string(), run(sc), sc);
  for (const char* f : {"series.csv", "decisions.csv", "compliance.csv", "summary.json", "curves.txt"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "series.csv").rfind("time,lambda_in,lambda_adm,p,lambda_star,rt95_http", 0) == 0);
}

TEST_CASE("summary echoes the effective configuration") {
  Scenario sc = test::three_tier(8.0, 600.0, PolicyKind::tbac, 9);
  const auto j = summary_to_json(run(sc), sc);
  CHECK(j["config"]["seed"] == 9);
  CHECK(j["config"]["policy"]["name"] == "tbac");
  CHECK(j["config"]["horizon"] == 600.0);
  CHECK(j["policy"] == "tbac");
}

TEST_CASE("comparing a policy with itself gives identical results") {
  const Scenario sc = test::three_tier(8.0, 600.0, PolicyKind::pac);
  const auto r = run_batch_parallel({sc, sc});
  std::ostringstream a, b;
  write_series_csv(a, r[0], sc);
  write_series_csv(b, r[1], sc);
  CHECK(a.str() == b.str());
}

TEST_CASE("command line exit codes and outputs") {
  const fs::path out = temp_dir("cli");
  const std::string steady = kScenarioDir + "/steady.yaml";
  CHECK(run_cli("run " + steady + " --horizon 600 --policy tbac --seed 4 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "series.csv"));
  CHECK(fs::exists(out / "summary.json"));
  {
    std::ifstream f(out / "summary.json");
    const auto j = nlohmann::json::parse(f);
    CHECK(j["config"]["seed"] == 4);
    CHECK(j["config"]["horizon"] == 600.0);
    CHECK(j["config"]["policy"]["name"] == "tbac");
  }

  CHECK(run_cli("run /nonexistent.yaml") == 1);
  CHECK(run_cli("run " + steady + " --policy bogus") == 1);
  CHECK(run_cli("run " + steady + " --horizon 100") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("compare " + steady + " --policies soc") == 1);
  CHECK(run_cli("sweep " + steady + " --param horizon --values 1,2") == 1);

  const fs::path cmp = temp_dir("cli_cmp");
  CHECK(run_cli("compare " + steady + " --policies soc,tbac --out " + cmp.string()) == 0);
  CHECK(fs::exists(cmp / "soc" / "series.csv"));
  CHECK(fs::exists(cmp / "tbac" / "series.csv"));
  CHECK(fs::exists(cmp / "compare.txt"));

  const fs::path sw = temp_dir("cli_sweep");
  CHECK(run_cli("sweep " + steady + " --param seed --values 1,2,3 --out " + sw.string()) == 0);
  const std::string table = slurp(sw / "sweep.csv");
  CHECK(table.rfind("seed,", 0) == 0);
  CHECK(table.find("\nmean,") != std::string::npos);
  CHECK(table.find("\nstd,") != std::string::npos);
}
