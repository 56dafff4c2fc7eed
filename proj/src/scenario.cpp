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

#include "socsim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace socsim {

const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::always: return "always";
    case PolicyKind::soc: return "soc";
    case PolicyKind::soc_base: return "soc-base";
    case PolicyKind::tbac: return "tbac";
    case PolicyKind::pac: return "pac";
    case PolicyKind::fixed: return "fixed";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(const std::string& name) {
  if (name == "always") return PolicyKind::always;
  if (name == "soc" || name == "soc-fcm") return PolicyKind::soc;
  if (name == "soc-base") return PolicyKind::soc_base;
  if (name == "tbac") return PolicyKind::tbac;
  if (name == "pac") return PolicyKind::pac;
  if (name == "fixed") return PolicyKind::fixed;
  return std::nullopt;
}

double Scenario::effective_warmup() const {
  return warmup ? *warmup : 10.0 * policy.soc.control_period;
}

void Scenario::validate() {
  if (schema_version != kScenarioSchemaVersion)
    throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
  if (!(horizon > 0.0)) throw ConfigError("horizon must be > 0");
  cluster.validate();
  sla.validate();
  if (sla.tier_count() != cluster.tier_count())
    throw ConfigError("sla.rt_limit has " + std::to_string(sla.tier_count()) +
                      " entries but the cluster has " + std::to_string(cluster.tier_count()) +
                      " tiers");
  profile.validate();
  session.validate(cluster.tier_count());
  if (!(effective_warmup() >= 0.0)) throw ConfigError("warmup must be >= 0");
  if (!(horizon > effective_warmup()))
    throw ConfigError("horizon must exceed the warmup (" + std::to_string(effective_warmup()) +
                      " s)");
  if (!(output.sample_interval > 0.0)) throw ConfigError("output.sample_interval must be > 0");

  policy.soc.validate();
  if (policy.tbac.rt_threshold.empty()) policy.tbac.rt_threshold = sla.rt_limit;
  policy.tbac.validate(cluster.tier_count());
  policy.pac.validate();
  if (!(policy.fixed_p >= 0.0 && policy.fixed_p <= 1.0))
    throw ConfigError("policy.fixed_p must lie in [0, 1]");
}

std::unique_ptr<AdmissionPolicy> make_policy(const Scenario& sc, RandomStream& bench) {
  switch (sc.policy.kind) {
    case PolicyKind::always: return std::make_unique<AlwaysAdmitPolicy>();
    case PolicyKind::fixed: return std::make_unique<FixedProbabilityPolicy>(sc.policy.fixed_p);
    case PolicyKind::tbac: {
      TbacConfig cfg = sc.policy.tbac;
      if (cfg.rt_threshold.empty()) cfg.rt_threshold = sc.sla.rt_limit;
      return std::make_unique<TbacPolicy>(cfg, sc.cluster.tier_count());
    }
    case PolicyKind::pac: return std::make_unique<PacPolicy>(sc.policy.pac, sc.cluster.tier_count());
    case PolicyKind::soc:
    case PolicyKind::soc_base: {
      SocConfig cfg = sc.policy.soc;
      cfg.change_detection = sc.policy.kind == PolicyKind::soc && cfg.change_detection;
      std::vector<double> bench_rt;
      if (cfg.bench_anchor) bench_rt = benchmark_idle(sc.cluster, bench, cfg.bench_samples);
      return std::make_unique<SocPolicy>(cfg, sc.sla, bench_rt);
    }
  }
  throw ConfigError("unknown policy");
}

Scenario default_scenario() {
  Scenario sc;
  sc.seed = 1;
  sc.horizon = 4000.0;
  sc.cluster.tiers = {{"http", 20, 0.001}, {"servlet", 20, 0.01}, {"database", 20, 1.0}};
  sc.sla.rt_limit = {1.0, 2.0, 5.0};
  sc.sla.lambda_min = 2.0;
  sc.sla.check_interval = 40.0;
  sc.profile = TrafficProfile::constant(8.0);
  sc.session.phase_plan = {{TierIndex{0}, CountDistribution::geometric_mean(5.0)},
                           {TierIndex{1}, CountDistribution::geometric_mean(5.0)},
                           {TierIndex{2}, CountDistribution::geometric_mean(5.0)}};
  sc.session.think_mean = 10.0;
  sc.session.think_floor = 1.0;
  sc.session.client_timeout = 8.0;
  sc.policy.kind = PolicyKind::soc;
  sc.policy.pac = {3.0, 5.0, 40.0};
  sc.policy.tbac.period = 40.0;
  sc.output.sample_interval = 40.0;
  sc.validate();
  return sc;
}

double session_capacity(const Scenario& sc) {
  std::vector<double> per_tier_requests(sc.cluster.tier_count(), 0.0);
  for (const auto& ph : sc.session.phase_plan) per_tier_requests[ph.tier.value] += ph.count.expected();
  double cap = kInfinity;
  for (std::size_t i = 0; i < sc.cluster.tier_count(); ++i) {
    const auto& t = sc.cluster.tiers[i];
    const double demand = per_tier_requests[i] * t.mean_service_time;
    if (demand > 0.0) cap = std::min(cap, t.server_count / demand);
  }
  return cap;
}

// ---------------------------------------------------------------------------
// YAML loading

namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    std::ostringstream os;
    os << origin_;
    if (at.IsDefined() && at.Mark().line >= 0) os << ":" << at.Mark().line + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  YAML::Node required(const YAML::Node& parent, const char* key, const std::string& path) const {
    if (!parent.IsMap()) fail(parent, path + " must be a mapping");
    YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) fail(parent, "missing required field '" + path + key + "'");
    return n;
  }

  template <typename T>
  T as(const YAML::Node& n, const std::string& what) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "invalid value for " + what);
    }
  }

  double number(const YAML::Node& n, const std::string& what) const {
    if (n.IsScalar()) {
      const auto& s = n.Scalar();
      if (s == "inf" || s == ".inf" || s == "infinity") return kInfinity;
    }
    const double v = as<double>(n, what);
    if (std::isnan(v)) fail(n, what + " must be a number");
    return v;
  }

  double number_or(const YAML::Node& parent, const char* key, double fallback,
                   const std::string& path) const {
    YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) return fallback;
    return number(n, path + key);
  }

  void reject_unknown(const YAML::Node& map, std::initializer_list<const char*> allowed,
                      const std::string& path) const {
    if (!map.IsMap()) fail(map, path + " must be a mapping");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) fail(kv.first, "unknown field '" + path + key + "'");
    }
  }

 private:
  std::string origin_;
};

CountDistribution parse_count(const Reader& r, const YAML::Node& n, const std::string& path) {
  if (n.IsScalar()) return CountDistribution::fixed_count(r.as<int>(n, path));
  r.reject_unknown(n, {"dist", "value", "mean", "low", "high"}, path + ".");
  const auto dist = r.as<std::string>(r.required(n, "dist", path + "."), path + ".dist");
  CountDistribution c;
  if (dist == "fixed") {
    c = CountDistribution::fixed_count(r.as<int>(r.required(n, "value", path + "."), path + ".value"));
  } else if (dist == "geometric") {
    c = CountDistribution::geometric_mean(r.number(r.required(n, "mean", path + "."), path + ".mean"));
  } else if (dist == "uniform") {
    c.kind = CountDistribution::Kind::uniform;
    c.low = r.as<int>(r.required(n, "low", path + "."), path + ".low");
    c.high = r.as<int>(r.required(n, "high", path + "."), path + ".high");
  } else {
    r.fail(n["dist"], "unknown count distribution '" + dist + "' (fixed, geometric, uniform)");
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    r.fail(n, e.what());
  }
  return c;
}

std::vector<double> parse_number_list(const Reader& r, const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) r.fail(n, path + " must be a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(r.number(n[i], path));
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Reader r(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(origin + ": scenario must be a mapping");
  r.reject_unknown(root, {"schema_version", "seed", "horizon", "warmup", "cluster", "sla",
                          "traffic", "policy", "output"},
                   "");

  Scenario sc;
  sc.schema_version = r.as<int>(r.required(root, "schema_version", ""), "schema_version");
  if (sc.schema_version != kScenarioSchemaVersion)
    r.fail(root["schema_version"], "unsupported schema_version " + std::to_string(sc.schema_version));
  sc.seed = r.as<std::uint64_t>(r.required(root, "seed", ""), "seed");
  sc.horizon = r.number(r.required(root, "horizon", ""), "horizon");
  if (root["warmup"].IsDefined()) sc.warmup = r.number(root["warmup"], "warmup");

  // cluster
  const YAML::Node cluster = r.required(root, "cluster", "");
  r.reject_unknown(cluster, {"tiers"}, "cluster.");
  const YAML::Node tiers = r.required(cluster, "tiers", "cluster.");
  if (!tiers.IsSequence() || tiers.size() == 0) r.fail(tiers, "cluster.tiers must be a non-empty list");
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    const std::string path = "cluster.tiers[" + std::to_string(i + 1) + "].";
    r.reject_unknown(tiers[i], {"name", "servers", "mean_service"}, path);
    TierSpec t;
    t.name = tiers[i]["name"] ? r.as<std::string>(tiers[i]["name"], path + "name")
                              : "tier" + std::to_string(i + 1);
    t.server_count = r.as<int>(r.required(tiers[i], "servers", path), path + "servers");
    t.mean_service_time = r.number(r.required(tiers[i], "mean_service", path), path + "mean_service");
    if (t.server_count < 1) r.fail(tiers[i]["servers"], path + "servers must be >= 1");
    if (!(t.mean_service_time > 0.0)) r.fail(tiers[i]["mean_service"], path + "mean_service must be > 0");
    sc.cluster.tiers.push_back(t);
  }

  // sla
  const YAML::Node sla = r.required(root, "sla", "");
  r.reject_unknown(sla, {"rt_limit", "lambda_min", "check_interval"}, "sla.");
  sc.sla.rt_limit = parse_number_list(r, r.required(sla, "rt_limit", "sla."), "sla.rt_limit");
  sc.sla.lambda_min = r.number(r.required(sla, "lambda_min", "sla."), "sla.lambda_min");
  sc.sla.check_interval = r.number(r.required(sla, "check_interval", "sla."), "sla.check_interval");
  if (sc.sla.rt_limit.size() != sc.cluster.tier_count())
    r.fail(sla["rt_limit"], "sla.rt_limit must list one value per tier");

  // traffic
  const YAML::Node traffic = r.required(root, "traffic", "");
  r.reject_unknown(traffic, {"profile", "session"}, "traffic.");
  const YAML::Node profile = r.required(traffic, "profile", "traffic.");
  if (!profile.IsSequence() || profile.size() == 0)
    r.fail(profile, "traffic.profile must be a non-empty list");
  std::vector<ProfileSegment> segs;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const std::string path = "traffic.profile[" + std::to_string(i + 1) + "].";
    r.reject_unknown(profile[i], {"start", "rate"}, path);
    ProfileSegment s;
    s.start = r.number(r.required(profile[i], "start", path), path + "start");
    s.rate = r.number(r.required(profile[i], "rate", path), path + "rate");
    if (!segs.empty() && !(s.start > segs.back().start))
      r.fail(profile[i], path + "start must be greater than the previous segment's start");
    if (segs.empty() && s.start != 0.0) r.fail(profile[i], "first profile segment must start at 0");
    if (!(s.rate >= 0.0) || !std::isfinite(s.rate)) r.fail(profile[i], path + "rate must be finite and >= 0");
    segs.push_back(s);
  }
  sc.profile = TrafficProfile(std::move(segs));

  const YAML::Node session = r.required(traffic, "session", "traffic.");
  r.reject_unknown(session, {"phases", "think_mean", "think_floor", "client_timeout"},
                   "traffic.session.");
  const YAML::Node phases = r.required(session, "phases", "traffic.session.");
  if (!phases.IsSequence() || phases.size() == 0)
    r.fail(phases, "traffic.session.phases must be a non-empty list");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const std::string path = "traffic.session.phases[" + std::to_string(i + 1) + "]";
    r.reject_unknown(phases[i], {"tier", "count"}, path + ".");
    const int tier = r.as<int>(r.required(phases[i], "tier", path + "."), path + ".tier");
    if (tier < 1 || static_cast<std::size_t>(tier) > sc.cluster.tier_count())
      r.fail(phases[i]["tier"], path + ".tier " + std::to_string(tier) + " does not exist");
    sc.session.phase_plan.push_back(
        {TierIndex{static_cast<std::size_t>(tier - 1)},
         parse_count(r, r.required(phases[i], "count", path + "."), path + ".count")});
  }
  sc.session.think_mean =
      r.number(r.required(session, "think_mean", "traffic.session."), "traffic.session.think_mean");
  sc.session.think_floor = r.number(r.required(session, "think_floor", "traffic.session."),
                                    "traffic.session.think_floor");
  sc.session.client_timeout = r.number(r.required(session, "client_timeout", "traffic.session."),
                                       "traffic.session.client_timeout");

  // policy
  const YAML::Node policy = r.required(root, "policy", "");
  r.reject_unknown(policy, {"name", "soc", "tbac", "pac", "fixed_p"}, "policy.");
  const auto name = r.as<std::string>(r.required(policy, "name", "policy."), "policy.name");
  const auto kind = parse_policy_kind(name);
  if (!kind) r.fail(policy["name"], "unknown policy '" + name + "' (soc, soc-base, tbac, pac, always, fixed)");
  sc.policy.kind = *kind;
  if (const YAML::Node soc = policy["soc"]; soc.IsDefined()) {
    r.reject_unknown(soc, {"control_period", "slice_width", "k_sigma", "change_detection",
                           "bench_anchor", "bench_samples"},
                     "policy.soc.");
    auto& c = sc.policy.soc;
    c.control_period = r.number_or(soc, "control_period", c.control_period, "policy.soc.");
    c.slice_width = r.number_or(soc, "slice_width", c.slice_width, "policy.soc.");
    c.k_sigma = r.number_or(soc, "k_sigma", c.k_sigma, "policy.soc.");
    if (soc["change_detection"]) c.change_detection = r.as<bool>(soc["change_detection"], "policy.soc.change_detection");
    if (soc["bench_anchor"]) {
      const auto a = r.as<std::string>(soc["bench_anchor"], "policy.soc.bench_anchor");
      if (a != "benchmark" && a != "origin") r.fail(soc["bench_anchor"], "bench_anchor must be 'benchmark' or 'origin'");
      c.bench_anchor = a == "benchmark";
    }
    if (soc["bench_samples"]) c.bench_samples = r.as<int>(soc["bench_samples"], "policy.soc.bench_samples");
  }
  if (const YAML::Node tbac = policy["tbac"]; tbac.IsDefined()) {
    r.reject_unknown(tbac, {"period", "thresholds"}, "policy.tbac.");
    sc.policy.tbac.period = r.number_or(tbac, "period", sc.policy.tbac.period, "policy.tbac.");
    if (tbac["thresholds"])
      sc.policy.tbac.rt_threshold = parse_number_list(r, tbac["thresholds"], "policy.tbac.thresholds");
  }
  if (const YAML::Node pac = policy["pac"]; pac.IsDefined()) {
    r.reject_unknown(pac, {"period", "rt_low", "rt_high"}, "policy.pac.");
    auto& c = sc.policy.pac;
    c.period = r.number_or(pac, "period", c.period, "policy.pac.");
    c.rt_low = r.number_or(pac, "rt_low", c.rt_low, "policy.pac.");
    c.rt_high = r.number_or(pac, "rt_high", c.rt_high, "policy.pac.");
  }
  sc.policy.fixed_p = r.number_or(policy, "fixed_p", sc.policy.fixed_p, "policy.");

  if (const YAML::Node out = root["output"]; out.IsDefined()) {
    r.reject_unknown(out, {"sample_interval", "curve_dump"}, "output.");
    sc.output.sample_interval = r.number_or(out, "sample_interval", sc.output.sample_interval, "output.");
    if (out["curve_dump"]) sc.output.curve_dump = r.as<bool>(out["curve_dump"], "output.curve_dump");
  }

  try {
    sc.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

bool is_sweep_parameter(const std::string& name) {
  return name == "arrival_rate" || name == "T_AC" || name == "l_lambda" || name == "k_sigma" ||
         name == "seed";
}

void apply_parameter(Scenario& sc, const std::string& name, double value) {
  if (name == "arrival_rate") {
    sc.profile = TrafficProfile::constant(value);
  } else if (name == "T_AC") {
    sc.policy.soc.control_period = value;
  } else if (name == "l_lambda") {
    sc.policy.soc.slice_width = value;
  } else if (name == "k_sigma") {
    sc.policy.soc.k_sigma = value;
  } else if (name == "seed") {
    if (value < 0 || value != std::floor(value)) throw ConfigError("seed must be a non-negative integer");
    sc.seed = static_cast<std::uint64_t>(value);
  } else {
    throw ConfigError("unknown sweep parameter '" + name +
                      "' (arrival_rate, T_AC, l_lambda, k_sigma, seed)");
  }
  sc.validate();
}

}  // namespace socsim
