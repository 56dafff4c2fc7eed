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

#include "socsim/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>

namespace socsim {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

nlohmann::ordered_json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::ofstream open_file(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

void write_series_csv(std::ostream& out, const RunResult& r, const Scenario& sc) {
  const std::size_t k = sc.cluster.tier_count();
  out << "time,lambda_in,lambda_adm,p,lambda_star";
  for (std::size_t i = 0; i < k; ++i) out << ",rt95_" << sc.cluster.tiers[i].name;
  for (std::size_t i = 0; i < k; ++i) out << ",rt95_server_" << sc.cluster.tiers[i].name;
  out << ",mode,abandon_rate,reject_rate,in_flight\n";
  for (const auto& row : r.series) {
    out << format_number(row.time) << ',' << format_number(row.lambda_in) << ','
        << format_number(row.lambda_adm) << ',' << format_number(row.p) << ','
        << format_number(row.lambda_star);
    for (std::size_t i = 0; i < k; ++i) out << ',' << opt_number(row.rt95[i]);
    for (std::size_t i = 0; i < k; ++i) out << ',' << opt_number(row.rt95_server[i]);
    out << ',' << row.mode << ',' << format_number(row.abandon_rate) << ','
        << format_number(row.reject_rate) << ',' << row.in_flight << '\n';
  }
}

void write_decisions_csv(std::ostream& out, const RunResult& r) {
  out << "time,kind,value\n";
  for (const auto& d : r.decisions)
    out << format_number(d.time) << ',' << d.kind << ',' << format_number(d.value) << '\n';
}

void write_compliance_csv(std::ostream& out, const RunResult& r) {
  const std::size_t k = r.compliance.empty() ? 0 : r.compliance.front().rt_ok.size();
  out << "window_start,window_end,partial,zero_samples";
  for (std::size_t i = 0; i < k; ++i) out << ",rt95_" << i + 1 << ",rt_ok_" << i + 1;
  out << ",lambda_in,lambda_adm,admission_ok,admission_tolerance\n";
  for (const auto& c : r.compliance) {
    out << format_number(c.window_start) << ',' << format_number(c.window_end) << ','
        << c.partial_window << ',' << c.zero_samples;
    for (std::size_t i = 0; i < k; ++i) out << ',' << opt_number(c.rt95[i]) << ',' << c.rt_ok[i];
    out << ',' << format_number(c.lambda_in) << ',' << format_number(c.lambda_adm) << ','
        << c.admission_ok << ',' << format_number(c.admission_tolerance) << '\n';
  }
}

void write_curves(std::ostream& out, const RunResult& r) {
  for (const auto& snap : r.curves) {
    out << "# tier " << snap.tier + 1 << " at t=" << format_number(snap.time) << '\n';
    out << "lambda_adm rt95\n";
    for (const auto& k : snap.knots) out << format_number(k.lambda) << ' ' << format_number(k.rt) << '\n';
    out << '\n';
  }
}

nlohmann::ordered_json scenario_to_json(const Scenario& sc) {
  nlohmann::ordered_json j;
  j["schema_version"] = sc.schema_version;
  j["seed"] = sc.seed;
  j["horizon"] = sc.horizon;
  j["warmup"] = sc.effective_warmup();
  for (const auto& t : sc.cluster.tiers)
    j["cluster"]["tiers"].push_back({{"name", t.name}, {"servers", t.server_count}, {"mean_service", t.mean_service_time}});
  j["sla"] = {{"rt_limit", sc.sla.rt_limit}, {"lambda_min", sc.sla.lambda_min},
              {"check_interval", sc.sla.check_interval}};
  for (const auto& s : sc.profile.segments())
    j["traffic"]["profile"].push_back({{"start", s.start}, {"rate", s.rate}});
  for (const auto& ph : sc.session.phase_plan) {
    nlohmann::ordered_json c;
    switch (ph.count.kind) {
      case CountDistribution::Kind::fixed: c = {{"dist", "fixed"}, {"value", ph.count.value}}; break;
      case CountDistribution::Kind::geometric: c = {{"dist", "geometric"}, {"mean", ph.count.mean}}; break;
      case CountDistribution::Kind::uniform: c = {{"dist", "uniform"}, {"low", ph.count.low}, {"high", ph.count.high}}; break;
    }
    j["traffic"]["session"]["phases"].push_back({{"tier", ph.tier.value + 1}, {"count", c}});
  }
  j["traffic"]["session"]["think_mean"] = sc.session.think_mean;
  j["traffic"]["session"]["think_floor"] = sc.session.think_floor;
  j["traffic"]["session"]["client_timeout"] = number_json(sc.session.client_timeout);
  j["policy"]["name"] = to_string(sc.policy.kind);
  const auto& soc = sc.policy.soc;
  j["policy"]["soc"] = {{"control_period", soc.control_period},
                        {"slice_width", soc.slice_width > 0 ? soc.slice_width : sc.sla.lambda_min / 10.0},
                        {"k_sigma", soc.k_sigma},
                        {"change_detection", sc.policy.kind == PolicyKind::soc && soc.change_detection},
                        {"bench_anchor", soc.bench_anchor ? "benchmark" : "origin"},
                        {"bench_samples", soc.bench_samples}};
  j["policy"]["tbac"] = {{"period", sc.policy.tbac.period}, {"thresholds", sc.policy.tbac.rt_threshold}};
  j["policy"]["pac"] = {{"period", sc.policy.pac.period}, {"rt_low", sc.policy.pac.rt_low},
                        {"rt_high", sc.policy.pac.rt_high}};
  j["policy"]["fixed_p"] = sc.policy.fixed_p;
  j["output"] = {{"sample_interval", sc.output.sample_interval}, {"curve_dump", sc.output.curve_dump}};
  return j;
}

nlohmann::ordered_json summary_to_json(const RunResult& r, const Scenario& sc) {
  const auto& s = r.summary;
  nlohmann::ordered_json j;
  j["config"] = scenario_to_json(sc);
  j["policy"] = r.policy;
  j["warmup"] = s.warmup;
  j["measured_span"] = s.measured_span;
  j["arrivals"] = s.arrivals;
  j["admitted"] = s.admitted;
  j["rejected"] = s.rejected;
  j["completed_sessions"] = s.completed_sessions;
  j["abandoned_sessions"] = s.abandoned_sessions;
  j["rejection_rate"] = s.rejection_rate;
  j["mean_lambda_in"] = s.mean_lambda_in;
  j["mean_lambda_adm"] = s.mean_lambda_adm;
  j["mean_admission_probability"] = s.mean_admission_probability;
  j["throughput_sessions_per_s"] = s.throughput;
  j["sla_violation_fraction"] = s.sla_violation_fraction;
  j["admission_violation_fraction"] = s.admission_violation_fraction;
  for (std::size_t i = 0; i < sc.cluster.tier_count(); ++i) {
    const auto& name = sc.cluster.tiers[i].name;
    j["tiers"][name] = {{"rt_mean", s.rt_mean[i]},
                        {"rt95", opt_json(s.rt95[i])},
                        {"rt95_server", opt_json(s.rt95_server[i])},
                        {"rt95_window_cv", s.rt95_window_cv[i]},
                        {"requests_per_s", s.request_throughput[i]}};
  }
  j["bench_rt95"] = r.bench_rt95;
  j["counters"] = {{"arrivals", r.counters.arrivals},
                   {"admitted", r.counters.admitted},
                   {"rejected", r.counters.rejected},
                   {"completed_sessions", r.counters.completed_sessions},
                   {"abandoned_sessions", r.counters.abandoned_sessions},
                   {"in_flight_sessions", r.counters.in_flight_sessions},
                   {"dropped_samples", r.counters.dropped_samples},
                   {"events", r.counters.events}};
  return j;
}

void write_run_outputs(const std::string& dir, const RunResult& r, const Scenario& sc) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    auto f = open_file(fs::path(dir) / "series.csv");
    write_series_csv(f, r, sc);
  }
  {
    auto f = open_file(fs::path(dir) / "decisions.csv");
    write_decisions_csv(f, r);
  }
  {
    auto f = open_file(fs::path(dir) / "compliance.csv");
    write_compliance_csv(f, r);
  }
  {
    auto f = open_file(fs::path(dir) / "summary.json");
    f << summary_to_json(r, sc).dump(2) << '\n';
  }
  if (!r.curves.empty()) {
    auto f = open_file(fs::path(dir) / "curves.txt");
    write_curves(f, r);
  }
}

void write_comparison_table(std::ostream& out, const std::vector<std::string>& labels,
                            const std::vector<RunResult>& runs) {
  if (runs.empty()) return;
  const std::size_t k = runs.front().summary.rt95.size();
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  auto add = [&](const std::string& metric, auto get) {
    std::vector<std::string> cells;
    for (const auto& r : runs) cells.push_back(get(r));
    rows.emplace_back(metric, std::move(cells));
  };
  add("mean_lambda_in", [](const RunResult& r) { return format_number(r.summary.mean_lambda_in); });
  add("mean_lambda_adm", [](const RunResult& r) { return format_number(r.summary.mean_lambda_adm); });
  add("mean_p", [](const RunResult& r) { return format_number(r.summary.mean_admission_probability); });
  add("rejection_rate", [](const RunResult& r) { return format_number(r.summary.rejection_rate); });
  add("throughput", [](const RunResult& r) { return format_number(r.summary.throughput); });
  add("abandoned", [](const RunResult& r) { return std::to_string(r.summary.abandoned_sessions); });
  add("sla_violation_frac", [](const RunResult& r) { return format_number(r.summary.sla_violation_fraction); });
  for (std::size_t i = 0; i < k; ++i) {
    const std::string t = std::to_string(i + 1);
    add("rt95_tier" + t, [i](const RunResult& r) { return opt_number(r.summary.rt95[i]); });
    add("rt95_cv_tier" + t, [i](const RunResult& r) { return format_number(r.summary.rt95_window_cv[i]); });
  }

  std::size_t w0 = 6;
  for (const auto& row : rows) w0 = std::max(w0, row.first.size());
  std::vector<std::size_t> w(runs.size(), 8);
  for (std::size_t c = 0; c < runs.size(); ++c) {
    w[c] = std::max(w[c], labels[c].size());
    for (const auto& row : rows) w[c] = std::max(w[c], row.second[c].size());
  }
  out << std::left << std::setw(static_cast<int>(w0)) << "metric";
  for (std::size_t c = 0; c < runs.size(); ++c) out << "  " << std::setw(static_cast<int>(w[c])) << labels[c];
  out << '\n';
  for (const auto& row : rows) {
    out << std::setw(static_cast<int>(w0)) << row.first;
    for (std::size_t c = 0; c < runs.size(); ++c)
      out << "  " << std::setw(static_cast<int>(w[c])) << row.second[c];
    out << '\n';
  }
}

}  // namespace socsim
