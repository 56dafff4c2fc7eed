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

#pragma once

#include "socsim/scenario.hpp"
#include "socsim/simulator.hpp"

#include "json.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace socsim {

/// Time series as CSV: time, lambda_in, lambda_adm, p, lambda_star, rt95 per
/// tier, server-side rt95 per tier, mode, abandonment and rejection rates.
void write_series_csv(std::ostream& out, const RunResult& r, const Scenario& sc);
void write_decisions_csv(std::ostream& out, const RunResult& r);
void write_compliance_csv(std::ostream& out, const RunResult& r);
/// Knot tables, one block per tier, for plotting the learned curves.
void write_curves(std::ostream& out, const RunResult& r);

/// Effective configuration, echoed into every summary.
nlohmann::ordered_json scenario_to_json(const Scenario& sc);
nlohmann::ordered_json summary_to_json(const RunResult& r, const Scenario& sc);

/// Writes series.csv, decisions.csv, compliance.csv, summary.json and
/// (for SOC runs with curve dumps) curves.txt into `dir`.
void write_run_outputs(const std::string& dir, const RunResult& r, const Scenario& sc);

/// Side-by-side table, one column per run.
void write_comparison_table(std::ostream& out, const std::vector<std::string>& labels,
                            const std::vector<RunResult>& runs);

/// Formats a double with enough digits to round-trip; "inf" for infinity.
std::string format_number(double v);

}  // namespace socsim
