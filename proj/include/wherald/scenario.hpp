#pragma once

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

#include "wherald/dynamics.hpp"
#include "wherald/errors.hpp"
#include "wherald/heralding.hpp"

namespace wherald {

// Parsed and validated scenario description. Unknown keys, missing required
// sections and out-of-range values are rejected at parse time.
struct ScenarioConfig {
    std::string scenario;

    std::array<int, 3> ensembles{2, 2, 2};
    CouplingParams couplings;
    double strength = 0.0;
    int n_max = 2;

    bool has_network = false;
    BeamsplitterNetwork network;

    bool has_outcome = false;
    std::array<int, 3> outcome{0, 0, 0};

    bool has_packet = false;
    int packet_modes = 0;
    std::vector<double> packet_positions;

    std::string output; // empty means stdout
    int seed = 0;       // reserved; echoed into the report
};

ScenarioConfig parse_scenario_config(const std::string& text);
ScenarioConfig load_scenario_config(const std::string& path);

// Re-apply the truncation bound (CLI override). Re-validates the outcome.
void override_truncation(ScenarioConfig& config, int n_max);

// Execute the scenario and build the full report (engine stamp, config
// echo, results). Deterministic: equal configs give byte-equal reports.
nlohmann::ordered_json run_scenario(const ScenarioConfig& config);

std::string render_report_machine(const nlohmann::ordered_json& report);
std::string render_report_text(const nlohmann::ordered_json& report);

// Write via a temporary file in the target directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace wherald
