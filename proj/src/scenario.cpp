#include "wherald/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "wherald/field_fock.hpp"
#include "wherald/version.hpp"

namespace wherald {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string> kScenarios = {"single-click",     "symmetric-herald",
                                          "two-photon-herald", "w2-herald",
                                          "packet-zsa",        "amplitude-audit"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& section) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + section);
}

const json& require_key(const json& obj, const std::string& key, const std::string& section) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("missing required key '" + key + "' in " + section);
    return *it;
}

int as_int(const json& value, const std::string& where) {
    if (!value.is_number_integer())
        throw ConfigError("'" + where + "' must be an integer");
    return value.get<int>();
}

double as_number(const json& value, const std::string& where) {
    if (!value.is_number())
        throw ConfigError("'" + where + "' must be a number");
    return value.get<double>();
}

std::array<int, 3> as_int_triple(const json& value, const std::string& where) {
    if (!value.is_array() || value.size() != 3)
        throw ConfigError("'" + where + "' must be an array of three integers");
    std::array<int, 3> out{};
    for (size_t i = 0; i < 3; ++i) out[i] = as_int(value[i], where);
    return out;
}

CouplingParams parse_couplings(const json& obj, double& strength) {
    if (!obj.is_object()) throw ConfigError("'couplings' must be an object");
    check_keys(obj, {"pump", "emission", "strength", "time", "wavenumber", "positions"},
               "couplings");
    CouplingParams params;
    if (obj.contains("pump")) params.pump = as_number(obj["pump"], "couplings.pump");
    if (obj.contains("emission"))
        params.emission = as_number(obj["emission"], "couplings.emission");
    if (obj.contains("wavenumber"))
        params.wavenumber = as_number(obj["wavenumber"], "couplings.wavenumber");
    if (obj.contains("positions")) {
        const json& pos = obj["positions"];
        if (!pos.is_array() || pos.size() != 3)
            throw ConfigError("'couplings.positions' must be an array of three numbers");
        for (size_t i = 0; i < 3; ++i)
            params.positions[i] = as_number(pos[i], "couplings.positions");
    }
    try {
        params.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid couplings: ") + e.what());
    }
    const bool has_strength = obj.contains("strength");
    const bool has_time = obj.contains("time");
    if (has_strength == has_time)
        throw ConfigError("couplings: give exactly one of 'strength' or 'time'");
    if (has_strength) {
        strength = as_number(obj["strength"], "couplings.strength");
        if (!(strength >= 0.0)) throw ConfigError("'couplings.strength' must be non-negative");
    } else {
        const double time = as_number(obj["time"], "couplings.time");
        if (!(time >= 0.0)) throw ConfigError("'couplings.time' must be non-negative");
        strength = interaction_strength(params, time);
    }
    return params;
}

BeamsplitterNetwork parse_network(const json& value) {
    if (value.is_string()) {
        const std::string name = value.get<std::string>();
        if (name == "standard") return standard_network();
        if (name == "standard-a") return standard_network(0);
        if (name == "balanced") return balanced_network();
        throw ConfigError("unknown network preset '" + name + "'");
    }
    if (!value.is_array())
        throw ConfigError("'network' must be a preset name or an array of beamsplitters");
    BeamsplitterNetwork network;
    for (size_t i = 0; i < value.size(); ++i) {
        const json& entry = value[i];
        const std::string section = "network[" + std::to_string(i) + "]";
        if (!entry.is_object()) throw ConfigError(section + " must be an object");
        check_keys(entry, {"modes", "transmit", "reflect", "angle"}, section);
        const json& modes = require_key(entry, "modes", section);
        if (!modes.is_array() || modes.size() != 2)
            throw ConfigError("'" + section + ".modes' must be an array of two mode indices");
        Beamsplitter bs;
        bs.mode_a = as_int(modes[0], section + ".modes");
        bs.mode_b = as_int(modes[1], section + ".modes");
        const bool has_angle = entry.contains("angle");
        const bool has_pair = entry.contains("transmit") || entry.contains("reflect");
        if (has_angle && has_pair)
            throw ConfigError(section + ": give either 'angle' or 'transmit'/'reflect'");
        if (has_angle) {
            const double angle = as_number(entry["angle"], section + ".angle");
            bs.transmit = std::cos(angle);
            bs.reflect = std::sin(angle);
        } else if (has_pair) {
            bs.transmit = as_number(require_key(entry, "transmit", section), section + ".transmit");
            bs.reflect = as_number(require_key(entry, "reflect", section), section + ".reflect");
        } else {
            throw ConfigError(section + ": missing 'angle' or 'transmit'/'reflect'");
        }
        try {
            bs.validate();
        } catch (const std::exception& e) {
            throw ConfigError(section + ": " + e.what());
        }
        network.push_back(bs);
    }
    return network;
}

void parse_packet(const json& obj, ScenarioConfig& config) {
    if (!obj.is_object()) throw ConfigError("'packet' must be an object");
    check_keys(obj, {"modes", "position_over_cell", "positions_over_cell"}, "packet");
    config.packet_modes = as_int(require_key(obj, "modes", "packet"), "packet.modes");
    if (config.packet_modes < 1) throw ConfigError("'packet.modes' must be at least 1");
    const bool single = obj.contains("position_over_cell");
    const bool multi = obj.contains("positions_over_cell");
    if (single == multi)
        throw ConfigError("packet: give exactly one of 'position_over_cell' or 'positions_over_cell'");
    if (single) {
        config.packet_positions = {as_number(obj["position_over_cell"], "packet.position_over_cell")};
    } else {
        const json& list = obj["positions_over_cell"];
        if (!list.is_array() || list.empty())
            throw ConfigError("'packet.positions_over_cell' must be a non-empty array");
        for (const auto& v : list)
            config.packet_positions.push_back(as_number(v, "packet.positions_over_cell"));
    }
    for (double p : config.packet_positions)
        if (p < 0.0 || p >= config.packet_modes)
            throw ConfigError("packet positions must lie in [0, modes)");
    config.has_packet = true;
}

void validate_outcome(const ScenarioConfig& config) {
    if (!config.has_outcome) return;
    int total = 0, clicked = 0;
    for (int c : config.outcome) {
        if (c < 0) throw ConfigError("'outcome' entries must be non-negative");
        if (c > config.n_max)
            throw ConfigError("'outcome' exceeds the photon truncation n_max");
        total += c;
        if (c > 0) ++clicked;
    }
    if (config.scenario == "single-click" || config.scenario == "symmetric-herald") {
        if (total != 1)
            throw ConfigError("scenario '" + config.scenario + "' needs exactly one detected photon");
    } else if (config.scenario == "two-photon-herald") {
        if (total != 2 || clicked != 2)
            throw ConfigError("scenario 'two-photon-herald' needs one photon in each of two modes");
    } else if (config.scenario == "w2-herald") {
        if (total != 2 || clicked != 1)
            throw ConfigError("scenario 'w2-herald' needs two photons in a single mode");
    }
}

} // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    ScenarioConfig config;
    const json& scenario = require_key(root, "scenario", "config");
    if (!scenario.is_string()) throw ConfigError("'scenario' must be a string");
    config.scenario = scenario.get<std::string>();
    if (!kScenarios.count(config.scenario)) {
        std::string known;
        for (const auto& s : kScenarios) known += (known.empty() ? "" : ", ") + s;
        throw ConfigError("unknown scenario '" + config.scenario + "' (known: " + known + ")");
    }

    const bool is_packet = config.scenario == "packet-zsa";
    const bool is_audit = config.scenario == "amplitude-audit";
    const bool needs_network =
        config.scenario == "symmetric-herald" || config.scenario == "two-photon-herald";
    const bool is_herald = !is_packet && !is_audit;

    std::set<std::string> allowed = {"scenario", "output", "seed"};
    if (is_packet) {
        allowed.insert("packet");
    } else {
        allowed.insert({"ensembles", "couplings", "n_max"});
        if (is_herald) allowed.insert("outcome");
        if (needs_network) allowed.insert("network");
    }
    check_keys(root, allowed, "config");

    if (root.contains("output")) {
        if (!root["output"].is_string()) throw ConfigError("'output' must be a string");
        config.output = root["output"].get<std::string>();
    }
    if (root.contains("seed")) config.seed = as_int(root["seed"], "seed");

    if (is_packet) {
        parse_packet(require_key(root, "packet", "config"), config);
        return config;
    }

    config.ensembles = as_int_triple(require_key(root, "ensembles", "config"), "ensembles");
    for (int n : config.ensembles)
        if (n < 1) throw ConfigError("'ensembles' entries must be at least 1");
    config.couplings = parse_couplings(require_key(root, "couplings", "config"), config.strength);
    if (root.contains("n_max")) {
        config.n_max = as_int(root["n_max"], "n_max");
        if (config.n_max < 1) throw ConfigError("'n_max' must be at least 1");
    }

    if (needs_network) {
        config.network = parse_network(require_key(root, "network", "config"));
        if (config.network.empty())
            throw ConfigError("scenario '" + config.scenario + "' needs a non-empty network");
        if (config.scenario == "two-photon-herald") {
            for (const auto& bs : config.network)
                if (std::abs(bs.transmit - bs.reflect) > 1e-12 ||
                    std::abs(bs.transmit - config.network.front().transmit) > 1e-12)
                    throw ConfigError("scenario 'two-photon-herald' needs a balanced network: "
                                      "identical splitters with equal transmit and reflect");
        }
        config.has_network = true;
    }

    if (is_herald) {
        config.outcome = as_int_triple(require_key(root, "outcome", "config"), "outcome");
        config.has_outcome = true;
        validate_outcome(config);
    }
    return config;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_config(buffer.str());
}

void override_truncation(ScenarioConfig& config, int n_max) {
    if (config.scenario == "packet-zsa")
        throw ConfigError("truncation override does not apply to scenario 'packet-zsa'");
    if (n_max < 1) throw ConfigError("'n_max' must be at least 1");
    config.n_max = n_max;
    validate_outcome(config);
}

namespace {

ordered_json network_json(const BeamsplitterNetwork& network) {
    ordered_json out = ordered_json::array();
    for (const auto& bs : network) {
        ordered_json entry;
        entry["modes"] = {bs.mode_a, bs.mode_b};
        entry["transmit"] = bs.transmit;
        entry["reflect"] = bs.reflect;
        out.push_back(entry);
    }
    return out;
}

ordered_json config_echo(const ScenarioConfig& config) {
    ordered_json echo;
    echo["scenario"] = config.scenario;
    if (config.scenario == "packet-zsa") {
        echo["packet"]["modes"] = config.packet_modes;
        echo["packet"]["positions_over_cell"] = config.packet_positions;
    } else {
        echo["ensembles"] = config.ensembles;
        echo["couplings"]["pump"] = config.couplings.pump;
        echo["couplings"]["emission"] = config.couplings.emission;
        echo["couplings"]["strength"] = config.strength;
        echo["couplings"]["wavenumber"] = config.couplings.wavenumber;
        echo["couplings"]["positions"] = config.couplings.positions;
        echo["n_max"] = config.n_max;
        if (config.has_network) echo["network"] = network_json(config.network);
        if (config.has_outcome) echo["outcome"] = config.outcome;
    }
    if (!config.output.empty()) echo["output"] = config.output;
    echo["seed"] = config.seed;
    return echo;
}

ordered_json state_lines(const StateVector& state) {
    ordered_json lines = ordered_json::array();
    std::istringstream text(serialize_state(state));
    std::string line;
    while (std::getline(text, line)) lines.push_back(line);
    return lines;
}

ordered_json herald_json(const HeraldResult& result) {
    ordered_json out;
    out["outcome"] = result.outcome;
    out["probability"] = result.probability;
    out["leading_order_probability"] = result.leading_order_probability;
    out["zero_probability"] = result.zero_probability;
    out["leakage"] = result.leakage;
    out["emission_weight"] = result.emission_weight;
    out["matched_target"] = result.matched_target;
    ordered_json fid;
    for (const auto& [name, value] : result.fidelities) fid[name] = value;
    out["fidelities"] = std::move(fid);
    ordered_json full;
    for (const auto& [name, value] : result.full_fidelities) full[name] = value;
    out["full_fidelities"] = std::move(full);
    out["emission_state"] = state_lines(result.emission_state);
    out["post_state"] = state_lines(result.post_state);
    return out;
}

ordered_json audit_json(const std::vector<SectorAudit>& audits, double strength) {
    ordered_json out;
    out["strength"] = strength;
    ordered_json rows = ordered_json::array();
    for (const auto& row : audits) {
        ordered_json entry;
        entry["sector"] = row.sector;
        entry["photons"] = row.photons;
        entry["claimed_order"] = row.claimed_order;
        entry["exact_re"] = row.exact_amplitude.real();
        entry["exact_im"] = row.exact_amplitude.imag();
        entry["series_re"] = row.series_amplitude.real();
        entry["series_im"] = row.series_amplitude.imag();
        entry["reference"] = row.reference;
        entry["absolute_deviation"] = row.absolute_deviation;
        entry["relative_deviation"] = row.relative_deviation;
        entry["convergence_order"] = row.convergence_order;
        entry["status"] = row.status;
        rows.push_back(entry);
    }
    out["sectors"] = std::move(rows);
    return out;
}

ordered_json packet_json(const ScenarioConfig& config) {
    ordered_json out;
    out["modes"] = config.packet_modes;
    ordered_json rows = ordered_json::array();
    for (double position : config.packet_positions) {
        const PacketSumRecord rec = packet_sum_record(config.packet_modes, position);
        ordered_json entry;
        entry["position_over_cell"] = rec.position_over_cell;
        entry["direct_re"] = rec.direct_sum.real();
        entry["direct_im"] = rec.direct_sum.imag();
        entry["closed_re"] = rec.closed_form.real();
        entry["closed_im"] = rec.closed_form.imag();
        entry["sinc_re"] = rec.sinc_form.real();
        entry["sinc_im"] = rec.sinc_form.imag();
        entry["sinc_magnitude_deviation"] = rec.sinc_magnitude_deviation;
        entry["near_envelope_zero"] = rec.near_envelope_zero;
        rows.push_back(entry);
    }
    out["records"] = std::move(rows);
    return out;
}

} // namespace

nlohmann::ordered_json run_scenario(const ScenarioConfig& config) {
    ordered_json report;
    report["engine"]["name"] = kEngineName;
    report["engine"]["version"] = kEngineVersion;
    report["scenario"] = config.scenario;
    report["config"] = config_echo(config);

    if (config.scenario == "packet-zsa") {
        report["results"] = packet_json(config);
        return report;
    }
    if (config.scenario == "amplitude-audit") {
        const auto audits =
            audit_amplitudes(config.ensembles, config.couplings, config.strength, config.n_max);
        report["results"] = audit_json(audits, config.strength);
        return report;
    }

    HeraldScenario scenario;
    scenario.ensembles = config.ensembles;
    scenario.couplings = config.couplings;
    scenario.strength = config.strength;
    scenario.n_max = config.n_max;
    scenario.network = config.network;
    scenario.outcome = config.outcome;
    const HeraldResult result = config.scenario == "two-photon-herald"
                                    ? two_photon_herald(scenario)
                                    : run_herald(scenario);
    report["results"] = herald_json(result);
    return report;
}

namespace {

// JSON emitter with a fixed floating-point policy: every float is written
// with 17 significant digits, enough to round-trip doubles exactly.
void emit_json(const ordered_json& node, int indent, std::string& out) {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<size_t>(indent + 1) * 2, ' ');
    if (node.is_object()) {
        if (node.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : node.items()) {
            if (!first) out += ",\n";
            first = false;
            out += inner + ordered_json(key).dump() + ": ";
            emit_json(value, indent + 1, out);
        }
        out += "\n" + pad + "}";
        return;
    }
    if (node.is_array()) {
        if (node.empty()) {
            out += "[]";
            return;
        }
        bool scalars = true;
        for (const auto& v : node)
            if (v.is_object() || v.is_array()) scalars = false;
        out += scalars ? "[" : "[\n";
        bool first = true;
        for (const auto& v : node) {
            if (!first) out += scalars ? ", " : ",\n";
            first = false;
            if (!scalars) out += inner;
            emit_json(v, indent + 1, out);
        }
        out += scalars ? "]" : "\n" + pad + "]";
        return;
    }
    if (node.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", node.get<double>());
        out += buf;
        return;
    }
    out += node.dump();
}

} // namespace

std::string render_report_machine(const nlohmann::ordered_json& report) {
    std::string out;
    emit_json(report, 0, out);
    out += "\n";
    return out;
}

namespace {

std::string render_scalar(const ordered_json& value) {
    if (value.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value.get<double>());
        return buf;
    }
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

void render_text_node(const ordered_json& node, const std::string& prefix, int indent,
                      std::string& out) {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (node.is_object()) {
        if (!prefix.empty()) out += pad + prefix + ":\n";
        for (const auto& [key, value] : node.items())
            render_text_node(value, key, prefix.empty() ? indent : indent + 1, out);
        return;
    }
    if (node.is_array()) {
        bool scalars = true;
        for (const auto& v : node)
            if (v.is_object() || v.is_array()) scalars = false;
        if (scalars && node.size() <= 4 && !(node.size() > 0 && node[0].is_string())) {
            std::string inline_values;
            for (const auto& v : node)
                inline_values += (inline_values.empty() ? "" : " ") + render_scalar(v);
            out += pad + prefix + ": [" + inline_values + "]\n";
            return;
        }
        out += pad + prefix + ":\n";
        const std::string inner(static_cast<size_t>(indent + 1) * 2, ' ');
        for (const auto& v : node) {
            if (v.is_object() || v.is_array()) {
                render_text_node(v, "-", indent + 1, out);
            } else {
                out += inner + render_scalar(v) + "\n";
            }
        }
        return;
    }
    out += pad + prefix + ": " + render_scalar(node) + "\n";
}

} // namespace

std::string render_report_text(const nlohmann::ordered_json& report) {
    std::string out;
    render_text_node(report, "", 0, out);
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write to '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

} // namespace wherald
