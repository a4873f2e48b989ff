#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wherald/composite.hpp"
#include "wherald/dynamics.hpp"
#include "wherald/field_fock.hpp"
#include "wherald/heralding.hpp"
#include "wherald/optics.hpp"
#include "wherald/scenario.hpp"
#include "wherald/symmetric_ensemble.hpp"
#include "wherald/version.hpp"

namespace py = pybind11;
using namespace wherald;

namespace {

using Triple = std::array<int, 3>;

Occupation occupation_from(const Triple& t) { return Occupation{t[0], t[1], t[2]}; }

Triple occupation_to(const Occupation& o) { return {o.n0, o.n1, o.n2}; }

BeamsplitterNetwork network_from(const std::vector<std::array<double, 4>>& rows) {
    BeamsplitterNetwork net;
    for (const auto& row : rows) {
        Beamsplitter bs{static_cast<int>(row[0]), static_cast<int>(row[1]), row[2], row[3]};
        bs.validate();
        net.push_back(bs);
    }
    return net;
}

py::list state_items(const StateVector& state) {
    py::list items;
    for (const auto& [label, amp] : state) {
        py::tuple atoms = py::make_tuple(occupation_to(label.atoms[0]), occupation_to(label.atoms[1]),
                                         occupation_to(label.atoms[2]));
        items.append(py::make_tuple(atoms, label.photons.counts, amp));
    }
    return items;
}

py::dict herald_dict(const HeraldResult& result) {
    py::dict out;
    out["outcome"] = result.outcome;
    out["probability"] = result.probability;
    out["leading_order_probability"] = result.leading_order_probability;
    out["zero_probability"] = result.zero_probability;
    out["leakage"] = result.leakage;
    out["emission_weight"] = result.emission_weight;
    out["matched_target"] = result.matched_target;
    py::dict fid;
    for (const auto& [name, value] : result.fidelities) fid[py::str(name)] = value;
    out["fidelities"] = fid;
    py::dict full;
    for (const auto& [name, value] : result.full_fidelities) full[py::str(name)] = value;
    out["full_fidelities"] = full;
    out["post_state"] = state_items(result.post_state);
    out["emission_state"] = state_items(result.emission_state);
    return out;
}

HeraldScenario scenario_from(const Triple& ensembles, double strength, int n_max,
                             const std::vector<std::array<double, 4>>& network,
                             const Triple& outcome, double pump, double emission,
                             double wavenumber, const std::array<double, 3>& positions) {
    HeraldScenario scenario;
    scenario.ensembles = ensembles;
    scenario.couplings = CouplingParams{pump, emission, wavenumber, positions};
    scenario.strength = strength;
    scenario.n_max = n_max;
    scenario.network = network_from(network);
    scenario.outcome = outcome;
    return scenario;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heralded W-state preparation simulator";
    m.attr("__version__") = kEngineVersion;

    m.def(
        "collective_apply",
        [](int to, int from, const Triple& occ) {
            const auto action = collective_apply(to, from, occupation_from(occ));
            return py::make_tuple(occupation_to(action.occupation), action.amplitude);
        },
        py::arg("to"), py::arg("from_"), py::arg("occupation"),
        "Collective transition amplitude in the symmetric subspace");

    m.def("dicke_ladder_coefficient", &dicke_ladder_coefficient, py::arg("excitations"),
          py::arg("atoms"));

    m.def(
        "dicke_product_expansion",
        [](int excitations, int atoms) {
            py::list out;
            for (const auto& term : dicke_product_expansion(excitations, atoms))
                out.append(py::make_tuple(term.excited_positions, term.coefficient));
            return out;
        },
        py::arg("excitations"), py::arg("atoms"));

    m.def(
        "mode_ladder",
        [](int mode, const std::string& op, const Triple& counts, int n_max) {
            const Ladder ladder = op == "create" ? Ladder::Create : Ladder::Annihilate;
            if (op != "create" && op != "annihilate")
                throw std::domain_error("ladder op must be 'create' or 'annihilate'");
            const auto action = mode_ladder(mode, ladder, PhotonPattern{counts, n_max});
            return py::make_tuple(action.pattern.counts, action.amplitude, action.overflow);
        },
        py::arg("mode"), py::arg("op"), py::arg("counts"), py::arg("n_max") = 2);

    m.def(
        "packet_coefficients",
        [](int modes, double cell, double position, double wavenumber) {
            PacketSpec spec{modes, cell, position, wavenumber};
            const PacketState state = packet_coefficients(spec);
            return py::make_tuple(state.coefficients, state.emitter_phase);
        },
        py::arg("modes"), py::arg("cell"), py::arg("position"), py::arg("wavenumber") = 0.0);

    m.def(
        "packet_sum_record",
        [](int modes, double position_over_cell) {
            const PacketSumRecord rec = packet_sum_record(modes, position_over_cell);
            py::dict out;
            out["modes"] = rec.mode_count;
            out["position_over_cell"] = rec.position_over_cell;
            out["direct_sum"] = rec.direct_sum;
            out["closed_form"] = rec.closed_form;
            out["sinc_form"] = rec.sinc_form;
            out["sinc_magnitude_deviation"] = rec.sinc_magnitude_deviation;
            out["near_envelope_zero"] = rec.near_envelope_zero;
            return out;
        },
        py::arg("modes"), py::arg("position_over_cell"));

    m.def(
        "evolved_state",
        [](const Triple& ensembles, double strength, int n_max, double pump, double emission,
           double wavenumber, const std::array<double, 3>& positions) {
            const CouplingParams params{pump, emission, wavenumber, positions};
            const CompositeSpace space(ensembles, n_max);
            const SparseGenerator gen = build_generator(space, params);
            const StateVector evolved = evolve_exact(
                space, gen, vacuum_state(ensembles, n_max), time_for_strength(params, strength));
            return state_items(evolved);
        },
        py::arg("ensembles"), py::arg("strength"), py::arg("n_max") = 2, py::arg("pump") = 1.0,
        py::arg("emission") = 1.0, py::arg("wavenumber") = 0.0,
        py::arg("positions") = std::array<double, 3>{0.0, 0.0, 0.0},
        "Amplitudes of the vacuum evolved for the time matching `strength`");

    m.def(
        "run_herald",
        [](const Triple& ensembles, double strength, const Triple& outcome,
           const std::vector<std::array<double, 4>>& network, int n_max, double pump,
           double emission, double wavenumber, const std::array<double, 3>& positions) {
            return herald_dict(run_herald(scenario_from(ensembles, strength, n_max, network,
                                                        outcome, pump, emission, wavenumber,
                                                        positions)));
        },
        py::arg("ensembles"), py::arg("strength"), py::arg("outcome"),
        py::arg("network") = std::vector<std::array<double, 4>>{}, py::arg("n_max") = 2,
        py::arg("pump") = 1.0, py::arg("emission") = 1.0, py::arg("wavenumber") = 0.0,
        py::arg("positions") = std::array<double, 3>{0.0, 0.0, 0.0},
        "Evolve, route through the network, condition on the outcome");

    m.def(
        "standard_network",
        []() {
            std::vector<std::array<double, 4>> rows;
            for (const auto& bs : standard_network())
                rows.push_back({static_cast<double>(bs.mode_a), static_cast<double>(bs.mode_b),
                                bs.transmit, bs.reflect});
            return rows;
        });

    m.def(
        "balanced_network",
        []() {
            std::vector<std::array<double, 4>> rows;
            for (const auto& bs : balanced_network())
                rows.push_back({static_cast<double>(bs.mode_a), static_cast<double>(bs.mode_b),
                                bs.transmit, bs.reflect});
            return rows;
        });

    m.def(
        "audit_amplitudes",
        [](const Triple& ensembles, double strength, int n_max, double pump, double emission) {
            const CouplingParams params{pump, emission, 0.0, {0.0, 0.0, 0.0}};
            py::list out;
            for (const auto& row : audit_amplitudes(ensembles, params, strength, n_max)) {
                py::dict entry;
                entry["sector"] = row.sector;
                entry["photons"] = row.photons;
                entry["claimed_order"] = row.claimed_order;
                entry["exact_amplitude"] = row.exact_amplitude;
                entry["series_amplitude"] = row.series_amplitude;
                entry["reference"] = row.reference;
                entry["absolute_deviation"] = row.absolute_deviation;
                entry["relative_deviation"] = row.relative_deviation;
                entry["convergence_order"] = row.convergence_order;
                entry["status"] = row.status;
                out.append(entry);
            }
            return out;
        },
        py::arg("ensembles"), py::arg("strength"), py::arg("n_max") = 2, py::arg("pump") = 1.0,
        py::arg("emission") = 1.0);

    m.def(
        "run_scenario",
        [](const std::string& config_text, const std::string& format) {
            const ScenarioConfig config = parse_scenario_config(config_text);
            const nlohmann::ordered_json report = run_scenario(config);
            return format == "text" ? render_report_text(report) : render_report_machine(report);
        },
        py::arg("config_text"), py::arg("format") = "machine",
        "Run a JSON scenario config and return the rendered report");

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NumericalError>(m, "NumericalError");
}
