#include "wherald/heralding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wherald {

StateVector atomic_target(const std::array<int, 3>& ensembles, int n_max,
                          const std::vector<std::pair<std::array<int, 3>, Complex>>& terms) {
    if (terms.empty()) throw std::domain_error("target needs at least one term");
    StateVector out;
    for (const auto& [excitations, coeff] : terms) {
        BasisLabel label;
        for (int x = 0; x < 3; ++x) {
            const int m = excitations[static_cast<size_t>(x)];
            const int atoms = ensembles[static_cast<size_t>(x)];
            if (m < 0 || m > atoms)
                throw std::domain_error("target excitation exceeds ensemble size");
            label.atoms[static_cast<size_t>(x)] = Occupation{atoms - m, m, 0};
        }
        label.photons = PhotonPattern{{0, 0, 0}, n_max};
        out.add(label, coeff);
    }
    return out.normalized();
}

StateVector weighted_excitation_target(const std::array<int, 3>& ensembles, int n_max) {
    std::vector<std::pair<std::array<int, 3>, Complex>> terms;
    for (int x = 0; x < 3; ++x) {
        if (ensembles[static_cast<size_t>(x)] < 1) continue;
        std::array<int, 3> exc{0, 0, 0};
        exc[static_cast<size_t>(x)] = 1;
        terms.emplace_back(exc, std::sqrt(static_cast<double>(ensembles[static_cast<size_t>(x)])));
    }
    return atomic_target(ensembles, n_max, terms);
}

namespace {

std::array<int, 3> unit_excitation(int x) {
    std::array<int, 3> exc{0, 0, 0};
    exc[static_cast<size_t>(x)] = 1;
    return exc;
}

} // namespace

std::vector<NamedTarget> standard_targets(const std::array<int, 3>& outcome,
                                          const std::array<int, 3>& ensembles, int n_max) {
    const int total = outcome[0] + outcome[1] + outcome[2];
    const char* names[3] = {"A", "B", "C"};
    std::vector<NamedTarget> targets;

    if (total == 1) {
        for (int x = 0; x < 3; ++x) {
            if (ensembles[static_cast<size_t>(x)] < 1) continue;
            targets.push_back({std::string("w1_") + names[x],
                               atomic_target(ensembles, n_max, {{unit_excitation(x), 1.0}})});
        }
        for (int x = 0; x < 3; ++x)
            for (int y = x + 1; y < 3; ++y) {
                if (ensembles[static_cast<size_t>(x)] < 1 || ensembles[static_cast<size_t>(y)] < 1)
                    continue;
                targets.push_back({std::string("w1_") + names[x] + names[y] + "_minus",
                                   atomic_target(ensembles, n_max,
                                                 {{unit_excitation(x), 1.0},
                                                  {unit_excitation(y), -1.0}})});
                targets.push_back({std::string("w1_") + names[x] + names[y] + "_plus",
                                   atomic_target(ensembles, n_max,
                                                 {{unit_excitation(x), 1.0},
                                                  {unit_excitation(y), 1.0}})});
            }
        {
            std::vector<std::pair<std::array<int, 3>, Complex>> uniform;
            for (int x = 0; x < 3; ++x)
                if (ensembles[static_cast<size_t>(x)] >= 1)
                    uniform.emplace_back(unit_excitation(x), 1.0);
            if (!uniform.empty())
                targets.push_back({"w1_uniform", atomic_target(ensembles, n_max, uniform)});
        }
        targets.push_back({"w1_weighted", weighted_excitation_target(ensembles, n_max)});
        return targets;
    }

    if (total == 2) {
        for (int x = 0; x < 3; ++x) {
            if (ensembles[static_cast<size_t>(x)] < 2) continue;
            std::array<int, 3> exc{0, 0, 0};
            exc[static_cast<size_t>(x)] = 2;
            targets.push_back({std::string("w2_") + names[x],
                               atomic_target(ensembles, n_max, {{exc, 1.0}})});
        }
        std::vector<std::pair<std::array<int, 3>, Complex>> uniform;
        for (int x = 0; x < 3; ++x)
            for (int y = x + 1; y < 3; ++y) {
                if (ensembles[static_cast<size_t>(x)] < 1 || ensembles[static_cast<size_t>(y)] < 1)
                    continue;
                std::array<int, 3> exc{0, 0, 0};
                exc[static_cast<size_t>(x)] = 1;
                exc[static_cast<size_t>(y)] = 1;
                targets.push_back({std::string("w1w1_") + names[x] + names[y],
                                   atomic_target(ensembles, n_max, {{exc, 1.0}})});
                uniform.emplace_back(exc, 1.0);
            }
        if (uniform.size() > 1)
            targets.push_back({"w1w1_uniform", atomic_target(ensembles, n_max, uniform)});
        return targets;
    }

    return targets;
}

HeraldResult run_herald(const HeraldScenario& scenario) {
    scenario.couplings.validate();
    if (scenario.n_max < 0) throw std::domain_error("photon truncation must be non-negative");
    int total = 0;
    for (int c : scenario.outcome) {
        if (c < 0 || c > scenario.n_max)
            throw std::domain_error("herald outcome outside photon truncation");
        total += c;
    }
    for (const auto& bs : scenario.network) bs.validate();

    const CompositeSpace space(scenario.ensembles, scenario.n_max);
    const SparseGenerator gen = build_generator(space, scenario.couplings);
    const StateVector vacuum = vacuum_state(scenario.ensembles, scenario.n_max);
    const double time = time_for_strength(scenario.couplings, scenario.strength);

    const StateVector evolved = evolve_exact(space, gen, vacuum, time);
    const StateVector routed = apply_network(evolved, scenario.network);
    const ProjectionResult projected = project_photons(routed, scenario.outcome);

    // leading order in the interaction strength: truncate the expansion at
    // the lowest order that can populate the outcome sector
    const int series_order = std::min(6, std::max(2, 2 * total));
    const StateVector series = evolve_series(space, gen, vacuum, time, series_order);
    const StateVector series_routed = apply_network(series, scenario.network);
    double leading = 0.0;
    for (const auto& [label, amp] : series_routed)
        if (label.photons.counts == scenario.outcome) leading += std::norm(amp);

    HeraldResult result;
    result.outcome = scenario.outcome;
    result.probability = projected.probability;
    result.leading_order_probability = leading;
    result.zero_probability = projected.zero_probability;
    result.leakage = routed.leakage();
    result.post_state = projected.post_state;

    if (projected.zero_probability) return result;

    const LevelRestriction emission = restrict_no_upper_level(result.post_state);
    result.emission_state = emission.state;
    result.emission_weight = emission.weight;

    const std::vector<NamedTarget> targets =
        scenario.targets.empty()
            ? standard_targets(scenario.outcome, scenario.ensembles, scenario.n_max)
            : scenario.targets;
    double best = -1.0;
    for (const auto& target : targets) {
        const double f_emission =
            emission.weight > 0.0 ? fidelity(result.emission_state, target.state) : 0.0;
        const double f_full = fidelity(result.post_state, target.state);
        result.fidelities.emplace_back(target.name, f_emission);
        result.full_fidelities.emplace_back(target.name, f_full);
        if (f_emission > best) {
            best = f_emission;
            result.matched_target = target.name;
        }
    }
    return result;
}

HeraldResult two_photon_herald(const HeraldScenario& scenario) {
    int clicked_modes = 0, total = 0;
    for (int c : scenario.outcome) {
        if (c > 0) ++clicked_modes;
        total += c;
    }
    if (total != 2 || clicked_modes != 2)
        throw std::domain_error("coincidence herald needs one click in each of two modes");
    if (scenario.network.empty())
        throw std::domain_error("coincidence herald needs a beamsplitter network");
    for (const auto& bs : scenario.network) {
        if (std::abs(bs.transmit - bs.reflect) > 1e-12)
            throw std::domain_error("coincidence herald needs equal transmit and reflect amplitudes");
        if (std::abs(bs.transmit - scenario.network.front().transmit) > 1e-12)
            throw std::domain_error("coincidence herald needs identical splitters");
    }
    return run_herald(scenario);
}

double channel_state_fidelity(const HeraldResult& result, const std::array<int, 3>& ensembles,
                              int n_max) {
    if (result.zero_probability || result.emission_weight <= 0.0) return 0.0;
    return fidelity(result.emission_state, weighted_excitation_target(ensembles, n_max));
}

} // namespace wherald
