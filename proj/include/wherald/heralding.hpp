#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "wherald/composite.hpp"
#include "wherald/dynamics.hpp"
#include "wherald/optics.hpp"

namespace wherald {

// A named reference state for fidelity reporting.
struct NamedTarget {
    std::string name;
    StateVector state;
};

// Full description of one heralding run: prepare vacuum, evolve under the
// interaction for the time matching `strength`, route the emission modes
// through `network`, then condition on the photon-count `outcome`.
struct HeraldScenario {
    std::array<int, 3> ensembles{2, 2, 2};
    CouplingParams couplings;
    double strength = 1e-2;
    int n_max = 2;
    BeamsplitterNetwork network;
    std::array<int, 3> outcome{1, 0, 0};
    std::vector<NamedTarget> targets; // empty selects the standard menu
};

struct HeraldResult {
    std::array<int, 3> outcome{0, 0, 0};
    double probability = 0.0;
    double leading_order_probability = 0.0;
    bool zero_probability = false;
    double leakage = 0.0;
    StateVector post_state;      // conditioned state, photon registers reset
    StateVector emission_state;  // restriction to empty upper levels, renormalized
    double emission_weight = 0.0;
    std::vector<std::pair<std::string, double>> fidelities;      // vs emission_state
    std::vector<std::pair<std::string, double>> full_fidelities; // vs post_state
    std::string matched_target;  // highest-fidelity name on the emission sector
};

// Normalized atomic target from (excitations per ensemble, coefficient)
// terms; photon registers in vacuum.
StateVector atomic_target(const std::array<int, 3>& ensembles, int n_max,
                          const std::vector<std::pair<std::array<int, 3>, Complex>>& terms);

// Square-root-of-size weighted single-excitation superposition, the state
// the heralding channel ideally prepares.
StateVector weighted_excitation_target(const std::array<int, 3>& ensembles, int n_max);

// Reporting menu matched to the outcome type: single-excitation states and
// their balanced superpositions for one click, double-excitation and
// pair-product states for two clicks.
std::vector<NamedTarget> standard_targets(const std::array<int, 3>& outcome,
                                          const std::array<int, 3>& ensembles, int n_max);

HeraldResult run_herald(const HeraldScenario& scenario);

// Coincidence variant: requires two clicks in two different modes and a
// network of identical balanced splitters.
HeraldResult two_photon_herald(const HeraldScenario& scenario);

// Fidelity of the heralded emission-sector state against the size-weighted
// single-excitation superposition the channel ideally distributes.
double channel_state_fidelity(const HeraldResult& result, const std::array<int, 3>& ensembles,
                              int n_max);

} // namespace wherald
