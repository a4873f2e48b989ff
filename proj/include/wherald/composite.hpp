#pragma once

#include <array>
#include <compare>
#include <complex>
#include <map>
#include <string>

#include "wherald/field_fock.hpp"
#include "wherald/symmetric_ensemble.hpp"

namespace wherald {

using Complex = std::complex<double>;

// Amplitudes below this magnitude are dropped from sparse states.
inline constexpr double kAmplitudeDropTolerance = 1e-14;

// One basis label of the full system: three symmetric ensembles (A, B, C)
// followed by the three emission modes.
struct BasisLabel {
    std::array<Occupation, 3> atoms;
    PhotonPattern photons;

    friend auto operator<=>(const BasisLabel& a, const BasisLabel& b) {
        if (auto c = a.atoms <=> b.atoms; c != 0) return c;
        return a.photons <=> b.photons;
    }
    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;

    bool valid() const;
    std::string str() const;
};

// Sparse state over composite labels with an explicit record of weight lost
// to photon-number truncation. Labels are kept in canonical order, so all
// iteration and serialization is deterministic.
class StateVector {
public:
    using Map = std::map<BasisLabel, Complex>;

    StateVector() = default;

    // Accumulate an amplitude onto a label (validates the label).
    void add(const BasisLabel& label, Complex amplitude);
    void set(const BasisLabel& label, Complex amplitude);
    Complex amplitude(const BasisLabel& label) const;

    double norm() const;
    double norm_squared() const;
    StateVector normalized() const;
    void scale(Complex factor);

    // Remove entries with magnitude below the drop tolerance.
    void prune(double tolerance = kAmplitudeDropTolerance);

    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    Map::const_iterator begin() const { return entries_.begin(); }
    Map::const_iterator end() const { return entries_.end(); }

    double leakage() const { return leakage_; }
    void add_leakage(double weight);
    void set_leakage(double weight) { leakage_ = weight; }

    // Ensemble sizes and photon truncation of the stored labels; throws on
    // an empty state.
    std::array<int, 3> ensemble_sizes() const;
    int photon_truncation() const;

private:
    Map entries_;
    double leakage_ = 0.0;
};

// All ensembles in their ground state, no photons.
StateVector vacuum_state(const std::array<int, 3>& ensembles, int n_max);

// Convenience constructor for a single normalized label.
StateVector basis_state(const BasisLabel& label, Complex amplitude = 1.0);

// Hermitian inner product, conjugate-linear in the first argument. Throws
// std::domain_error when the two states live in different composite spaces.
Complex inner(const StateVector& bra, const StateVector& ket);

// |<target|state>|^2 for normalized inputs (norms within 1e-9 of one).
double fidelity(const StateVector& state, const StateVector& target);

// Outcome of conditioning on a photon-counting result.
struct ProjectionResult {
    double probability = 0.0;
    StateVector post_state;       // photon registers reset to vacuum
    bool zero_probability = false;
};

// Project onto the photon pattern `outcome`, renormalize, and reset the
// photon registers to vacuum. Leakage of the input is carried through.
ProjectionResult project_photons(const StateVector& state, const std::array<int, 3>& outcome);

// Restriction to labels with no upper-level population, renormalized.
struct LevelRestriction {
    StateVector state;
    double weight = 0.0; // probability mass of the retained sector
};

LevelRestriction restrict_no_upper_level(const StateVector& state);

// Canonical text serialization: one line per label, fields
// n_A0 n_A1 n_A2 n_B0 n_B1 n_B2 n_C0 n_C1 n_C2 p_A p_B p_C Re Im,
// sorted by label. Floats are rendered with 17 significant digits.
std::string serialize_state(const StateVector& state);
StateVector parse_state(const std::string& text, int n_max);

} // namespace wherald
