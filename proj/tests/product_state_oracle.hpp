#pragma once

// Brute-force reference for the collective simulation: the same interaction
// written over distinguishable atoms (3^T product basis) and evolved with an
// independent substepped Taylor integrator. Symmetric-sector amplitudes are
// recovered by summing over permutation classes. Test-only; exponential in
// the total atom number.

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "wherald/composite.hpp"
#include "wherald/dynamics.hpp"

namespace oracle {

using wherald::BasisLabel;
using wherald::Complex;
using wherald::CouplingParams;
using wherald::Occupation;
using wherald::PhotonPattern;
using wherald::StateVector;

struct ProductSpace {
    std::array<int, 3> ensembles;
    int n_max;
    int total_atoms;
    long atom_dim;   // 3^total_atoms
    long photon_dim; // (n_max+1)^3
    long dim;

    ProductSpace(const std::array<int, 3>& ens, int trunc) : ensembles(ens), n_max(trunc) {
        total_atoms = ens[0] + ens[1] + ens[2];
        atom_dim = 1;
        for (int i = 0; i < total_atoms; ++i) atom_dim *= 3;
        photon_dim = static_cast<long>(n_max + 1) * (n_max + 1) * (n_max + 1);
        dim = atom_dim * photon_dim;
    }

    int ensemble_of_atom(int atom) const {
        if (atom < ensembles[0]) return 0;
        if (atom < ensembles[0] + ensembles[1]) return 1;
        return 2;
    }

    void decode(long index, std::vector<int>& levels, std::array<int, 3>& photons) const {
        long ph = index % photon_dim;
        long at = index / photon_dim;
        photons[2] = static_cast<int>(ph % (n_max + 1));
        ph /= (n_max + 1);
        photons[1] = static_cast<int>(ph % (n_max + 1));
        photons[0] = static_cast<int>(ph / (n_max + 1));
        levels.assign(static_cast<size_t>(total_atoms), 0);
        for (int a = total_atoms - 1; a >= 0; --a) {
            levels[static_cast<size_t>(a)] = static_cast<int>(at % 3);
            at /= 3;
        }
    }

    long encode(const std::vector<int>& levels, const std::array<int, 3>& photons) const {
        long at = 0;
        for (int a = 0; a < total_atoms; ++a) at = at * 3 + levels[static_cast<size_t>(a)];
        const long ph = (static_cast<long>(photons[0]) * (n_max + 1) + photons[1]) * (n_max + 1)
                        + photons[2];
        return at * photon_dim + ph;
    }
};

// One application of the product-basis generator to a dense vector.
inline std::vector<Complex> apply_generator(const ProductSpace& space, const CouplingParams& params,
                                            const std::vector<Complex>& in) {
    std::vector<Complex> out(static_cast<size_t>(space.dim), Complex{0.0, 0.0});
    std::vector<int> levels;
    std::array<int, 3> photons{};
    for (long u = 0; u < space.dim; ++u) {
        const Complex amp = in[static_cast<size_t>(u)];
        if (amp == Complex{0.0, 0.0}) continue;
        space.decode(u, levels, photons);
        for (int a = 0; a < space.total_atoms; ++a) {
            const int x = space.ensemble_of_atom(a);
            const Complex phase =
                std::polar(1.0, params.wavenumber * params.positions[static_cast<size_t>(x)]);
            const int level = levels[static_cast<size_t>(a)];
            if (level == 0) { // pump up
                levels[static_cast<size_t>(a)] = 2;
                out[static_cast<size_t>(space.encode(levels, photons))] +=
                    params.pump * phase * amp;
                levels[static_cast<size_t>(a)] = 0;
            }
            if (level == 2) { // pump down
                levels[static_cast<size_t>(a)] = 0;
                out[static_cast<size_t>(space.encode(levels, photons))] -=
                    params.pump * std::conj(phase) * amp;
                levels[static_cast<size_t>(a)] = 2;
            }
            if (level == 1 && photons[static_cast<size_t>(x)] > 0) { // absorb photon
                levels[static_cast<size_t>(a)] = 2;
                photons[static_cast<size_t>(x)] -= 1;
                const double root = std::sqrt(photons[static_cast<size_t>(x)] + 1.0);
                out[static_cast<size_t>(space.encode(levels, photons))] +=
                    params.emission * phase * root * amp;
                photons[static_cast<size_t>(x)] += 1;
                levels[static_cast<size_t>(a)] = 1;
            }
            if (level == 2 && photons[static_cast<size_t>(x)] < space.n_max) { // emit photon
                levels[static_cast<size_t>(a)] = 1;
                photons[static_cast<size_t>(x)] += 1;
                const double root = std::sqrt(static_cast<double>(photons[static_cast<size_t>(x)]));
                out[static_cast<size_t>(space.encode(levels, photons))] -=
                    params.emission * std::conj(phase) * root * amp;
                photons[static_cast<size_t>(x)] -= 1;
                levels[static_cast<size_t>(a)] = 2;
            }
        }
    }
    return out;
}

// exp(-time * G) applied to the vacuum, via K substeps of a Taylor series
// pushed to machine precision.
inline std::vector<Complex> evolve_vacuum(const ProductSpace& space, const CouplingParams& params,
                                          double time, int substeps = 64) {
    std::vector<Complex> state(static_cast<size_t>(space.dim), Complex{0.0, 0.0});
    std::vector<int> ground(static_cast<size_t>(space.total_atoms), 0);
    state[static_cast<size_t>(space.encode(ground, {0, 0, 0}))] = 1.0;

    const double dt = time / substeps;
    for (int s = 0; s < substeps; ++s) {
        std::vector<Complex> term = state;
        std::vector<Complex> acc = state;
        for (int order = 1; order <= 40; ++order) {
            term = apply_generator(space, params, term);
            double term_norm = 0.0;
            for (auto& t : term) {
                t *= -dt / order;
                term_norm += std::norm(t);
            }
            for (size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
            if (std::sqrt(term_norm) < 1e-18) break;
        }
        state = std::move(acc);
    }
    return state;
}

// Collapse the product-basis vector onto the symmetric collective basis.
// Permutation classes carry equal amplitudes, so the collective amplitude is
// the class sum divided by the square root of the class size.
inline StateVector symmetric_sector(const ProductSpace& space, const std::vector<Complex>& state) {
    std::map<BasisLabel, Complex> sums;
    std::vector<int> levels;
    std::array<int, 3> photons{};
    for (long u = 0; u < space.dim; ++u) {
        const Complex amp = state[static_cast<size_t>(u)];
        if (amp == Complex{0.0, 0.0}) continue;
        space.decode(u, levels, photons);
        BasisLabel label;
        int atom = 0;
        for (int x = 0; x < 3; ++x) {
            Occupation occ;
            for (int i = 0; i < space.ensembles[static_cast<size_t>(x)]; ++i, ++atom) {
                const int level = levels[static_cast<size_t>(atom)];
                if (level == 0) ++occ.n0;
                else if (level == 1) ++occ.n1;
                else ++occ.n2;
            }
            label.atoms[static_cast<size_t>(x)] = occ;
        }
        label.photons = PhotonPattern{photons, space.n_max};
        sums[label] += amp;
    }

    StateVector out;
    for (const auto& [label, sum] : sums) {
        double log_class_size = 0.0;
        for (const auto& occ : label.atoms) {
            log_class_size += std::lgamma(occ.atoms() + 1.0) - std::lgamma(occ.n0 + 1.0)
                              - std::lgamma(occ.n1 + 1.0) - std::lgamma(occ.n2 + 1.0);
        }
        const Complex value = sum * std::exp(-0.5 * log_class_size);
        if (std::abs(value) >= wherald::kAmplitudeDropTolerance) out.add(label, value);
    }
    return out;
}

// Convenience wrapper: evolved symmetric-sector state straight from params.
inline StateVector evolved_collective_state(const std::array<int, 3>& ensembles, int n_max,
                                            const CouplingParams& params, double time) {
    const ProductSpace space(ensembles, n_max);
    return symmetric_sector(space, evolve_vacuum(space, params, time));
}

} // namespace oracle
