#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wherald {

// Occupation of the three single-atom levels in the permutation-symmetric
// subspace of one ensemble: level 0 is the populated ground level, level 1
// the storage level, level 2 the short-lived upper level.
struct Occupation {
    int n0 = 0;
    int n1 = 0;
    int n2 = 0;

    int atoms() const { return n0 + n1 + n2; }
    bool valid() const { return n0 >= 0 && n1 >= 0 && n2 >= 0; }

    // Order labels by (n2, n1); n0 is fixed once the atom number is.
    friend auto operator<=>(const Occupation& a, const Occupation& b) {
        if (auto c = a.n2 <=> b.n2; c != 0) return c;
        if (auto c = a.n1 <=> b.n1; c != 0) return c;
        return a.n0 <=> b.n0;
    }
    friend bool operator==(const Occupation&, const Occupation&) = default;

    std::string str() const;
};

// Ground state of an ensemble of `atoms` atoms.
Occupation ground_occupation(int atoms);

// Result of acting with one collective transition operator on a symmetric
// basis label. `amplitude == 0` means the operator annihilates the label
// (the returned occupation is then the unchanged input).
struct CollectiveAction {
    Occupation occupation;
    double amplitude = 0.0;
};

// Apply the collective operator moving one atom from level `from` to level
// `to`; `to == from` yields the level population as a diagonal amplitude.
// Matrix elements follow the bosonic representation of the symmetric
// subspace: sqrt(n_from * (n_to + 1)) for off-diagonal moves.
CollectiveAction collective_apply(int to, int from, const Occupation& occ);

// Number of symmetric labels with fixed atom count: (N+1)(N+2)/2.
long symmetric_dimension(int atoms);

// All occupations of `atoms` atoms sorted by (n2, n1) ascending.
std::vector<Occupation> enumerate_occupations(int atoms);

// Norm ratio between the m-fold raised ground state and the normalized
// m-excitation symmetric state: m! * sqrt(binomial(N, m)).
double dicke_ladder_coefficient(int excitations, int atoms);

// One term of the product-basis expansion of a symmetric state: positions
// of excited atoms plus the common coefficient 1/sqrt(binomial(N, m)).
struct ProductTerm {
    std::vector<int> excited_positions;
    double coefficient = 0.0;
};

// Expansion of the normalized m-excitation symmetric state over the
// distinguishable-atom product basis (levels 0 and 1 only). Deterministic
// lexicographic order of position tuples.
std::vector<ProductTerm> dicke_product_expansion(int excitations, int atoms);

// Label and coefficient of the normalized m-excitation symmetric state.
std::pair<Occupation, double> symmetric_excited_state(int excitations, int atoms);

} // namespace wherald
