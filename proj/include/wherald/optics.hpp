#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "wherald/composite.hpp"

namespace wherald {

// One beamsplitter mixing two of the three emission modes. The outgoing
// operators are a' = c a - s b and b' = s a + c b with c^2 + s^2 = 1.
struct Beamsplitter {
    int mode_a = 0;
    int mode_b = 1;
    double transmit = 1.0; // c
    double reflect = 0.0;  // s

    void validate() const;
    static Beamsplitter from_angle(int mode_a, int mode_b, double angle);
};

using BeamsplitterNetwork = std::vector<Beamsplitter>;

// Unitary block of one beamsplitter in the total-photon sector n, in the
// basis |n-j, j> (j photons in mode_b), built from the exact binomial
// expansion of the transformed creation operators. Equals
// exp(theta (a+ b - a b+)) with theta = atan2(s, c) restricted to the sector.
Eigen::MatrixXd beamsplitter_block(const Beamsplitter& bs, int total_photons);

// All sector blocks a per-mode truncation can populate (totals 0 .. 2*n_max).
std::vector<Eigen::MatrixXd> bs_unitary(const Beamsplitter& bs, int n_max);

// Apply the network, in order, to every photon register of the state.
// Weight pushed above the truncation is added to the state's leakage.
StateVector apply_network(const StateVector& state, const BeamsplitterNetwork& network);

// Action of the network on the three single-photon amplitudes.
Eigen::Matrix3d single_photon_matrix(const BeamsplitterNetwork& network);

// Standard two-splitter arrangement: a balanced splitter on modes (A, B)
// followed by a splitter on (B, C) with transmit sqrt(2/3), chosen so the
// three single-photon inputs map to the balanced superpositions used by the
// heralding analysis. The second splitter can take either output of the
// first; the default mixes the B output.
BeamsplitterNetwork standard_network(int second_input_mode = 1);

// All-balanced variant used by the two-photon coincidence scheme.
BeamsplitterNetwork balanced_network();

} // namespace wherald
