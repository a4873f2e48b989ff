#pragma once

#include <array>
#include <compare>
#include <complex>
#include <string>
#include <vector>

namespace wherald {

// Photon numbers of the three emission modes under a shared truncation.
struct PhotonPattern {
    std::array<int, 3> counts{0, 0, 0};
    int n_max = 2;

    int total() const { return counts[0] + counts[1] + counts[2]; }
    bool valid() const {
        if (n_max < 0) return false;
        for (int c : counts)
            if (c < 0 || c > n_max) return false;
        return true;
    }

    friend auto operator<=>(const PhotonPattern& a, const PhotonPattern& b) {
        if (auto c = a.counts <=> b.counts; c != 0) return c;
        return a.n_max <=> b.n_max;
    }
    friend bool operator==(const PhotonPattern&, const PhotonPattern&) = default;

    std::string str() const;
};

enum class Ladder { Annihilate, Create };

// Result of one mode ladder operation. When a creation would exceed the
// truncation, `overflow` is set, the pattern is returned unchanged and the
// amplitude still carries sqrt(n+1) so callers can account leaked weight.
struct LadderAction {
    PhotonPattern pattern;
    double amplitude = 0.0;
    bool overflow = false;
};

LadderAction mode_ladder(int mode, Ladder op, const PhotonPattern& pattern);

// Discretized single-photon packet: `mode_count` plane-wave modes on a
// quantization length `length = cell * mode_count`, emitter at `position`.
struct PacketSpec {
    int mode_count = 1;
    double cell = 1.0;
    double position = 0.0;
    double wavenumber = 0.0;

    double length() const { return cell * mode_count; }
    void validate() const;
};

// Mode coefficients of the emitted packet, uniform magnitude 1/sqrt(M) with
// position-dependent phases, plus the overall emitter phase.
struct PacketState {
    std::vector<std::complex<double>> coefficients;
    double emitter_phase = 0.0;
};

PacketState packet_coefficients(const PacketSpec& spec);

// Mode sum evaluated three ways: direct summation, the closed geometric
// form, and the sinc-shaped envelope approximation.
std::complex<double> packet_sum_direct(const PacketSpec& spec);
std::complex<double> packet_sum_closed(const PacketSpec& spec);
std::complex<double> packet_sum_sinc(const PacketSpec& spec);

// Comparison record for one emitter position, keyed by position in units of
// the cell size.
struct PacketSumRecord {
    int mode_count = 0;
    double position_over_cell = 0.0;
    std::complex<double> direct_sum;
    std::complex<double> closed_form;
    std::complex<double> sinc_form;
    double sinc_magnitude_deviation = 0.0; // relative, vs |closed_form|
    bool near_envelope_zero = false;
};

PacketSumRecord packet_sum_record(int mode_count, double position_over_cell);

} // namespace wherald
