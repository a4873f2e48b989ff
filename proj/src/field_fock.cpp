#include "wherald/field_fock.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wherald {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string PhotonPattern::str() const {
    return "(" + std::to_string(counts[0]) + "," + std::to_string(counts[1]) + ","
           + std::to_string(counts[2]) + ")";
}

LadderAction mode_ladder(int mode, Ladder op, const PhotonPattern& pattern) {
    if (mode < 0 || mode > 2) throw std::domain_error("mode index out of range [0,2]");
    if (!pattern.valid()) throw std::domain_error("invalid photon pattern " + pattern.str());

    const int n = pattern.counts[static_cast<size_t>(mode)];
    if (op == Ladder::Annihilate) {
        if (n == 0) return {pattern, 0.0, false};
        PhotonPattern out = pattern;
        out.counts[static_cast<size_t>(mode)] = n - 1;
        return {out, std::sqrt(static_cast<double>(n)), false};
    }
    if (n == pattern.n_max) {
        // truncation overflow: report the would-be weight, keep the pattern
        return {pattern, std::sqrt(n + 1.0), true};
    }
    PhotonPattern out = pattern;
    out.counts[static_cast<size_t>(mode)] = n + 1;
    return {out, std::sqrt(n + 1.0), false};
}

void PacketSpec::validate() const {
    if (mode_count < 1) throw std::domain_error("packet needs at least one mode");
    if (!(cell > 0.0)) throw std::domain_error("cell size must be positive");
    if (position < 0.0 || position >= length())
        throw std::domain_error("emitter position outside [0, length)");
}

PacketState packet_coefficients(const PacketSpec& spec) {
    spec.validate();
    const int m = spec.mode_count;
    const double phi = 2.0 * kPi * spec.position / spec.length();
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    PacketState out;
    out.coefficients.reserve(static_cast<size_t>(m));
    for (int q = 0; q < m; ++q)
        out.coefficients.push_back(std::polar(scale, -phi * q));
    out.emitter_phase = (kPi / spec.cell - spec.wavenumber) * spec.position;
    return out;
}

std::complex<double> packet_sum_direct(const PacketSpec& spec) {
    const PacketState state = packet_coefficients(spec);
    // extended-precision accumulation keeps the rounding error of long sums
    // well below the comparison tolerance against the closed form
    long double re = 0.0L, im = 0.0L;
    for (const auto& c : state.coefficients) {
        re += c.real();
        im += c.imag();
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

std::complex<double> packet_sum_closed(const PacketSpec& spec) {
    spec.validate();
    const int m = spec.mode_count;
    const double y = kPi * spec.position / spec.cell; // half the total phase span
    if (spec.position == 0.0) return std::sqrt(static_cast<double>(m));
    const double phase = -(m - 1.0) * y / m;
    const double ratio = std::sin(y) / std::sin(y / m);
    return std::polar(ratio / std::sqrt(static_cast<double>(m)), phase);
}

std::complex<double> packet_sum_sinc(const PacketSpec& spec) {
    spec.validate();
    const int m = spec.mode_count;
    const double y = kPi * spec.position / spec.cell;
    // same prefactor phase as the closed form; only sin(y/m) -> y/m is
    // replaced, so the difference isolates the envelope approximation
    const double envelope = (y == 0.0) ? 1.0 : std::sin(y) / y;
    const double phase = -(m - 1.0) * y / m;
    return std::sqrt(static_cast<double>(m)) * envelope
           * std::complex<double>(std::cos(phase), std::sin(phase));
}

PacketSumRecord packet_sum_record(int mode_count, double position_over_cell) {
    PacketSpec spec;
    spec.mode_count = mode_count;
    spec.cell = 1.0;
    spec.position = position_over_cell;
    spec.validate();

    PacketSumRecord rec;
    rec.mode_count = mode_count;
    rec.position_over_cell = position_over_cell;
    rec.direct_sum = packet_sum_direct(spec);
    rec.closed_form = packet_sum_closed(spec);
    rec.sinc_form = packet_sum_sinc(spec);

    const double exact = std::abs(rec.closed_form);
    const double approx = std::abs(rec.sinc_form);
    rec.sinc_magnitude_deviation = (exact > 1e-300) ? std::abs(exact - approx) / exact
                                                    : std::abs(exact - approx);

    const double y = kPi * position_over_cell;
    const double frac = std::fmod(y, kPi);
    rec.near_envelope_zero = y > 1.0 && std::min(frac, kPi - frac) < 0.1;
    return rec;
}

} // namespace wherald
