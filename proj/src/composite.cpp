#include "wherald/composite.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wherald {

bool BasisLabel::valid() const {
    for (const auto& occ : atoms)
        if (!occ.valid()) return false;
    return photons.valid();
}

std::string BasisLabel::str() const {
    return atoms[0].str() + atoms[1].str() + atoms[2].str() + " ph" + photons.str();
}

void StateVector::add(const BasisLabel& label, Complex amplitude) {
    if (!label.valid()) throw std::domain_error("invalid basis label " + label.str());
    if (!entries_.empty()) {
        const auto& ref = entries_.begin()->first;
        for (int x = 0; x < 3; ++x)
            if (ref.atoms[static_cast<size_t>(x)].atoms() != label.atoms[static_cast<size_t>(x)].atoms())
                throw std::domain_error("label ensemble sizes differ from state");
        if (ref.photons.n_max != label.photons.n_max)
            throw std::domain_error("label photon truncation differs from state");
    }
    entries_[label] += amplitude;
}

void StateVector::set(const BasisLabel& label, Complex amplitude) {
    if (!label.valid()) throw std::domain_error("invalid basis label " + label.str());
    entries_[label] = amplitude;
}

Complex StateVector::amplitude(const BasisLabel& label) const {
    auto it = entries_.find(label);
    return it == entries_.end() ? Complex{0.0, 0.0} : it->second;
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& [label, amp] : entries_) s += std::norm(amp);
    return s;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize a zero state");
    StateVector out = *this;
    out.scale(1.0 / n);
    return out;
}

void StateVector::scale(Complex factor) {
    for (auto& [label, amp] : entries_) amp *= factor;
}

void StateVector::prune(double tolerance) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (std::abs(it->second) < tolerance)
            it = entries_.erase(it);
        else
            ++it;
    }
}

void StateVector::add_leakage(double weight) {
    if (weight < 0.0) throw std::domain_error("leakage weight must be non-negative");
    leakage_ += weight;
}

std::array<int, 3> StateVector::ensemble_sizes() const {
    if (entries_.empty()) throw std::domain_error("empty state has no ensemble sizes");
    const auto& ref = entries_.begin()->first;
    return {ref.atoms[0].atoms(), ref.atoms[1].atoms(), ref.atoms[2].atoms()};
}

int StateVector::photon_truncation() const {
    if (entries_.empty()) throw std::domain_error("empty state has no photon truncation");
    return entries_.begin()->first.photons.n_max;
}

StateVector vacuum_state(const std::array<int, 3>& ensembles, int n_max) {
    if (n_max < 0) throw std::domain_error("photon truncation must be non-negative");
    BasisLabel label;
    for (int x = 0; x < 3; ++x) {
        if (ensembles[static_cast<size_t>(x)] < 1)
            throw std::domain_error("each ensemble needs at least one atom");
        label.atoms[static_cast<size_t>(x)] = ground_occupation(ensembles[static_cast<size_t>(x)]);
    }
    label.photons = PhotonPattern{{0, 0, 0}, n_max};
    return basis_state(label);
}

StateVector basis_state(const BasisLabel& label, Complex amplitude) {
    StateVector out;
    out.add(label, amplitude);
    return out;
}

namespace {

void check_same_space(const StateVector& a, const StateVector& b) {
    if (a.empty() || b.empty()) return;
    if (a.ensemble_sizes() != b.ensemble_sizes() || a.photon_truncation() != b.photon_truncation())
        throw std::domain_error("states live in different composite spaces");
}

} // namespace

Complex inner(const StateVector& bra, const StateVector& ket) {
    check_same_space(bra, ket);
    // iterate the smaller map, look up in the larger
    const StateVector& small = bra.size() <= ket.size() ? bra : ket;
    const StateVector& large = bra.size() <= ket.size() ? ket : bra;
    const bool small_is_bra = &small == &bra;
    Complex sum = 0.0;
    for (const auto& [label, amp] : small) {
        const Complex other = large.amplitude(label);
        sum += small_is_bra ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return sum;
}

double fidelity(const StateVector& state, const StateVector& target) {
    if (std::abs(state.norm() - 1.0) > 1e-9)
        throw std::domain_error("fidelity requires a normalized state");
    if (std::abs(target.norm() - 1.0) > 1e-9)
        throw std::domain_error("fidelity requires a normalized target");
    return std::norm(inner(target, state));
}

ProjectionResult project_photons(const StateVector& state, const std::array<int, 3>& outcome) {
    if (!state.empty()) {
        const int n_max = state.photon_truncation();
        for (int c : outcome)
            if (c < 0 || c > n_max)
                throw std::domain_error("projection outcome exceeds photon truncation");
    }
    ProjectionResult result;
    StateVector selected;
    for (const auto& [label, amp] : state) {
        if (label.photons.counts == outcome) {
            result.probability += std::norm(amp);
            BasisLabel reset = label;
            reset.photons.counts = {0, 0, 0};
            selected.add(reset, amp);
        }
    }
    if (result.probability <= 0.0) {
        result.zero_probability = true;
        result.post_state.set_leakage(state.leakage());
        return result;
    }
    selected.scale(1.0 / std::sqrt(result.probability));
    selected.set_leakage(state.leakage());
    selected.prune();
    result.post_state = std::move(selected);
    return result;
}

LevelRestriction restrict_no_upper_level(const StateVector& state) {
    LevelRestriction out;
    StateVector kept;
    for (const auto& [label, amp] : state) {
        bool upper = false;
        for (const auto& occ : label.atoms)
            if (occ.n2 > 0) { upper = true; break; }
        if (!upper) {
            out.weight += std::norm(amp);
            kept.add(label, amp);
        }
    }
    if (out.weight > 0.0) {
        kept.scale(1.0 / std::sqrt(out.weight));
        kept.prune();
    }
    kept.set_leakage(state.leakage());
    out.state = std::move(kept);
    return out;
}

namespace {

std::string render_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string serialize_state(const StateVector& state) {
    std::string out;
    for (const auto& [label, amp] : state) {
        for (const auto& occ : label.atoms) {
            out += std::to_string(occ.n0);
            out += ' ';
            out += std::to_string(occ.n1);
            out += ' ';
            out += std::to_string(occ.n2);
            out += ' ';
        }
        for (int c : label.photons.counts) {
            out += std::to_string(c);
            out += ' ';
        }
        out += render_double(amp.real());
        out += ' ';
        out += render_double(amp.imag());
        out += '\n';
    }
    return out;
}

StateVector parse_state(const std::string& text, int n_max) {
    StateVector out;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        BasisLabel label;
        double re = 0.0, im = 0.0;
        for (auto& occ : label.atoms)
            if (!(fields >> occ.n0 >> occ.n1 >> occ.n2))
                throw std::domain_error("bad occupation fields at line " + std::to_string(line_no));
        for (int& c : label.photons.counts)
            if (!(fields >> c))
                throw std::domain_error("bad photon fields at line " + std::to_string(line_no));
        if (!(fields >> re >> im))
            throw std::domain_error("bad amplitude fields at line " + std::to_string(line_no));
        label.photons.n_max = n_max;
        out.add(label, Complex{re, im});
    }
    return out;
}

} // namespace wherald
