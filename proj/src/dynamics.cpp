#include "wherald/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "wherald/errors.hpp"

namespace wherald {

namespace {
const Complex kI{0.0, 1.0};
}

void CouplingParams::validate() const {
    if (!(pump > 0.0)) throw std::domain_error("pump coupling must be positive");
    if (!(emission > 0.0)) throw std::domain_error("emission coupling must be positive");
    if (!std::isfinite(wavenumber)) throw std::domain_error("wavenumber must be finite");
    for (double l : positions)
        if (!std::isfinite(l)) throw std::domain_error("ensemble position must be finite");
}

double interaction_strength(const CouplingParams& params, double time) {
    params.validate();
    return time * time * params.pump * params.emission;
}

double time_for_strength(const CouplingParams& params, double strength) {
    params.validate();
    if (!(strength >= 0.0)) throw std::domain_error("interaction strength must be non-negative");
    return std::sqrt(strength / (params.pump * params.emission));
}

CompositeSpace::CompositeSpace(const std::array<int, 3>& ensembles, int n_max)
    : ensembles_(ensembles), n_max_(n_max) {
    if (n_max < 0) throw std::domain_error("photon truncation must be non-negative");
    long dim = 1;
    for (int x = 2; x >= 0; --x) {
        if (ensembles_[static_cast<size_t>(x)] < 0)
            throw std::domain_error("ensemble size must be non-negative");
        occupations_[static_cast<size_t>(x)] = enumerate_occupations(ensembles_[static_cast<size_t>(x)]);
    }
    photon_stride_ = 1;
    const long photon_dim = static_cast<long>(n_max + 1) * (n_max + 1) * (n_max + 1);
    dim = photon_dim;
    for (int x = 2; x >= 0; --x) {
        atom_strides_[static_cast<size_t>(x)] = dim;
        dim *= static_cast<long>(occupations_[static_cast<size_t>(x)].size());
    }
    dimension_ = dim;
}

BasisLabel CompositeSpace::label(long index) const {
    if (index < 0 || index >= dimension_) throw std::domain_error("basis index out of range");
    BasisLabel out;
    long rest = index;
    for (int x = 0; x < 3; ++x) {
        const long stride = atom_strides_[static_cast<size_t>(x)];
        out.atoms[static_cast<size_t>(x)] = occupations_[static_cast<size_t>(x)][static_cast<size_t>(rest / stride)];
        rest %= stride;
    }
    const int base = n_max_ + 1;
    out.photons.n_max = n_max_;
    out.photons.counts[2] = static_cast<int>(rest % base);
    rest /= base;
    out.photons.counts[1] = static_cast<int>(rest % base);
    out.photons.counts[0] = static_cast<int>(rest / base);
    return out;
}

long CompositeSpace::index(const BasisLabel& label) const {
    if (label.photons.n_max != n_max_)
        throw std::domain_error("label photon truncation does not match space");
    if (!label.valid()) throw std::domain_error("invalid label " + label.str());
    long idx = 0;
    for (int x = 0; x < 3; ++x) {
        const auto& occ = label.atoms[static_cast<size_t>(x)];
        const int atoms = ensembles_[static_cast<size_t>(x)];
        if (occ.atoms() != atoms)
            throw std::domain_error("label atom count does not match space");
        // occupations are listed by (n2, n1); n2 block k holds atoms-k+1 labels
        const long occ_idx = static_cast<long>(occ.n2) * (atoms + 1)
                             - static_cast<long>(occ.n2) * (occ.n2 - 1) / 2 + occ.n1;
        idx += occ_idx * atom_strides_[static_cast<size_t>(x)];
    }
    const int base = n_max_ + 1;
    idx += (static_cast<long>(label.photons.counts[0]) * base + label.photons.counts[1]) * base
           + label.photons.counts[2];
    return idx;
}

Eigen::VectorXcd CompositeSpace::to_dense(const StateVector& state) const {
    Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(dimension_);
    for (const auto& [lbl, amp] : state) vec[index(lbl)] += amp;
    return vec;
}

StateVector CompositeSpace::from_dense(const Eigen::VectorXcd& vec, double leakage) const {
    if (vec.size() != dimension_) throw std::domain_error("dense vector has wrong dimension");
    StateVector out;
    for (long i = 0; i < dimension_; ++i) {
        if (std::abs(vec[i]) >= kAmplitudeDropTolerance) out.set(label(i), vec[i]);
    }
    out.set_leakage(leakage);
    return out;
}

SparseGenerator build_generator(const CompositeSpace& space, const CouplingParams& params) {
    params.validate();
    const long dim = space.dimension();
    SparseGenerator gen(dim, dim);
    gen.reserve(Eigen::VectorXi::Constant(dim, 12));

    std::array<Complex, 3> phase;
    for (int x = 0; x < 3; ++x)
        phase[static_cast<size_t>(x)] =
            std::polar(1.0, params.wavenumber * params.positions[static_cast<size_t>(x)]);

    for (long u = 0; u < dim; ++u) {
        const BasisLabel from = space.label(u);
        for (int x = 0; x < 3; ++x) {
            const auto& occ = from.atoms[static_cast<size_t>(x)];
            const Complex ph = phase[static_cast<size_t>(x)];

            // pump: ground -> upper, and its conjugate
            if (auto up = collective_apply(2, 0, occ); up.amplitude != 0.0) {
                BasisLabel to = from;
                to.atoms[static_cast<size_t>(x)] = up.occupation;
                gen.insert(space.index(to), u) = params.pump * ph * up.amplitude;
            }
            if (auto down = collective_apply(0, 2, occ); down.amplitude != 0.0) {
                BasisLabel to = from;
                to.atoms[static_cast<size_t>(x)] = down.occupation;
                gen.insert(space.index(to), u) = -params.pump * std::conj(ph) * down.amplitude;
            }

            // emission: photon absorption raising storage to upper, and the
            // photon-creating conjugate; creation beyond the truncation is
            // dropped together with its pair, keeping anti-Hermiticity exact
            if (auto absorb = collective_apply(2, 1, occ); absorb.amplitude != 0.0) {
                auto ann = mode_ladder(x, Ladder::Annihilate, from.photons);
                if (ann.amplitude != 0.0) {
                    BasisLabel to = from;
                    to.atoms[static_cast<size_t>(x)] = absorb.occupation;
                    to.photons = ann.pattern;
                    gen.insert(space.index(to), u) =
                        params.emission * ph * absorb.amplitude * ann.amplitude;
                }
            }
            if (auto emit = collective_apply(1, 2, occ); emit.amplitude != 0.0) {
                auto cre = mode_ladder(x, Ladder::Create, from.photons);
                if (!cre.overflow) {
                    BasisLabel to = from;
                    to.atoms[static_cast<size_t>(x)] = emit.occupation;
                    to.photons = cre.pattern;
                    gen.insert(space.index(to), u) =
                        -params.emission * std::conj(ph) * emit.amplitude * cre.amplitude;
                }
            }
        }
    }
    gen.makeCompressed();
    return gen;
}

namespace {

void check_anti_hermitian(const SparseGenerator& gen) {
    double scale = 1.0;
    for (int k = 0; k < gen.outerSize(); ++k)
        for (SparseGenerator::InnerIterator it(gen, k); it; ++it)
            scale = std::max(scale, std::abs(it.value()));
    for (int k = 0; k < gen.outerSize(); ++k) {
        for (SparseGenerator::InnerIterator it(gen, k); it; ++it) {
            const Complex mirror = gen.coeff(it.col(), it.row());
            if (std::abs(it.value() + std::conj(mirror)) > 1e-13 * scale)
                throw std::domain_error("generator is not anti-Hermitian");
        }
    }
}

// Lanczos approximation of exp(i*time*H)*v for Hermitian H = i*G.
Eigen::VectorXcd krylov_exp(const SparseGenerator& gen, const Eigen::VectorXcd& v, double time,
                            int depth) {
    const double beta0 = v.norm();
    if (beta0 == 0.0) return v;
    if (depth > 30) throw NumericalError("Krylov evolution failed to converge");

    constexpr int kMaxIterations = 60;
    constexpr double kTolerance = 1e-13;

    std::vector<Eigen::VectorXcd> basis;
    basis.push_back(v / beta0);
    std::vector<double> alpha, beta;
    Eigen::VectorXcd result;
    Eigen::VectorXcd prev;
    bool converged = false;

    for (int j = 0; j < kMaxIterations; ++j) {
        Eigen::VectorXcd w = kI * (gen * basis[static_cast<size_t>(j)]);
        if (j > 0) w -= beta[static_cast<size_t>(j - 1)] * basis[static_cast<size_t>(j - 1)];
        const double a = (basis[static_cast<size_t>(j)].adjoint() * w)(0).real();
        alpha.push_back(a);
        w -= a * basis[static_cast<size_t>(j)];
        for (int k = 0; k <= j; ++k)
            w -= (basis[static_cast<size_t>(k)].adjoint() * w)(0) * basis[static_cast<size_t>(k)];
        const double b = w.norm();
        beta.push_back(b);

        const int m = j + 1;
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            tri(i, i) = alpha[static_cast<size_t>(i)];
            if (i + 1 < m) {
                tri(i, i + 1) = beta[static_cast<size_t>(i)];
                tri(i + 1, i) = beta[static_cast<size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
        Eigen::VectorXcd y(m);
        y.setZero();
        for (int s = 0; s < m; ++s) {
            const Complex factor =
                std::exp(kI * time * eig.eigenvalues()[s]) * eig.eigenvectors()(0, s) * beta0;
            y += factor * eig.eigenvectors().col(s).cast<Complex>();
        }

        const bool breakdown = b <= 1e-14 * beta0;
        double step = kTolerance * beta0 + 1.0;
        if (prev.size() == m - 1) {
            Eigen::VectorXcd padded(m);
            padded.head(m - 1) = prev;
            padded[m - 1] = 0.0;
            step = (y - padded).norm();
        }
        const double residual = b * std::abs(y[m - 1]);
        if (breakdown || (j >= 2 && step <= kTolerance * beta0 && residual <= 10 * kTolerance * beta0)) {
            result = y[0] * basis[0];
            for (int i = 1; i < m; ++i) result += y[i] * basis[static_cast<size_t>(i)];
            converged = true;
            break;
        }
        prev = y;
        if (j < kMaxIterations - 1) basis.push_back(w / b);
    }

    if (converged) return result;
    // split the step and try again on each half
    Eigen::VectorXcd half = krylov_exp(gen, v, time / 2.0, depth + 1);
    return krylov_exp(gen, half, time / 2.0, depth + 1);
}

} // namespace

StateVector evolve_exact(const CompositeSpace& space, const SparseGenerator& generator,
                         const StateVector& state, double time, EvolveMethod method) {
    if (generator.rows() != space.dimension() || generator.cols() != space.dimension())
        throw std::domain_error("generator dimension does not match space");
    check_anti_hermitian(generator);

    Eigen::VectorXcd v = space.to_dense(state);
    const double in_norm = v.norm();
    Eigen::VectorXcd out;

    const bool dense = method == EvolveMethod::Dense
                       || (method == EvolveMethod::Auto && space.dimension() <= kDenseEvolveLimit);
    if (time == 0.0 || in_norm == 0.0) {
        out = v;
    } else if (dense) {
        Eigen::MatrixXcd propagator = (-time * Eigen::MatrixXcd(generator)).exp();
        out = propagator * v;
    } else {
        out = krylov_exp(generator, v, time, 0);
    }

    if (std::abs(out.norm() - in_norm) > 1e-10 * std::max(1.0, in_norm))
        throw NumericalError("evolution drifted from unit norm");
    return space.from_dense(out, state.leakage());
}

StateVector evolve_series(const CompositeSpace& space, const SparseGenerator& generator,
                          const StateVector& state, double time, int order) {
    if (order < 0 || order > 6) throw std::domain_error("series order outside [0,6]");
    if (generator.rows() != space.dimension() || generator.cols() != space.dimension())
        throw std::domain_error("generator dimension does not match space");
    check_anti_hermitian(generator);

    Eigen::VectorXcd term = space.to_dense(state);
    Eigen::VectorXcd acc = term;
    for (int j = 1; j <= order; ++j) {
        term = (generator * term).eval();
        term *= -time / j;
        acc += term;
    }
    return space.from_dense(acc, state.leakage());
}

double single_photon_reference(double strength, int atoms) {
    if (atoms < 0) throw std::domain_error("ensemble size must be non-negative");
    return -0.5 * strength * std::sqrt(static_cast<double>(atoms));
}

double cross_pair_reference(double strength, int atoms_x, int atoms_y) {
    if (atoms_x < 0 || atoms_y < 0) throw std::domain_error("ensemble size must be non-negative");
    return 0.25 * strength * strength * std::sqrt(static_cast<double>(atoms_x) * atoms_y);
}

double same_pair_reference(double strength, int atoms) {
    if (atoms < 0) throw std::domain_error("ensemble size must be non-negative");
    return 0.25 * strength * strength * std::sqrt(atoms * (atoms - 1.0));
}

double same_pair_printed_reference(double strength, int atoms) {
    return 0.5 * same_pair_reference(strength, atoms);
}

namespace {

struct SectorSpec {
    std::string name;
    std::array<int, 3> photons;
    std::array<int, 3> excitations; // storage-level excitations per ensemble
    int claimed_order;
    bool printed_variant;
};

BasisLabel sector_label(const CompositeSpace& space, const SectorSpec& spec) {
    BasisLabel label;
    const auto& ens = space.ensembles();
    for (int x = 0; x < 3; ++x) {
        const int m = spec.excitations[static_cast<size_t>(x)];
        label.atoms[static_cast<size_t>(x)] = Occupation{ens[static_cast<size_t>(x)] - m, m, 0};
    }
    label.photons = PhotonPattern{spec.photons, space.photon_truncation()};
    return label;
}

double sector_reference(const SectorSpec& spec, const std::array<int, 3>& ens, double strength) {
    int modes[3];
    int count = 0;
    for (int x = 0; x < 3; ++x)
        for (int c = 0; c < spec.photons[static_cast<size_t>(x)]; ++c) modes[count++] = x;
    if (count == 1) return single_photon_reference(strength, ens[static_cast<size_t>(modes[0])]);
    if (modes[0] == modes[1]) {
        const int n = ens[static_cast<size_t>(modes[0])];
        return spec.printed_variant ? same_pair_printed_reference(strength, n)
                                    : same_pair_reference(strength, n);
    }
    return cross_pair_reference(strength, ens[static_cast<size_t>(modes[0])],
                                ens[static_cast<size_t>(modes[1])]);
}

} // namespace

std::vector<SectorAudit> audit_amplitudes(const std::array<int, 3>& ensembles,
                                          const CouplingParams& params, double strength,
                                          int n_max) {
    params.validate();
    if (!(strength >= 0.0)) throw std::domain_error("interaction strength must be non-negative");
    if (n_max < 1) throw std::domain_error("amplitude audit needs photon truncation >= 1");

    const CompositeSpace space(ensembles, n_max);
    const SparseGenerator gen = build_generator(space, params);
    const StateVector vac = vacuum_state(ensembles, n_max);

    const double t_full = time_for_strength(params, strength);
    const double t_half = time_for_strength(params, strength / 2.0);
    const StateVector full = evolve_exact(space, gen, vac, t_full);
    const StateVector half = evolve_exact(space, gen, vac, t_half);
    const StateVector series = evolve_series(space, gen, vac, t_full, 4);

    const char* names[3] = {"A", "B", "C"};
    std::vector<SectorSpec> sectors;
    for (int x = 0; x < 3; ++x) {
        if (ensembles[static_cast<size_t>(x)] < 1) continue;
        SectorSpec s;
        s.name = std::string("single_") + names[x];
        s.photons = {0, 0, 0};
        s.photons[static_cast<size_t>(x)] = 1;
        s.excitations = s.photons;
        s.claimed_order = 1;
        s.printed_variant = false;
        sectors.push_back(s);
    }
    for (int x = 0; x < 3; ++x)
        for (int y = x + 1; y < 3; ++y) {
            if (ensembles[static_cast<size_t>(x)] < 1 || ensembles[static_cast<size_t>(y)] < 1)
                continue;
            SectorSpec s;
            s.name = std::string("pair_") + names[x] + names[y];
            s.photons = {0, 0, 0};
            s.photons[static_cast<size_t>(x)] = 1;
            s.photons[static_cast<size_t>(y)] = 1;
            s.excitations = s.photons;
            s.claimed_order = 2;
            s.printed_variant = false;
            sectors.push_back(s);
        }
    if (n_max >= 2) {
        for (int x = 0; x < 3; ++x) {
            if (ensembles[static_cast<size_t>(x)] < 2) continue;
            for (bool printed : {true, false}) {
                SectorSpec s;
                s.name = std::string("same_") + names[x] + names[x] + (printed ? "" : "_corrected");
                s.photons = {0, 0, 0};
                s.photons[static_cast<size_t>(x)] = 2;
                s.excitations = s.photons;
                s.claimed_order = 2;
                s.printed_variant = printed;
                sectors.push_back(s);
            }
        }
    }

    std::vector<SectorAudit> audits;
    audits.reserve(sectors.size());
    for (const auto& spec : sectors) {
        const BasisLabel label = sector_label(space, spec);
        SectorAudit row;
        row.sector = spec.name;
        row.photons = spec.photons;
        row.claimed_order = spec.claimed_order;
        row.exact_amplitude = full.amplitude(label);
        row.series_amplitude = series.amplitude(label);
        row.reference = sector_reference(spec, ensembles, strength);
        const double ref_half = sector_reference(spec, ensembles, strength / 2.0);
        const double dev_full = std::abs(row.exact_amplitude - Complex(row.reference));
        const double dev_half = std::abs(half.amplitude(label) - Complex(ref_half));
        row.absolute_deviation = dev_full;
        if (dev_full == 0.0) {
            // exact match (e.g. zero interaction strength)
            row.relative_deviation = 0.0;
            row.convergence_order = static_cast<double>(spec.claimed_order + 1);
            row.status = "confirmed";
            audits.push_back(std::move(row));
            continue;
        }
        row.relative_deviation = std::abs(row.exact_amplitude) > 0.0
                                     ? dev_full / std::abs(row.exact_amplitude)
                                     : 1.0;
        row.convergence_order = dev_half > 0.0 ? std::log2(dev_full / dev_half) : 0.0;
        const bool ok = row.relative_deviation <= 0.25
                        && row.convergence_order >= spec.claimed_order + 0.5;
        if (ok) {
            row.status = "confirmed";
        } else {
            char buf[64];
            const double ratio =
                row.reference != 0.0 ? std::abs(row.exact_amplitude) / std::abs(row.reference) : 0.0;
            std::snprintf(buf, sizeof(buf), "mismatch(ratio=%.6g)", ratio);
            row.status = buf;
        }
        audits.push_back(std::move(row));
    }
    return audits;
}

} // namespace wherald
