#include "wherald/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace wherald {

void Beamsplitter::validate() const {
    if (mode_a < 0 || mode_a > 2 || mode_b < 0 || mode_b > 2)
        throw std::domain_error("beamsplitter mode index out of range [0,2]");
    if (mode_a == mode_b) throw std::domain_error("beamsplitter modes must differ");
    if (std::abs(transmit * transmit + reflect * reflect - 1.0) > 1e-12)
        throw std::domain_error("beamsplitter coefficients must satisfy c^2 + s^2 = 1");
}

Beamsplitter Beamsplitter::from_angle(int mode_a, int mode_b, double angle) {
    Beamsplitter bs{mode_a, mode_b, std::cos(angle), std::sin(angle)};
    bs.validate();
    return bs;
}

namespace {

double binomial(int n, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
    return out;
}

double factorial(int n) {
    double out = 1.0;
    for (int i = 2; i <= n; ++i) out *= i;
    return out;
}

} // namespace

Eigen::MatrixXd beamsplitter_block(const Beamsplitter& bs, int total_photons) {
    bs.validate();
    if (total_photons < 0) throw std::domain_error("photon number must be non-negative");
    const int n = total_photons;
    const double c = bs.transmit;
    const double s = bs.reflect;

    Eigen::MatrixXd block(n + 1, n + 1);
    for (int nb = 0; nb <= n; ++nb) {
        const int na = n - nb;
        // expand (c a+ - s b+)^na (s a+ + c b+)^nb over the b+ degree d
        for (int d = 0; d <= n; ++d) {
            double coeff = 0.0;
            for (int i = std::max(0, d - nb); i <= std::min(na, d); ++i) {
                const int j = d - i;
                coeff += binomial(na, i) * std::pow(-s, i) * std::pow(c, na - i)
                         * binomial(nb, j) * std::pow(c, j) * std::pow(s, nb - j);
            }
            block(d, nb) = coeff
                           * std::sqrt(factorial(n - d) * factorial(d)
                                       / (factorial(na) * factorial(nb)));
        }
    }
    return block;
}

std::vector<Eigen::MatrixXd> bs_unitary(const Beamsplitter& bs, int n_max) {
    bs.validate();
    if (n_max < 0) throw std::domain_error("photon truncation must be non-negative");
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(static_cast<size_t>(2 * n_max + 1));
    for (int n = 0; n <= 2 * n_max; ++n) blocks.push_back(beamsplitter_block(bs, n));
    return blocks;
}

StateVector apply_network(const StateVector& state, const BeamsplitterNetwork& network) {
    for (const auto& bs : network) bs.validate();

    StateVector current = state;
    for (const auto& bs : network) {
        const size_t ma = static_cast<size_t>(bs.mode_a);
        const size_t mb = static_cast<size_t>(bs.mode_b);
        std::vector<Eigen::MatrixXd> blocks; // indexed by total photon number

        StateVector next;
        double leakage = current.leakage();
        for (const auto& [label, amp] : current) {
            const int na = label.photons.counts[ma];
            const int nb = label.photons.counts[mb];
            const int n = na + nb;
            while (static_cast<int>(blocks.size()) <= n)
                blocks.push_back(beamsplitter_block(bs, static_cast<int>(blocks.size())));
            const Eigen::MatrixXd& block = blocks[static_cast<size_t>(n)];
            for (int d = 0; d <= n; ++d) {
                const Complex val = amp * block(d, nb);
                if (std::abs(val) < kAmplitudeDropTolerance) continue;
                if (n - d > label.photons.n_max || d > label.photons.n_max) {
                    leakage += std::norm(val);
                    continue;
                }
                BasisLabel out = label;
                out.photons.counts[ma] = n - d;
                out.photons.counts[mb] = d;
                next.add(out, val);
            }
        }
        next.set_leakage(leakage);
        next.prune();
        current = std::move(next);
    }
    return current;
}

Eigen::Matrix3d single_photon_matrix(const BeamsplitterNetwork& network) {
    Eigen::Matrix3d total = Eigen::Matrix3d::Identity();
    for (const auto& bs : network) {
        bs.validate();
        Eigen::Matrix3d step = Eigen::Matrix3d::Identity();
        step(bs.mode_a, bs.mode_a) = bs.transmit;
        step(bs.mode_a, bs.mode_b) = bs.reflect;
        step(bs.mode_b, bs.mode_a) = -bs.reflect;
        step(bs.mode_b, bs.mode_b) = bs.transmit;
        total = step * total;
    }
    return total;
}

BeamsplitterNetwork standard_network(int second_input_mode) {
    if (second_input_mode != 0 && second_input_mode != 1)
        throw std::domain_error("second splitter can take output mode 0 or 1 of the first");
    const double r2 = std::sqrt(0.5);
    return {Beamsplitter{0, 1, r2, -r2},
            Beamsplitter{second_input_mode, 2, std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0)}};
}

BeamsplitterNetwork balanced_network() {
    const double r2 = std::sqrt(0.5);
    return {Beamsplitter{0, 1, r2, r2}, Beamsplitter{1, 2, r2, r2}};
}

} // namespace wherald
