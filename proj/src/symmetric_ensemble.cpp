#include "wherald/symmetric_ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace wherald {

std::string Occupation::str() const {
    return "(" + std::to_string(n0) + "," + std::to_string(n1) + "," + std::to_string(n2) + ")";
}

Occupation ground_occupation(int atoms) {
    if (atoms < 0) throw std::domain_error("ensemble size must be non-negative");
    return Occupation{atoms, 0, 0};
}

CollectiveAction collective_apply(int to, int from, const Occupation& occ) {
    if (to < 0 || to > 2 || from < 0 || from > 2)
        throw std::domain_error("level index out of range [0,2]");
    if (!occ.valid())
        throw std::domain_error("invalid occupation " + occ.str());

    const int n[3] = {occ.n0, occ.n1, occ.n2};
    if (to == from) {
        return {occ, static_cast<double>(n[to])};
    }
    if (n[from] == 0) {
        return {occ, 0.0};
    }
    int m[3] = {n[0], n[1], n[2]};
    m[from] -= 1;
    m[to] += 1;
    const double amp = std::sqrt(static_cast<double>(n[from]) * (n[to] + 1.0));
    return {Occupation{m[0], m[1], m[2]}, amp};
}

long symmetric_dimension(int atoms) {
    if (atoms < 0) throw std::domain_error("ensemble size must be non-negative");
    return static_cast<long>(atoms + 1) * (atoms + 2) / 2;
}

std::vector<Occupation> enumerate_occupations(int atoms) {
    if (atoms < 0) throw std::domain_error("ensemble size must be non-negative");
    std::vector<Occupation> out;
    out.reserve(static_cast<size_t>(symmetric_dimension(atoms)));
    for (int n2 = 0; n2 <= atoms; ++n2)
        for (int n1 = 0; n1 + n2 <= atoms; ++n1)
            out.push_back(Occupation{atoms - n1 - n2, n1, n2});
    return out;
}

double dicke_ladder_coefficient(int excitations, int atoms) {
    if (atoms < 0 || excitations < 0 || excitations > atoms)
        throw std::domain_error("excitation count outside [0, atoms]");
    // m! * sqrt(C(N, m)) via log-gamma to stay finite for large N.
    const double lm = std::lgamma(excitations + 1.0);
    const double lbin = std::lgamma(atoms + 1.0) - lm - std::lgamma(atoms - excitations + 1.0);
    return std::exp(lm + 0.5 * lbin);
}

std::vector<ProductTerm> dicke_product_expansion(int excitations, int atoms) {
    if (atoms < 0 || excitations < 0 || excitations > atoms)
        throw std::domain_error("excitation count outside [0, atoms]");
    const double lbin = std::lgamma(atoms + 1.0) - std::lgamma(excitations + 1.0)
                        - std::lgamma(atoms - excitations + 1.0);
    const double coeff = std::exp(-0.5 * lbin);

    std::vector<ProductTerm> terms;
    std::vector<int> pos(excitations);
    for (int i = 0; i < excitations; ++i) pos[i] = i;
    // iterate combinations in lexicographic order
    while (true) {
        terms.push_back(ProductTerm{pos, coeff});
        if (excitations == 0) break;
        int i = excitations - 1;
        while (i >= 0 && pos[i] == atoms - excitations + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (int j = i + 1; j < excitations; ++j) pos[j] = pos[j - 1] + 1;
    }
    return terms;
}

std::pair<Occupation, double> symmetric_excited_state(int excitations, int atoms) {
    if (atoms < 0 || excitations < 0 || excitations > atoms)
        throw std::domain_error("excitation count outside [0, atoms]");
    return {Occupation{atoms - excitations, excitations, 0}, 1.0};
}

} // namespace wherald
