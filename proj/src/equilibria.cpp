#include "rgslab/equilibria.hpp"

#include <stdexcept>

namespace rgs {

EquilibriumPair compute_equilibria(const Params& p, double rho, double volume) {
    p.validate();
    if (!(rho > 0.0) || !(volume > 0.0))
        throw std::invalid_argument("compute_equilibria: rho and volume must be positive");
    EquilibriumPair eq;
    eq.rho = rho;
    eq.volume = volume;
    eq.K0 = p.k1 * p.k2 * p.k3 + p.k2 * p.k3 * p.k4 + p.k3 * p.k4 + p.k4;
    const double s = rho / volume;
    const double sc = s / eq.K0;
    eq.e_circ = {sc * (p.k2 * p.k3 * p.k4), sc * (p.k3 * p.k4), sc * p.k4,
                 sc * (p.k1 * p.k2 * p.k3)};
    const double sb = s / (p.k1 + p.k4);
    eq.e_b = {sb * p.k4, 0.0, 0.0, sb * p.k1};
    return eq;
}

std::pair<double, double> equilibrium_energy_E2(const EquilibriumPair& pair,
                                                const Params& p) {
    const double scale = pair.rho * pair.rho / pair.volume;
    const double e_circ = scale * p.k2 * p.k3 * p.k4 / pair.K0;
    const double e_b = scale * p.k4 / (p.k1 + p.k4);
    return {e_circ, e_b};
}

std::vector<std::array<double, 4>> homogeneous_steady_oracle(const Params& p,
                                                             double rho,
                                                             double volume) {
    p.validate();
    if (!(rho > 0.0) || !(volume > 0.0))
        throw std::invalid_argument("homogeneous_steady_oracle: rho, volume > 0 required");
    const double target = rho / volume;
    std::vector<std::array<double, 4>> sols;

    // Steady states satisfy u4 = (k1/k4) u1, u3 = u2/k3, u2^2 (u1 - k2 u2) = 0,
    // with (k1+k4)/k4 * u1 + (1+k3)/k3 * u2 = rho/|Omega|.
    // Case u2 = 0: the u1/u4 pair carries all the mass.
    {
        const double u1 = target * p.k4 / (p.k1 + p.k4);
        const double u4 = p.k1 / p.k4 * u1;
        sols.push_back({u1, 0.0, 0.0, u4});
    }
    // Case u1 = k2 u2: substitute into the mass relation and solve for u2.
    {
        const double denom = p.k2 * (p.k1 + p.k4) / p.k4 + (1.0 + p.k3) / p.k3;
        const double u2 = target / denom;
        const double u1 = p.k2 * u2;
        const double u3 = u2 / p.k3;
        const double u4 = p.k1 / p.k4 * u1;
        sols.push_back({u1, u2, u3, u4});
    }

    std::vector<std::array<double, 4>> nonneg;
    for (const auto& v : sols) {
        bool ok = true;
        for (double c : v)
            if (c < 0.0) ok = false;
        if (ok) nonneg.push_back(v);
    }
    return nonneg;
}

} // namespace rgs
