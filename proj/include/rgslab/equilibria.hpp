#pragma once
// Closed-form spatially homogeneous equilibria of the reversible system and a
// brute-force oracle that re-derives them from the steady-state equations.

#include <utility>
#include <vector>

#include "rgslab/model.hpp"

namespace rgs {

/// The interior (detailed-balance) equilibrium e_circ and the boundary
/// equilibrium e_b (zero second and third components), both scaled to carry
/// total mass rho over a domain of the given volume.
struct EquilibriumPair {
    std::array<double, 4> e_circ{};
    std::array<double, 4> e_b{};
    double K0 = 0.0; // k1 k2 k3 + k2 k3 k4 + k3 k4 + k4
    double rho = 0.0;
    double volume = 0.0;

    State state_circ(const Grid& g) const { return State::constant(g, e_circ); }
    State state_b(const Grid& g) const { return State::constant(g, e_b); }
};

EquilibriumPair compute_equilibria(const Params& p, double rho, double volume);

/// Quadratic energies (E2 of interior, E2 of boundary) from the closed forms
///   rho^2/|Omega| * k2 k3 k4 / K0   and   rho^2/|Omega| * k4/(k1+k4).
/// The first is strictly smaller for every admissible parameter set.
std::pair<double, double> equilibrium_energy_E2(const EquilibriumPair& pair,
                                                const Params& p);

/// Solves the homogeneous steady-state system by case split (u2 = 0 versus
/// u1 = k2 u2) and returns all non-negative solutions. Independent of
/// compute_equilibria; always returns exactly two vectors.
std::vector<std::array<double, 4>> homogeneous_steady_oracle(const Params& p,
                                                             double rho,
                                                             double volume);

} // namespace rgs
