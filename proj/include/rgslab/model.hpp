#pragma once
// Parameter sets and right-hand sides of the four-species reversible system,
// the two-species irreversible system with feed, the reduced linear system
// and the driven heat equation for the third species.

#include <utility>

#include "rgslab/grid.hpp"

namespace rgs {

/// Diffusivities and reaction rates of the reversible system.
struct Params {
    double d1 = 1e-2, d2 = 1e-2, d3 = 1e-2, d4 = 1e-2;
    double k1 = 1.0, k2 = 1.0, k3 = 1.0, k4 = 1.0;
    void validate() const; // all eight strictly positive
};

/// Parameters of the irreversible two-species system; a is the feed field.
struct GSParams {
    double d1 = 1e-2, d2 = 1e-2;
    double k1 = 1.0;
    ScalarField a;
    void validate() const;
};

/// Cellwise reaction rates of the reversible system.
///
/// The three exchange channels
///   cubic = u2^2 (u1 - k2 u2),   ch23 = u2 - k3 u3,   ch14 = k1 u1 - k4 u4
/// are each computed once per cell and reused with opposite signs:
///   r1 = -cubic - ch14,  r2 = cubic - ch23,  r3 = ch23,  r4 = ch14.
/// Every channel therefore cancels exactly from the total reaction mass.
struct ReactionVector {
    std::array<std::vector<double>, 4> r;
    std::vector<double> cubic, ch23, ch14;
};

/// Pointwise reaction rates; shared by the field evaluation and the
/// homogeneous ODE paths.
std::array<double, 4> reaction_rgs_point(const Params& p,
                                         const std::array<double, 4>& u);

ReactionVector reaction_rgs(const Params& p, const State& s);

/// d_i lap(u_i) + r_i per species.
std::array<ScalarField, 4> rhs_rgs(const Params& p, const State& s);

/// Reaction part of the irreversible system: (-u1 u2^2 - k1 u1 + a, u1 u2^2 - u2).
std::pair<ScalarField, ScalarField> reaction_gs(const GSParams& p,
                                                const ScalarField& u1,
                                                const ScalarField& u2);

std::pair<ScalarField, ScalarField> rhs_gs(const GSParams& p,
                                           const ScalarField& u1,
                                           const ScalarField& u2);

/// (d1 lap u1 - k1 u1 + k4 u4, d4 lap u4 + k1 u1 - k4 u4).
std::pair<ScalarField, ScalarField> rhs_reduced_linear(const Params& p,
                                                       const ScalarField& u1,
                                                       const ScalarField& u4);

/// d3 lap u3 + u2.
ScalarField rhs_limit_u3(double d3, const ScalarField& u3, const ScalarField& u2);

} // namespace rgs
