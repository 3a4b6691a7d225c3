#pragma once
// Family of decreasing functionals for the reversible system: a convex
// profile phi applied to rescaled species, with dissipation D and reaction
// production R, satisfying dE/dt + D + R = 0 along trajectories.

#include <vector>

#include "rgslab/model.hpp"

namespace rgs {

enum class PhiKind { power, entropy, clip_above, clip_below };

/// Convex non-negative profile. Four families:
///   power(p), p >= 2:   phi(r) = |r|^p
///   entropy:            phi(r) = r ln r - r + 1 on r >= 0 (phi(0) = 1)
///   clip_above(M):      phi(r) = max(r - M, 0)
///   clip_below(M):      phi(r) = max(-r - M, 0)
struct PhiProfile {
    PhiKind kind = PhiKind::power;
    double p = 2.0;
    double M = 0.0;

    static PhiProfile power(double p);
    static PhiProfile entropy();
    static PhiProfile clip_above(double M);
    static PhiProfile clip_below(double M);

    double phi(double r) const;
    double dphi(double r) const;
    double ddphi(double r) const;

    /// Exact face average of phi'' over [a, b]: (phi'(b) - phi'(a))/(b - a),
    /// with the pointwise value as coincident limit. For the clipped profiles
    /// this is the averaged indicator of the active set; for the entropy it
    /// is the reciprocal logarithmic mean. Non-negative by convexity.
    double ddphi_face(double a, double b) const;

    bool needs_nonnegative() const { return kind == PhiKind::entropy; }
};

struct EnergyBreakdown {
    double E = 0.0, D = 0.0, R = 0.0, t = 0.0;
};

/// Quadrature of phi(u1) + phi(k2 u2)/k2 + phi(k2 k3 u3)/(k2 k3)
/// + (k1/k4) phi(k4 u4 / k1). Entropy profile rejects negative cells.
double energy(const PhiProfile& phi, const Params& p, const State& s);

/// Gradient dissipation with weights d1, d2 k2, d3 k2 k3, d4 k4/k1 on the
/// rescaled species; face-centered gradients. Non-negative.
double dissipation(const PhiProfile& phi, const Params& p, const State& s);

/// Sum of the three paired-difference reaction terms. Non-negative.
double reaction_production(const PhiProfile& phi, const Params& p, const State& s);

EnergyBreakdown energy_breakdown(const PhiProfile& phi, const Params& p,
                                 const State& s);

/// Per-step residual (E_{n+1} - E_n)/dt + (D + R)(midpoint state) along a
/// trajectory sampled at uniform intervals. First-order consistent in dt.
std::vector<double> energy_identity_residuals(const PhiProfile& phi,
                                              const Params& p,
                                              const std::vector<State>& traj);

/// max{ ||u1||_inf, k2 ||u2||_inf, k2 k3 ||u3||_inf, (k4/k1) ||u4||_inf }.
/// Non-increasing along trajectories once evaluated at a positive time.
double scaled_sup_max(const Params& p, const State& s);

} // namespace rgs
