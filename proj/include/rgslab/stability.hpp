#pragma once
// Discrete linearized operators at the two equilibria, their spectra and
// kernels on the zero-mass subspace, the weighted-form identity, the q
// projection, the quadratic remainder N, and the reduced dynamics at the
// boundary equilibrium.

#include <complex>

#include <Eigen/Dense>

#include "rgslab/equilibria.hpp"

namespace rgs {

enum class EquilibriumKind { circ, b };

/// 4x4 reaction Jacobian at the chosen homogeneous equilibrium. Column sums
/// vanish, so the zero-mass hyperplane is invariant.
Eigen::Matrix4d reaction_jacobian(const Params& p, double rho, double volume,
                                  EquilibriumKind which);

/// Dense discrete linearization: per-species diffusion blocks plus the
/// constant-coefficient reaction Jacobian. Layout is species-major
/// (index = species * n_cells + cell).
struct LinearizedOperator {
    EquilibriumKind which = EquilibriumKind::circ;
    Params params;
    double rho = 0.0;
    Grid grid;
    double e2 = 0.0; // second equilibrium component entering the coupling
    Eigen::MatrixXd matrix;
};

/// Throws std::invalid_argument when the grid exceeds the dense-eigensolve
/// budget; reduce the resolution in that case.
LinearizedOperator assemble_linearization(const Params& p, double rho,
                                          EquilibriumKind which, const Grid& grid);

/// Stencil application of the linearization to a four-field perturbation.
/// Independent of the dense assembly.
std::array<ScalarField, 4> apply_linearization(const Params& p, double rho,
                                               double volume, EquilibriumKind which,
                                               const std::array<ScalarField, 4>& v);

/// Both sides of the weighted-form identity: lhs integrates (L v) . V(v) with
/// V(v) = (v1, k2 v2, k2 k3 v3, (k4/k1) v4); rhs assembles the negative sum of
/// the four gradient terms and the three pairing terms independently.
std::pair<double, double> weighted_form_check(const LinearizedOperator& opr,
                                              const std::array<ScalarField, 4>& v);

struct SpectrumReport {
    EquilibriumKind which = EquilibriumKind::circ;
    std::vector<std::complex<double>> eigenvalues; // sorted by real part, descending
    double gap = 0.0;        // -largest real part below the kernel tolerance
    int kernel_dim = 0;      // eigenvalues with |lambda| <= 1e-9
    std::array<double, 4> kernel_vector{}; // homogeneous direction, unit norm
};

/// Full eigendecomposition restricted to the zero-mass subspace. The operator
/// is self-adjoint in the V-weighted inner product, so the restriction is
/// eigensolved in symmetrized coordinates and the spectrum is real by
/// construction.
SpectrumReport spectrum(const LinearizedOperator& opr);

/// Spectrum of the reaction Jacobian alone restricted to zero-sum constants
/// (the homogeneous modes; equivalently a single-cell discretization).
/// Returns the three eigenvalues sorted descending.
std::array<double, 3> homogeneous_spectrum(const Params& p, double rho,
                                           double volume, EquilibriumKind which);

/// Constants of the reduced dynamics at the boundary equilibrium.
struct CenterManifoldConstants {
    double K1 = 0.0; // 1/(|Omega| (k1+k4))
    double K2 = 0.0; // 1/(2 |Omega| (k1+k4)(1+k3))
    double K4 = 0.0; // rho K1 K2 k3^2 k4 (k1+k4)^2 |Omega|
    std::array<double, 4> k_vec{}; // kernel direction, q(k_vec) = 1
};
CenterManifoldConstants center_constants(const Params& p, double rho, double volume);

/// q(w) = K2 * integral of (w1 + w4 - w2 - w3).
double q_functional(const Params& p, const State& w);
double q_homogeneous(const Params& p, double volume, const std::array<double, 4>& w);

/// Quadratic remainder of the flow at the boundary equilibrium:
/// N(w) = w2^2 (k2 w2 - rho K1 k4 - w1, -(k2 w2 - rho K1 k4 - w1), 0, 0).
/// The first two components are exact negations, so the cellwise sum is zero.
std::array<ScalarField, 4> nonlinearity_N(const Params& p, double rho,
                                          const State& w);

/// Ratios q(N(xi k))/xi^2 for the given xi values; converges to -2 K4 as
/// xi -> 0 and stays within [-3 K4, -K4] for small xi.
std::vector<double> center_coefficient_check(const Params& p, double rho,
                                             double volume,
                                             const std::vector<double>& xis);

/// Reaction-only trajectory from e_b + s0 k_vec (spatially homogeneous data
/// stays homogeneous), reported against the algebraic decay envelopes
/// s0/(1 + 3 K4 s0 t) <= s(t) <= s0/(1 + K4 s0 t).
struct EnvelopePoint {
    double t, s, lower, upper;
};
std::vector<EnvelopePoint> boundary_decay_envelope(const Params& p, double rho,
                                                   double volume, double s0,
                                                   double t_end,
                                                   double out_every = 0.5);

} // namespace rgs
