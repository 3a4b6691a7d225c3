#pragma once
// Named initial conditions and the two flagship experiments: long-term
// classification of trajectories and the small-parameter comparison against
// the irreversible two-species system.

#include <cstdint>
#include <string>

#include "rgslab/solver.hpp"

namespace rgs {

struct ExperimentConfig {
    Params params;
    double rho = 1.0;
    int dim = 1;
    double extent_x = 1.0, extent_y = 1.0;
    int cells_x = 128, cells_y = 3;
    std::string ic = "generic";
    std::uint64_t seed = 2024;
    SolverConfig solver;

    // eps-limit experiment
    std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};
    double horizon = 20.0; // comparison horizon T
    double p_norm = 1.5;   // comparison norm for species 1..3, in (1,2)

    std::string outdir;

    Grid make_grid() const {
        return dim == 1 ? Grid::line(extent_x, cells_x)
                        : Grid::rect(extent_x, extent_y, cells_x, cells_y);
    }
};

/// Named presets. "circ" and "b" are the equilibria; "circ-perturbed" adds a
/// zero-mass perturbation of L2 size `amp` to the interior equilibrium;
/// "boundary" draws random positive u1, u4 with u2 = u3 = 0; "generic" draws
/// all four species positive; "low-energy" is a generic draw rescaled until
/// its quadratic energy lies below the boundary equilibrium's; "bump" places
/// localized pulses. All states are normalized to total mass rho.
State make_initial_state(const std::string& name, const Grid& g, const Params& p,
                         double rho, std::uint64_t seed, double amp = 1e-2);

/// Smooth non-negative initial data (u1, u2, u3) plus feed profile a for the
/// two-species comparison. Deterministic given the grid.
struct GsInitialData {
    ScalarField u1, u2, u3, a;
};
GsInitialData make_gs_initial_data(const Grid& g);

struct LongtermRow {
    std::string name;
    double u23_mass0 = 0.0; // integral of u2 + u3 at t = 0
    std::string limit;      // "circ", "b" or "UNRESOLVED"
    double dist_circ = 0.0, dist_b = 0.0;
    double t_steady = 0.0;
    double min_e2_slope = 0.0;
};
struct LongtermReport {
    std::vector<LongtermRow> rows;
    void write_csv(const std::string& path) const;
};

/// Runs `n_ics` seeded initial conditions to steady state and classifies each
/// limit by the nearest equilibrium. Non-convergence is reported as
/// UNRESOLVED, not an error.
LongtermReport run_longterm(const ExperimentConfig& cfg, int n_ics = 20);

struct EpsRow {
    double eps = 0.0;
    bool ok = false;         // false when the run went unstable
    double err1 = 0.0, err2 = 0.0, err3 = 0.0; // sup-in-time p-norm errors
    double err4 = 0.0;                          // sup-in-time ||eps u4 - a||_2
    double err4_over_sqrt_eps = 0.0;
};
struct EpsLimitReport {
    std::vector<EpsRow> rows;
    double slope1 = 0.0, slope2 = 0.0, slope3 = 0.0, slope4 = 0.0; // log-log fits
    void write_csv(const std::string& path) const;
};

/// For each eps, runs the reversible system with k2 = k3 = k4 = d4 = eps and
/// fourth species seeded at a/eps, against one shared reference run of the
/// irreversible system (and the driven heat equation for species 3) on the
/// same grid and steps. The reference is computed once and reused.
EpsLimitReport run_eps_limit(const ExperimentConfig& cfg);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace rgs
