#pragma once
// Time integration of the four systems with exact mass accounting,
// positivity monitoring and steady-state detection.
//
// The default scheme treats the full reaction explicitly (the exchange
// channels cancel exactly from the mass budget) and the diffusion implicitly
// with a conservative backward-Euler solve, so the total mass of a reversible
// run is conserved to round-off. The strang scheme propagates the diffusion
// exactly in time through the cosine eigenbasis of the discrete Laplacian and
// takes a midpoint step for the reaction.

#include <stdexcept>
#include <string>

#include "rgslab/equilibria.hpp"
#include "rgslab/model.hpp"

namespace rgs {

enum class Scheme { imex_euler, strang };

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 20.0;
    Scheme scheme = Scheme::imex_euler;
    double output_every = 0.1;
    double steady_tol = 1e-9; // L2 update rate threshold
    double safety = 0.5;      // dt multiplier on instability detection
    int max_halvings = 8;     // retry budget
    bool keep_snapshots = true;
    void validate() const;
};

/// Raised when a step produces a non-finite value and the retry budget is
/// exhausted; carries the offending time and step size.
struct InstabilityError : std::runtime_error {
    double t, dt;
    InstabilityError(double t_, double dt_)
        : std::runtime_error("integration unstable at t = " + std::to_string(t_) +
                             " with dt = " + std::to_string(dt_)),
          t(t_), dt(dt_) {}
};

/// Per-output diagnostics of a run. CSV column order:
/// t, mass, l2_u1..l2_u4, linf_u1..linf_u4, E2, dist_circ, dist_b.
struct TrajectoryLog {
    std::vector<double> times;
    std::vector<double> mass_col;
    std::array<std::vector<double>, 4> l2;
    std::array<std::vector<double>, 4> linf;
    std::vector<double> e2;
    std::vector<double> dist_circ, dist_b;
    std::vector<State> snapshots; // kept when cfg.keep_snapshots
    bool reached_steady = false;
    double t_final = 0.0;
    double dt_final = 0.0;

    std::size_t size() const { return times.size(); }
    void write_csv(const std::string& path) const;
};

/// One IMEX step of the reversible system: explicit channel-paired reaction,
/// conservative implicit diffusion.
State step_rgs(const Params& p, const State& s, double dt);

std::pair<ScalarField, ScalarField> step_gs(const GSParams& p,
                                            const ScalarField& u1,
                                            const ScalarField& u2, double dt);

std::pair<ScalarField, ScalarField> step_reduced(const Params& p,
                                                 const ScalarField& u1,
                                                 const ScalarField& u4, double dt);

ScalarField step_limit_u3(double d3, const ScalarField& u3,
                          const ScalarField& u2, double dt);

TrajectoryLog run_rgs(const Params& p, const State& init, const SolverConfig& cfg);

/// Reference integration of the irreversible system together with the driven
/// heat equation for the third species (one-way coupled through u2).
struct GsTrajectory {
    std::vector<double> times;
    std::vector<std::array<ScalarField, 3>> snapshots; // u1, u2, u3
};
GsTrajectory run_gs_with_u3(const GSParams& p, double d3, const ScalarField& u1_0,
                            const ScalarField& u2_0, const ScalarField& u3_0,
                            const SolverConfig& cfg);

/// Reduced linear system run; logs times and the weighted distance
/// k1 ||u1 - e1||_2^2 + k4 ||u4 - e4||_2^2 to the boundary equilibrium.
struct ReducedLog {
    std::vector<double> times;
    std::vector<double> weighted_dist2;
    std::vector<ScalarField> u1_snapshots, u4_snapshots;
};
ReducedLog run_reduced(const Params& p, const ScalarField& u1_0,
                       const ScalarField& u4_0, const SolverConfig& cfg);

/// L2 distances of a state to the interior and boundary equilibria.
std::pair<double, double> distance_to_equilibria(const State& s,
                                                 const EquilibriumPair& pair);

/// Conservative backward-Euler diffusion update (exposed for tests): solves
/// (I - dt d lap) v = f per axis and returns f + dt d lap(v).
ScalarField diffuse_backward_euler(const ScalarField& f, double d, double dt);

// Snapshot files: plain text, self-describing header (grid, time, parameters,
// species order) followed by one row of u1 u2 u3 u4 per cell.
void write_snapshot(const std::string& path, const State& s, const Params& p,
                    double rho);
struct Snapshot {
    State state;
    Params params;
    double rho = 0.0;
};
Snapshot read_snapshot(const std::string& path);

} // namespace rgs
