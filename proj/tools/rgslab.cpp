// Command-line front end: simulate the four systems, print equilibria and
// spectra, audit energies along stored trajectories, and run the long-term
// classification and eps-limit experiments.
//
// Options read the configuration file first (--config, key = value lines);
// flags given explicitly on the command line override file values.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "rgslab/config.hpp"
#include "rgslab/experiments.hpp"
#include "rgslab/lyapunov.hpp"
#include "rgslab/stability.hpp"

namespace fs = std::filesystem;
using namespace rgs;

namespace {

const std::set<std::string> kConfigKeys = {
    "k1", "k2", "k3", "k4", "d1", "d2", "d3", "d4", "rho",
    "dim", "extent_x", "extent_y", "cells_x", "cells_y",
    "dt", "t_end", "output_every", "steady_tol", "scheme",
    "ic", "seed", "eps_list", "horizon", "p_norm", "outdir"};

void apply_config_file(const std::string& path, ExperimentConfig& e) {
    const auto kv = parse_config_file(path);
    reject_unknown_keys(kv, kConfigKeys, path);
    e.params.k1 = config_double(kv, "k1", e.params.k1);
    e.params.k2 = config_double(kv, "k2", e.params.k2);
    e.params.k3 = config_double(kv, "k3", e.params.k3);
    e.params.k4 = config_double(kv, "k4", e.params.k4);
    e.params.d1 = config_double(kv, "d1", e.params.d1);
    e.params.d2 = config_double(kv, "d2", e.params.d2);
    e.params.d3 = config_double(kv, "d3", e.params.d3);
    e.params.d4 = config_double(kv, "d4", e.params.d4);
    e.rho = config_double(kv, "rho", e.rho);
    e.dim = config_int(kv, "dim", e.dim);
    e.extent_x = config_double(kv, "extent_x", e.extent_x);
    e.extent_y = config_double(kv, "extent_y", e.extent_y);
    e.cells_x = config_int(kv, "cells_x", e.cells_x);
    e.cells_y = config_int(kv, "cells_y", e.cells_y);
    e.solver.dt = config_double(kv, "dt", e.solver.dt);
    e.solver.t_end = config_double(kv, "t_end", e.solver.t_end);
    e.solver.output_every = config_double(kv, "output_every", e.solver.output_every);
    e.solver.steady_tol = config_double(kv, "steady_tol", e.solver.steady_tol);
    const std::string scheme = config_string(kv, "scheme", "imex_euler");
    if (scheme == "imex_euler")
        e.solver.scheme = Scheme::imex_euler;
    else if (scheme == "strang")
        e.solver.scheme = Scheme::strang;
    else
        throw ConfigError("malformed value for 'scheme': " + scheme);
    e.ic = config_string(kv, "ic", e.ic);
    e.seed = static_cast<std::uint64_t>(
        config_int(kv, "seed", static_cast<int>(e.seed)));
    e.horizon = config_double(kv, "horizon", e.horizon);
    e.p_norm = config_double(kv, "p_norm", e.p_norm);
    e.outdir = config_string(kv, "outdir", e.outdir);
    const std::string eps = config_string(kv, "eps_list", "");
    if (!eps.empty()) {
        e.eps_list.clear();
        std::string tmp = eps;
        std::replace(tmp.begin(), tmp.end(), ',', ' ');
        std::istringstream ss(tmp);
        double v;
        while (ss >> v) e.eps_list.push_back(v);
        if (e.eps_list.empty())
            throw ConfigError("malformed value for 'eps_list': " + eps);
    }
}

void add_param_flags(CLI::App* app, ExperimentConfig& cfg) {
    app->add_option("--k1", cfg.params.k1);
    app->add_option("--k2", cfg.params.k2);
    app->add_option("--k3", cfg.params.k3);
    app->add_option("--k4", cfg.params.k4);
    app->add_option("--d1", cfg.params.d1);
    app->add_option("--d2", cfg.params.d2);
    app->add_option("--d3", cfg.params.d3);
    app->add_option("--d4", cfg.params.d4);
    app->add_option("--rho", cfg.rho);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return dir.empty() ? name : (fs::path(dir) / name).string();
}

PhiProfile parse_profile(const std::string& profile) {
    if (profile == "power2") return PhiProfile::power(2);
    if (profile == "power3") return PhiProfile::power(3);
    if (profile == "entropy") return PhiProfile::entropy();
    if (profile.rfind("clip_above:", 0) == 0)
        return PhiProfile::clip_above(std::stod(profile.substr(11)));
    if (profile.rfind("clip_below:", 0) == 0)
        return PhiProfile::clip_below(std::stod(profile.substr(11)));
    throw ConfigError("unknown profile: " + profile);
}

} // namespace

int main(int argc, char** argv) {
    ExperimentConfig cfg;

    // Load the configuration file (if any) before the flag parse, so flags
    // given explicitly win.
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") {
                apply_config_file(argv[i + 1], cfg);
                break;
            }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"numerical laboratory for the reversible Gray-Scott system"};
    app.require_subcommand(1);
    std::string config_path; // consumed above; registered so CLI11 accepts it

    auto* sim = app.add_subcommand("simulate", "integrate one system and write a trajectory");
    std::string system = "rgs";
    sim->add_option("--config", config_path);
    add_param_flags(sim, cfg);
    sim->add_option("--system", system, "rgs | gs | reduced | limit-u3");
    sim->add_option("--ic", cfg.ic, "initial-condition preset");
    sim->add_option("--seed", cfg.seed);
    sim->add_option("--cells", cfg.cells_x);
    sim->add_option("--extent", cfg.extent_x);
    sim->add_option("--dt", cfg.solver.dt);
    sim->add_option("--t-end", cfg.solver.t_end);
    sim->add_option("--output-every", cfg.solver.output_every);
    sim->add_option("--steady-tol", cfg.solver.steady_tol);
    std::string scheme_flag;
    sim->add_option("--scheme", scheme_flag, "imex_euler | strang");
    sim->add_option("--outdir", cfg.outdir);
    bool write_snaps = false;
    sim->add_flag("--snapshots", write_snaps, "write per-output snapshot files");

    auto* eqc = app.add_subcommand("equilibria", "print both equilibria and their energies as CSV");
    add_param_flags(eqc, cfg);
    double volume_flag = 1.0;
    eqc->add_option("--volume", volume_flag);
    eqc->add_option("--config", config_path);

    auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of a discrete linearization");
    add_param_flags(spectrum_cmd, cfg);
    std::string which_flag = "circ";
    spectrum_cmd->add_option("--which", which_flag, "circ | b");
    spectrum_cmd->add_option("--cells", cfg.cells_x);
    spectrum_cmd->add_option("--extent", cfg.extent_x);
    spectrum_cmd->add_option("--outdir", cfg.outdir);
    spectrum_cmd->add_option("--config", config_path);

    auto* center = app.add_subcommand("center", "boundary-equilibrium decay against the algebraic envelopes");
    add_param_flags(center, cfg);
    std::vector<double> s0_list{0.01};
    double center_t_end = 500.0;
    center->add_option("--s0", s0_list, "initial center coordinates");
    center->add_option("--t-end", center_t_end);
    center->add_option("--volume", volume_flag);
    center->add_option("--outdir", cfg.outdir);
    center->add_option("--config", config_path);

    auto* energy_cmd = app.add_subcommand("energy", "energy audit of a snapshot directory");
    std::string snapdir;
    std::string profile = "power2";
    energy_cmd->add_option("--snapshots", snapdir, "directory of snapshot files")
        ->required();
    energy_cmd->add_option("--profile", profile,
                           "power2 | power3 | entropy | clip_above:M | clip_below:M");
    energy_cmd->add_option("--outdir", cfg.outdir);

    auto* epsc = app.add_subcommand("eps-limit", "comparison against the irreversible system");
    add_param_flags(epsc, cfg);
    epsc->add_option("--config", config_path);
    epsc->add_option("--eps", cfg.eps_list, "strictly decreasing eps values");
    epsc->add_option("--horizon", cfg.horizon);
    epsc->add_option("--p-norm", cfg.p_norm);
    epsc->add_option("--cells", cfg.cells_x);
    epsc->add_option("--extent", cfg.extent_x);
    epsc->add_option("--dt", cfg.solver.dt);
    epsc->add_option("--output-every", cfg.solver.output_every);
    epsc->add_option("--seed", cfg.seed);
    epsc->add_option("--outdir", cfg.outdir);

    auto* longc = app.add_subcommand("longterm", "classify seeded initial conditions by their limit");
    add_param_flags(longc, cfg);
    longc->add_option("--config", config_path);
    int n_ics = 20;
    longc->add_option("--n", n_ics, "number of initial conditions");
    longc->add_option("--seed", cfg.seed);
    longc->add_option("--cells", cfg.cells_x);
    longc->add_option("--extent", cfg.extent_x);
    longc->add_option("--dt", cfg.solver.dt);
    longc->add_option("--t-end", cfg.solver.t_end);
    longc->add_option("--steady-tol", cfg.solver.steady_tol);
    longc->add_option("--outdir", cfg.outdir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!scheme_flag.empty()) {
            if (scheme_flag == "imex_euler")
                cfg.solver.scheme = Scheme::imex_euler;
            else if (scheme_flag == "strang")
                cfg.solver.scheme = Scheme::strang;
            else
                throw ConfigError("malformed value for '--scheme': " + scheme_flag);
        }
        if (!cfg.outdir.empty()) fs::create_directories(cfg.outdir);

        if (app.got_subcommand(eqc)) {
            const EquilibriumPair eq =
                compute_equilibria(cfg.params, cfg.rho, volume_flag);
            const auto [e_circ, e_b] = equilibrium_energy_E2(eq, cfg.params);
            std::cout << "which,u1,u2,u3,u4,E2\n";
            char buf[256];
            std::snprintf(buf, sizeof buf, "circ,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          eq.e_circ[0], eq.e_circ[1], eq.e_circ[2], eq.e_circ[3],
                          e_circ);
            std::cout << buf;
            std::snprintf(buf, sizeof buf, "b,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          eq.e_b[0], eq.e_b[1], eq.e_b[2], eq.e_b[3], e_b);
            std::cout << buf;
            std::snprintf(buf, sizeof buf, "# K0 = %.17g\n", eq.K0);
            std::cout << buf;
            return 0;
        }

        if (app.got_subcommand(sim)) {
            const Grid g = cfg.make_grid();
            if (system == "rgs") {
                const State init =
                    make_initial_state(cfg.ic, g, cfg.params, cfg.rho, cfg.seed);
                SolverConfig sc = cfg.solver;
                sc.keep_snapshots = write_snaps;
                const TrajectoryLog log = run_rgs(cfg.params, init, sc);
                log.write_csv(join_path(cfg.outdir, "trajectory.csv"));
                if (write_snaps)
                    for (std::size_t n = 0; n < log.snapshots.size(); ++n) {
                        char name[64];
                        std::snprintf(name, sizeof name, "snap_%06zu.dat", n);
                        write_snapshot(join_path(cfg.outdir, name),
                                       log.snapshots[n], cfg.params, cfg.rho);
                    }
                std::cout << "steady=" << (log.reached_steady ? 1 : 0)
                          << " t_final=" << log.t_final << "\n";
                return 0;
            }
            if (system == "limit-u3") {
                // third species driven by the preset's frozen second species
                const GsInitialData d = make_gs_initial_data(g);
                ScalarField u3 = d.u3;
                std::ofstream out(join_path(cfg.outdir, "trajectory_u3.csv"));
                out << "t,l2_u3,mass_u3\n";
                char buf[120];
                double t = 0.0, next_out = 0.0;
                while (t < cfg.solver.t_end - 1e-12) {
                    if (t >= next_out - 1e-9 * cfg.solver.dt) {
                        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t,
                                      norm_p(u3, 2.0), integrate(u3));
                        out << buf;
                        next_out += cfg.solver.output_every;
                    }
                    u3 = step_limit_u3(cfg.params.d3, u3, d.u2, cfg.solver.dt);
                    t += cfg.solver.dt;
                }
                std::cout << "t_final=" << t << "\n";
                return 0;
            }
            if (system == "gs") {
                const GsInitialData d = make_gs_initial_data(g);
                GSParams gp;
                gp.d1 = cfg.params.d1;
                gp.d2 = cfg.params.d2;
                gp.k1 = cfg.params.k1;
                gp.a = d.a;
                const GsTrajectory traj =
                    run_gs_with_u3(gp, cfg.params.d3, d.u1, d.u2, d.u3, cfg.solver);
                std::ofstream out(join_path(cfg.outdir, "trajectory_gs.csv"));
                out << "t,l2_u1,l2_u2,l2_u3\n";
                char buf[160];
                for (std::size_t n = 0; n < traj.times.size(); ++n) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n",
                                  traj.times[n], norm_p(traj.snapshots[n][0], 2.0),
                                  norm_p(traj.snapshots[n][1], 2.0),
                                  norm_p(traj.snapshots[n][2], 2.0));
                    out << buf;
                }
                std::cout << "t_final=" << traj.times.back() << "\n";
                return 0;
            }
            if (system == "reduced") {
                const State init = make_initial_state("boundary", g, cfg.params,
                                                      cfg.rho, cfg.seed);
                const ReducedLog log =
                    run_reduced(cfg.params, init.u[0], init.u[3], cfg.solver);
                std::ofstream out(join_path(cfg.outdir, "trajectory_reduced.csv"));
                out << "t,weighted_dist2\n";
                char buf[96];
                for (std::size_t n = 0; n < log.times.size(); ++n) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", log.times[n],
                                  log.weighted_dist2[n]);
                    out << buf;
                }
                std::cout << "t_final=" << log.times.back() << "\n";
                return 0;
            }
            throw ConfigError("unknown system: " + system);
        }

        if (app.got_subcommand(spectrum_cmd)) {
            const Grid g = cfg.make_grid();
            EquilibriumKind which;
            if (which_flag == "b" || which_flag == "boundary")
                which = EquilibriumKind::b;
            else if (which_flag == "circ" || which_flag == "interior")
                which = EquilibriumKind::circ;
            else
                throw ConfigError("unknown equilibrium: " + which_flag);
            const LinearizedOperator op =
                assemble_linearization(cfg.params, cfg.rho, which, g);
            const SpectrumReport rep = spectrum(op);
            std::ofstream out(join_path(cfg.outdir, "spectrum.csv"));
            out << "index,real,imag\n";
            char buf[160];
            for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i,
                              rep.eigenvalues[i].real(), rep.eigenvalues[i].imag());
                out << buf;
            }
            std::snprintf(buf, sizeof buf, "# gap = %.17g\n", rep.gap);
            out << buf;
            std::snprintf(buf, sizeof buf, "# kernel_dim = %d\n", rep.kernel_dim);
            out << buf;
            std::snprintf(buf, sizeof buf, "# kernel = %.17g %.17g %.17g %.17g\n",
                          rep.kernel_vector[0], rep.kernel_vector[1],
                          rep.kernel_vector[2], rep.kernel_vector[3]);
            out << buf;
            std::cout << "gap=" << rep.gap << " kernel_dim=" << rep.kernel_dim
                      << "\n";
            return 0;
        }

        if (app.got_subcommand(center)) {
            std::ofstream out(join_path(cfg.outdir, "center.csv"));
            out << "s0,t,s,lower,upper\n";
            char buf[200];
            for (double s0 : s0_list) {
                const auto pts = boundary_decay_envelope(cfg.params, cfg.rho,
                                                         volume_flag, s0,
                                                         center_t_end);
                for (const auto& pt : pts) {
                    std::snprintf(buf, sizeof buf,
                                  "%.17g,%.17g,%.17g,%.17g,%.17g\n", s0, pt.t,
                                  pt.s, pt.lower, pt.upper);
                    out << buf;
                }
            }
            return 0;
        }

        if (app.got_subcommand(energy_cmd)) {
            const PhiProfile phi = parse_profile(profile);
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(snapdir))
                if (entry.path().extension() == ".dat") files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            if (files.empty()) throw ConfigError("no .dat snapshots in " + snapdir);
            std::vector<State> traj;
            Params p{};
            for (const auto& f : files) {
                Snapshot snap = read_snapshot(f.string());
                p = snap.params;
                traj.push_back(std::move(snap.state));
            }
            std::sort(traj.begin(), traj.end(),
                      [](const State& a, const State& b) { return a.t < b.t; });
            const auto residuals = energy_identity_residuals(phi, p, traj);
            std::ofstream out(join_path(cfg.outdir, "energy.csv"));
            out << "t,E,D,R,residual\n";
            char buf[220];
            for (std::size_t n = 0; n < traj.size(); ++n) {
                const EnergyBreakdown eb = energy_breakdown(phi, p, traj[n]);
                const double res = n + 1 < traj.size() ? residuals[n] : 0.0;
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              eb.t, eb.E, eb.D, eb.R, res);
                out << buf;
            }
            return 0;
        }

        if (app.got_subcommand(epsc)) {
            const EpsLimitReport rep = run_eps_limit(cfg);
            rep.write_csv(join_path(cfg.outdir, "eps_limit.csv"));
            for (const auto& r : rep.rows)
                std::printf("eps=%g ok=%d err=(%.3e, %.3e, %.3e, %.3e) "
                            "err4/sqrt(eps)=%.3e\n",
                            r.eps, r.ok ? 1 : 0, r.err1, r.err2, r.err3, r.err4,
                            r.err4_over_sqrt_eps);
            std::printf("fitted slopes: %.3f %.3f %.3f %.3f\n", rep.slope1,
                        rep.slope2, rep.slope3, rep.slope4);
            return 0;
        }

        if (app.got_subcommand(longc)) {
            const LongtermReport rep = run_longterm(cfg, n_ics);
            rep.write_csv(join_path(cfg.outdir, "longterm.csv"));
            for (const auto& r : rep.rows)
                std::printf("%s: limit=%s dist=(%.3e, %.3e) t=%.2f\n",
                            r.name.c_str(), r.limit.c_str(), r.dist_circ,
                            r.dist_b, r.t_steady);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
