#include "rgslab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "rgslab/lyapunov.hpp"

namespace rgs {

namespace {

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// base plus a few low-mode cosines with bounded total amplitude, so the field
// is smooth, compatible with the mirror closure, and strictly positive.
ScalarField smooth_positive_field(const Grid& g, double base, double rel_amp,
                                  std::mt19937_64& rng) {
    const double pi = std::numbers::pi;
    ScalarField f(g, base);
    constexpr int kModes = 6;
    double budget = 0.0;
    for (int k = 1; k <= kModes; ++k) budget += 1.0 / k;
    const double amp = rel_amp * base / budget;
    for (int axis = 0; axis < g.dim; ++axis) {
        for (int k = 1; k <= kModes; ++k) {
            const double c = amp * (2.0 * next_uniform(rng) - 1.0) / k;
            const int nx = g.cells[0];
            for (int j = 0; j < g.total_cells(); ++j) {
                const int idx = axis == 0 ? j % nx : j / nx;
                f.values[j] += c * std::cos(k * pi * g.center(idx, axis) /
                                            g.extent[axis]);
            }
        }
    }
    return f;
}

void scale_state_to_mass(State& s, double rho) {
    const double m = mass(s);
    if (!(m > 0.0)) throw std::invalid_argument("initial state has non-positive mass");
    const double f = rho / m;
    for (auto& field : s.u)
        for (double& v : field.values) v *= f;
}

// zero-mass perturbation of prescribed L2 size built from interior modes
State perturb_zero_mass(const State& base, double amp, std::mt19937_64& rng) {
    const Grid& g = base.grid();
    const double pi = std::numbers::pi;
    State out = base;
    State noise = State::constant(g, {0, 0, 0, 0});
    const int nx = g.cells[0];
    for (int i = 0; i < 4; ++i) {
        for (int k = 1; k <= 4; ++k) {
            const double c = (2.0 * next_uniform(rng) - 1.0) / k;
            for (int j = 0; j < g.total_cells(); ++j) {
                const int idx = j % nx;
                noise.u[i].values[j] +=
                    c * std::cos(k * pi * g.center(idx, 0) / g.extent[0]);
            }
        }
        // a homogeneous zero-sum component excites the reaction modes too
        const double h = 2.0 * next_uniform(rng) - 1.0;
        const double sign[4] = {1.0, -1.0, -1.0, 1.0};
        for (int j = 0; j < g.total_cells(); ++j) noise.u[i].values[j] += h * sign[i];
    }
    // project out the total mass and normalize the L2 size
    double total = 0.0;
    for (int i = 0; i < 4; ++i) total += integrate(noise.u[i]);
    const double shift = total / (4.0 * g.volume);
    for (int i = 0; i < 4; ++i)
        for (double& v : noise.u[i].values) v -= shift;
    const double norm = state_norm_l2(noise);
    if (norm > 0.0) {
        const double f = amp / norm;
        for (int i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < noise.u[i].size(); ++j)
                out.u[i].values[j] += f * noise.u[i].values[j];
    }
    return out;
}

} // namespace

State make_initial_state(const std::string& name, const Grid& g, const Params& p,
                         double rho, std::uint64_t seed, double amp) {
    const EquilibriumPair eq = compute_equilibria(p, rho, g.volume);
    std::mt19937_64 rng(seed);
    if (name == "circ") return eq.state_circ(g);
    if (name == "b") return eq.state_b(g);
    if (name == "circ-perturbed") {
        return perturb_zero_mass(eq.state_circ(g), amp, rng);
    }
    if (name == "boundary") {
        State s = State::constant(g, {0, 0, 0, 0});
        s.u[0] = smooth_positive_field(g, 1.0, 0.6, rng);
        s.u[3] = smooth_positive_field(g, 0.7, 0.6, rng);
        scale_state_to_mass(s, rho);
        return s;
    }
    if (name == "generic") {
        State s = State::constant(g, {0, 0, 0, 0});
        const double base[4] = {0.8, 0.6, 0.5, 0.7};
        for (int i = 0; i < 4; ++i)
            s.u[i] = smooth_positive_field(g, base[i], 0.6, rng);
        scale_state_to_mass(s, rho);
        return s;
    }
    if (name == "low-energy") {
        // interpolate a generic draw toward the interior equilibrium until the
        // quadratic energy drops below the boundary equilibrium's
        State s = make_initial_state("generic", g, p, rho, seed + 1);
        const State circ = eq.state_circ(g);
        const double e_b = equilibrium_energy_E2(eq, p).second;
        const PhiProfile phi2 = PhiProfile::power(2);
        double w = 1.0;
        for (int iter = 0; iter < 60 && energy(phi2, p, s) >= e_b; ++iter) {
            w *= 0.8;
            for (int i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < s.u[i].size(); ++j)
                    s.u[i].values[j] = circ.u[i].values[j] +
                                       w * (s.u[i].values[j] - circ.u[i].values[j]);
        }
        return s;
    }
    if (name == "bump") {
        const double pi = std::numbers::pi;
        State s = State::constant(g, {0.4, 0.05, 0.05, 0.3});
        const int nx = g.cells[0];
        for (int j = 0; j < g.total_cells(); ++j) {
            const double x = g.center(j % nx, 0) / g.extent[0];
            const double bump = std::pow(std::cos(pi * (x - 0.5)), 2.0);
            s.u[1].values[j] += 0.5 * bump;
            s.u[0].values[j] += 0.2 * bump;
        }
        scale_state_to_mass(s, rho);
        return s;
    }
    throw std::invalid_argument("unknown initial-condition preset: " + name);
}

GsInitialData make_gs_initial_data(const Grid& g) {
    const double pi = std::numbers::pi;
    GsInitialData d{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
    const int nx = g.cells[0];
    for (int j = 0; j < g.total_cells(); ++j) {
        const double x = g.center(j % nx, 0) / g.extent[0];
        d.u1.values[j] = 0.6;
        d.u2.values[j] = 0.15 * (1.0 + std::cos(2.0 * pi * x));
        d.u3.values[j] = 0.1;
        d.a.values[j] = 0.25 * (1.0 + 0.8 * std::cos(pi * x));
    }
    return d;
}

LongtermReport run_longterm(const ExperimentConfig& cfg, int n_ics) {
    const Grid g = cfg.make_grid();
    LongtermReport report;
    for (int i = 0; i < n_ics; ++i) {
        std::string kind;
        if (i % 5 == 0)
            kind = "boundary";
        else if (i % 5 == 1)
            kind = "low-energy";
        else
            kind = "generic";
        LongtermRow row;
        row.name = kind + "-" + std::to_string(i);
        const State init =
            make_initial_state(kind, g, cfg.params, cfg.rho, cfg.seed + i);
        row.u23_mass0 = integrate(init.u[1]) + integrate(init.u[2]);

        SolverConfig sc = cfg.solver;
        sc.keep_snapshots = false;
        TrajectoryLog log;
        try {
            log = run_rgs(cfg.params, init, sc);
        } catch (const InstabilityError&) {
            row.limit = "UNRESOLVED";
            report.rows.push_back(row);
            continue;
        }
        row.dist_circ = log.dist_circ.back();
        row.dist_b = log.dist_b.back();
        row.t_steady = log.t_final;
        row.min_e2_slope = 0.0;
        for (std::size_t n = 0; n + 1 < log.size(); ++n) {
            const double dt_out = log.times[n + 1] - log.times[n];
            if (dt_out > 0.0)
                row.min_e2_slope = std::min(
                    row.min_e2_slope, (log.e2[n + 1] - log.e2[n]) / dt_out);
        }
        row.limit = log.reached_steady
                        ? (row.dist_circ < row.dist_b ? "circ" : "b")
                        : "UNRESOLVED";
        report.rows.push_back(row);
    }
    return report;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

EpsLimitReport run_eps_limit(const ExperimentConfig& cfg) {
    if (cfg.eps_list.empty())
        throw std::invalid_argument("run_eps_limit: empty eps list");
    for (std::size_t i = 0; i + 1 < cfg.eps_list.size(); ++i)
        if (!(cfg.eps_list[i] > cfg.eps_list[i + 1]) || !(cfg.eps_list[i + 1] > 0.0))
            throw std::invalid_argument(
                "run_eps_limit: eps list must be strictly decreasing and positive");
    if (!(cfg.p_norm > 1.0 && cfg.p_norm < 2.0))
        throw std::invalid_argument("run_eps_limit: comparison norm must lie in (1,2)");

    const Grid g = cfg.make_grid();
    const GsInitialData init = make_gs_initial_data(g);
    for (const ScalarField* f : {&init.u1, &init.u2, &init.u3, &init.a})
        for (double v : f->values)
            if (v < 0.0)
                throw std::invalid_argument("run_eps_limit: initial data must be non-negative");

    SolverConfig sc = cfg.solver;
    sc.t_end = cfg.horizon;
    sc.steady_tol = 1e-300; // comparison runs always go the full horizon
    sc.keep_snapshots = true;

    // shared reference run, independent of eps
    GSParams gsp;
    gsp.d1 = cfg.params.d1;
    gsp.d2 = cfg.params.d2;
    gsp.k1 = cfg.params.k1;
    gsp.a = init.a;
    const GsTrajectory ref =
        run_gs_with_u3(gsp, cfg.params.d3, init.u1, init.u2, init.u3, sc);

    EpsLimitReport report;
    std::vector<double> log_eps, log_e1, log_e2, log_e3, log_e4;
    for (double eps : cfg.eps_list) {
        EpsRow row;
        row.eps = eps;
        Params pe = cfg.params;
        pe.k2 = pe.k3 = pe.k4 = eps;
        pe.d4 = eps;

        State s0;
        s0.t = 0.0;
        s0.u[0] = init.u1;
        s0.u[1] = init.u2;
        s0.u[2] = init.u3;
        s0.u[3] = init.a;
        for (double& v : s0.u[3].values) v /= eps;

        TrajectoryLog log;
        try {
            log = run_rgs(pe, s0, sc);
        } catch (const InstabilityError&) {
            row.ok = false;
            report.rows.push_back(row);
            continue;
        }
        if (log.snapshots.size() != ref.snapshots.size()) {
            row.ok = false;
            report.rows.push_back(row);
            continue;
        }
        for (std::size_t n = 0; n < log.snapshots.size(); ++n) {
            const State& se = log.snapshots[n];
            const auto& sr = ref.snapshots[n];
            for (int i = 0; i < 3; ++i) {
                ScalarField diff = se.u[i];
                for (std::size_t j = 0; j < diff.size(); ++j)
                    diff.values[j] -= sr[i].values[j];
                const double e = norm_p(diff, cfg.p_norm);
                if (i == 0) row.err1 = std::max(row.err1, e);
                if (i == 1) row.err2 = std::max(row.err2, e);
                if (i == 2) row.err3 = std::max(row.err3, e);
            }
            ScalarField diff4 = se.u[3];
            for (std::size_t j = 0; j < diff4.size(); ++j)
                diff4.values[j] = eps * diff4.values[j] - init.a.values[j];
            row.err4 = std::max(row.err4, norm_p(diff4, 2.0));
        }
        row.err4_over_sqrt_eps = row.err4 / std::sqrt(eps);
        row.ok = true;
        // transient snapshots are written for inspection, never asserted on
        if (!cfg.outdir.empty()) {
            std::filesystem::create_directories(cfg.outdir);
            const std::size_t last = log.snapshots.size() - 1;
            for (std::size_t frac = 0; frac <= 4; ++frac) {
                const std::size_t n = frac * last / 4;
                char name[80];
                std::snprintf(name, sizeof name, "transient_eps%g_%06zu.dat", eps, n);
                write_snapshot((std::filesystem::path(cfg.outdir) / name).string(),
                               log.snapshots[n], pe, mass(s0));
            }
        }
        report.rows.push_back(row);
        log_eps.push_back(std::log(eps));
        log_e1.push_back(std::log(row.err1));
        log_e2.push_back(std::log(row.err2));
        log_e3.push_back(std::log(row.err3));
        log_e4.push_back(std::log(row.err4));
    }
    report.slope1 = fit_slope(log_eps, log_e1);
    report.slope2 = fit_slope(log_eps, log_e2);
    report.slope3 = fit_slope(log_eps, log_e3);
    report.slope4 = fit_slope(log_eps, log_e4);
    return report;
}

void LongtermReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "ic_name,u23_mass0,limit,dist_circ,dist_b,t_steady,min_e2_slope\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%.17g,%.17g,%.17g,%.17g\n",
                      r.name.c_str(), r.u23_mass0, r.limit.c_str(), r.dist_circ,
                      r.dist_b, r.t_steady, r.min_e2_slope);
        out << buf;
    }
}

void EpsLimitReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "eps,ok,err_u1,err_u2,err_u3,err_u4,err_u4_over_sqrt_eps\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.eps, r.ok ? 1 : 0, r.err1, r.err2, r.err3, r.err4,
                      r.err4_over_sqrt_eps);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "# slopes,%.17g,%.17g,%.17g,%.17g\n", slope1,
                  slope2, slope3, slope4);
    out << buf;
}

} // namespace rgs
