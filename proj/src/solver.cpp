#include "rgslab/solver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rgslab/lyapunov.hpp"

namespace rgs {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be positive");
    if (!(output_every >= dt))
        throw std::invalid_argument("SolverConfig: output_every must be >= dt");
    if (!(steady_tol > 0.0))
        throw std::invalid_argument("SolverConfig: steady_tol must be positive");
    if (!(safety > 0.0 && safety < 1.0))
        throw std::invalid_argument("SolverConfig: safety must lie in (0,1)");
}

namespace {

bool all_finite(const ScalarField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

double field_diff_l2(const ScalarField& a, const ScalarField& b) {
    const double w = a.grid.cell_weight();
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a.values[j] - b.values[j];
        sum += d * d;
    }
    return std::sqrt(sum * w);
}

// Thomas solve of (I - alpha * T) x = rhs along one line, where T is the
// 1D second-difference stencil with mirror closure (row sums zero).
void solve_line(double alpha, const double* rhs, double* x, double* scratch, int n) {
    // scratch holds the modified superdiagonal
    double diag0 = 1.0 + alpha;
    scratch[0] = -alpha / diag0;
    x[0] = rhs[0] / diag0;
    for (int i = 1; i < n; ++i) {
        const double b = (i + 1 < n) ? 1.0 + 2.0 * alpha : 1.0 + alpha;
        const double m = b + alpha * scratch[i - 1];
        scratch[i] = -alpha / m;
        x[i] = (rhs[i] + alpha * x[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i) x[i] -= scratch[i] * x[i + 1];
}

// Solve (I - dt d lap_axis) v = f along the given axis, then apply the flux
// Laplacian of v back onto f. The flux form telescopes, so the per-species
// mass change of the sweep is pure round-off.
void diffuse_axis(ScalarField& f, double d, double dt, int axis) {
    const Grid& g = f.grid;
    const int nx = g.cells[0];
    const int ny = g.dim == 2 ? g.cells[1] : 1;
    const double dh = g.spacing[axis];
    const double alpha = dt * d / (dh * dh);
    const int n = axis == 0 ? nx : ny;
    std::vector<double> rhs(n), v(n), scratch(n);

    const int lines = axis == 0 ? ny : nx;
    for (int line = 0; line < lines; ++line) {
        const int base = axis == 0 ? line * nx : line;
        const int stride = axis == 0 ? 1 : nx;
        for (int i = 0; i < n; ++i) rhs[i] = f.values[base + i * stride];
        solve_line(alpha, rhs.data(), v.data(), scratch.data(), n);
        double left = 0.0;
        for (int i = 0; i < n; ++i) {
            const double right = (i + 1 < n) ? (v[i + 1] - v[i]) / dh : 0.0;
            f.values[base + i * stride] += dt * d * (right - left) / dh;
            left = right;
        }
    }
}

// Exact-in-time propagator of the discrete diffusion along one axis, in the
// cosine eigenbasis of the mirror-closed Laplacian. The cell mean is carried
// separately so the propagation error scales with the fluctuation size.
struct CosinePropagator {
    int n = 0;
    std::vector<double> modes; // (n-1) x n eigenvectors, k = 1..n-1
    std::vector<double> decay; // exp(h d lambda_k)

    void build(int n_, double dh, double d, double h) {
        n = n_;
        modes.assign(static_cast<std::size_t>(n - 1) * n, 0.0);
        decay.assign(n - 1, 0.0);
        const double pi = std::numbers::pi;
        for (int k = 1; k < n; ++k) {
            const double lambda = -2.0 / (dh * dh) * (1.0 - std::cos(pi * k / n));
            decay[k - 1] = std::exp(h * d * lambda);
            for (int j = 0; j < n; ++j)
                modes[static_cast<std::size_t>(k - 1) * n + j] =
                    std::cos(pi * k * (j + 0.5) / n);
        }
    }

    void apply(double* u, int stride) const {
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += u[j * stride];
        mean /= n;
        std::vector<double> coef(n - 1, 0.0);
        for (int k = 0; k + 1 < n; ++k) {
            const double* row = &modes[static_cast<std::size_t>(k) * n];
            double c = 0.0;
            for (int j = 0; j < n; ++j) c += (u[j * stride] - mean) * row[j];
            coef[k] = c * (2.0 / n) * decay[k];
        }
        for (int j = 0; j < n; ++j) {
            double acc = mean;
            for (int k = 0; k + 1 < n; ++k)
                acc += coef[k] * modes[static_cast<std::size_t>(k) * n + j];
            u[j * stride] = acc;
        }
    }
};

// Half-step diffusion propagators for up to four species on one grid.
struct StrangWorkspace {
    double dt = 0.0;
    std::array<CosinePropagator, 4> px, py;
    bool built = false;

    void build(const Grid& g, const std::array<double, 4>& d, int nspecies,
               double dt_) {
        dt = dt_;
        for (int i = 0; i < nspecies; ++i) {
            px[i].build(g.cells[0], g.spacing[0], d[i], 0.5 * dt_);
            if (g.dim == 2) py[i].build(g.cells[1], g.spacing[1], d[i], 0.5 * dt_);
        }
        built = true;
    }

    void half_diffuse(ScalarField& f, int species) const {
        const Grid& g = f.grid;
        const int nx = g.cells[0];
        const int ny = g.dim == 2 ? g.cells[1] : 1;
        for (int line = 0; line < ny; ++line)
            px[species].apply(&f.values[static_cast<std::size_t>(line) * nx], 1);
        if (g.dim == 2)
            for (int col = 0; col < nx; ++col)
                py[species].apply(&f.values[col], nx);
    }
};

void check_state(const State& s, double t, double dt) {
    for (const auto& f : s.u)
        if (!all_finite(f)) throw InstabilityError(t, dt);
}

State strang_step_rgs(const Params& p, const State& s, double dt,
                      const StrangWorkspace& ws) {
    State next = s;
    next.t = s.t + dt;
    for (int i = 0; i < 4; ++i) ws.half_diffuse(next.u[i], i);
    // midpoint reaction step
    State mid = next;
    ReactionVector rv = reaction_rgs(p, next);
    for (int i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < mid.u[i].size(); ++j)
            mid.u[i].values[j] += 0.5 * dt * rv.r[i][j];
    rv = reaction_rgs(p, mid);
    for (int i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < next.u[i].size(); ++j)
            next.u[i].values[j] += dt * rv.r[i][j];
    for (int i = 0; i < 4; ++i) ws.half_diffuse(next.u[i], i);
    check_state(next, s.t, dt);
    return next;
}

} // namespace

ScalarField diffuse_backward_euler(const ScalarField& f, double d, double dt) {
    ScalarField out = f;
    diffuse_axis(out, d, dt, 0);
    if (f.grid.dim == 2) diffuse_axis(out, d, dt, 1);
    return out;
}

State step_rgs(const Params& p, const State& s, double dt) {
    const ReactionVector rv = reaction_rgs(p, s);
    State next;
    next.t = s.t + dt;
    const double d[4] = {p.d1, p.d2, p.d3, p.d4};
    for (int i = 0; i < 4; ++i) {
        ScalarField star = s.u[i];
        for (std::size_t j = 0; j < star.size(); ++j) star.values[j] += dt * rv.r[i][j];
        next.u[i] = diffuse_backward_euler(star, d[i], dt);
    }
    check_state(next, s.t, dt);
    return next;
}

std::pair<ScalarField, ScalarField> step_gs(const GSParams& p,
                                            const ScalarField& u1,
                                            const ScalarField& u2, double dt) {
    auto [r1, r2] = reaction_gs(p, u1, u2);
    ScalarField s1 = u1, s2 = u2;
    for (std::size_t j = 0; j < s1.size(); ++j) {
        s1.values[j] += dt * r1.values[j];
        s2.values[j] += dt * r2.values[j];
    }
    ScalarField n1 = diffuse_backward_euler(s1, p.d1, dt);
    ScalarField n2 = diffuse_backward_euler(s2, p.d2, dt);
    if (!all_finite(n1) || !all_finite(n2)) throw InstabilityError(0.0, dt);
    return {std::move(n1), std::move(n2)};
}

std::pair<ScalarField, ScalarField> step_reduced(const Params& p,
                                                 const ScalarField& u1,
                                                 const ScalarField& u4, double dt) {
    ScalarField s1 = u1, s4 = u4;
    for (std::size_t j = 0; j < s1.size(); ++j) {
        const double ch14 = p.k1 * u1.values[j] - p.k4 * u4.values[j];
        s1.values[j] -= dt * ch14;
        s4.values[j] += dt * ch14;
    }
    return {diffuse_backward_euler(s1, p.d1, dt), diffuse_backward_euler(s4, p.d4, dt)};
}

ScalarField step_limit_u3(double d3, const ScalarField& u3, const ScalarField& u2,
                          double dt) {
    ScalarField s3 = u3;
    for (std::size_t j = 0; j < s3.size(); ++j) s3.values[j] += dt * u2.values[j];
    return diffuse_backward_euler(s3, d3, dt);
}

std::pair<double, double> distance_to_equilibria(const State& s,
                                                 const EquilibriumPair& pair) {
    const State circ = pair.state_circ(s.grid());
    const State b = pair.state_b(s.grid());
    return {state_distance_l2(s, circ), state_distance_l2(s, b)};
}

TrajectoryLog run_rgs(const Params& p, const State& init, const SolverConfig& cfg) {
    p.validate();
    cfg.validate();
    const Grid& g = init.grid();
    for (int i = 1; i < 4; ++i)
        if (!same_grid(init.u[i].grid, g))
            throw std::invalid_argument("run_rgs: fields on inconsistent grids");
    const double rho = mass(init);
    if (!std::isfinite(rho)) throw std::invalid_argument("run_rgs: non-finite mass");
    const EquilibriumPair eq = compute_equilibria(p, std::abs(rho) > 0 ? std::abs(rho) : 1.0,
                                                  g.volume);
    const PhiProfile phi2 = PhiProfile::power(2);

    TrajectoryLog log;
    auto record = [&](const State& s) {
        log.times.push_back(s.t);
        log.mass_col.push_back(mass(s));
        const double inf = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4; ++i) {
            log.l2[i].push_back(norm_p(s.u[i], 2.0));
            log.linf[i].push_back(norm_p(s.u[i], inf));
        }
        log.e2.push_back(energy(phi2, p, s));
        auto [dc, db] = distance_to_equilibria(s, eq);
        log.dist_circ.push_back(dc);
        log.dist_b.push_back(db);
        if (cfg.keep_snapshots) log.snapshots.push_back(s);
    };

    State cur = init;
    record(cur);
    double dt = cfg.dt;
    int halvings = 0;
    double next_out = cur.t + cfg.output_every;
    StrangWorkspace ws;
    if (cfg.scheme == Scheme::strang)
        ws.build(g, {p.d1, p.d2, p.d3, p.d4}, 4, dt);

    while (cur.t < cfg.t_end - 1e-12) {
        State next;
        try {
            next = cfg.scheme == Scheme::strang ? strang_step_rgs(p, cur, dt, ws)
                                                : step_rgs(p, cur, dt);
        } catch (const InstabilityError&) {
            if (++halvings > cfg.max_halvings) throw InstabilityError(cur.t, dt);
            dt *= cfg.safety;
            if (cfg.scheme == Scheme::strang) ws.build(g, {p.d1, p.d2, p.d3, p.d4}, 4, dt);
            continue;
        }
        const double rate = state_distance_l2(next, cur) / dt;
        cur = std::move(next);
        if (cur.t >= next_out - 1e-9 * dt) {
            record(cur);
            next_out += cfg.output_every;
        }
        if (rate < cfg.steady_tol) {
            log.reached_steady = true;
            break;
        }
    }
    if (log.times.empty() || log.times.back() < cur.t - 1e-12) record(cur);
    log.t_final = cur.t;
    log.dt_final = dt;
    return log;
}

GsTrajectory run_gs_with_u3(const GSParams& p, double d3, const ScalarField& u1_0,
                            const ScalarField& u2_0, const ScalarField& u3_0,
                            const SolverConfig& cfg) {
    p.validate();
    cfg.validate();
    GsTrajectory traj;
    ScalarField u1 = u1_0, u2 = u2_0, u3 = u3_0;
    double t = 0.0;
    traj.times.push_back(t);
    traj.snapshots.push_back({u1, u2, u3});
    double next_out = cfg.output_every;
    while (t < cfg.t_end - 1e-12) {
        ScalarField u3_next = step_limit_u3(d3, u3, u2, cfg.dt);
        std::pair<ScalarField, ScalarField> stepped;
        try {
            stepped = step_gs(p, u1, u2, cfg.dt);
        } catch (const InstabilityError&) {
            throw InstabilityError(t, cfg.dt);
        }
        u1 = std::move(stepped.first);
        u2 = std::move(stepped.second);
        u3 = std::move(u3_next);
        t += cfg.dt;
        if (!all_finite(u1) || !all_finite(u2) || !all_finite(u3))
            throw InstabilityError(t, cfg.dt);
        if (t >= next_out - 1e-9 * cfg.dt) {
            traj.times.push_back(t);
            traj.snapshots.push_back({u1, u2, u3});
            next_out += cfg.output_every;
        }
    }
    return traj;
}

ReducedLog run_reduced(const Params& p, const ScalarField& u1_0,
                       const ScalarField& u4_0, const SolverConfig& cfg) {
    p.validate();
    cfg.validate();
    const Grid& g = u1_0.grid;
    const double rho = integrate(u1_0) + integrate(u4_0);
    const EquilibriumPair eq = compute_equilibria(p, rho, g.volume);
    ReducedLog log;
    ScalarField u1 = u1_0, u4 = u4_0;
    double t = 0.0;
    auto weighted = [&](const ScalarField& a, const ScalarField& b) {
        ScalarField da = a, db = b;
        for (std::size_t j = 0; j < da.size(); ++j) {
            da.values[j] -= eq.e_b[0];
            db.values[j] -= eq.e_b[3];
        }
        const double na = norm_p(da, 2.0), nb = norm_p(db, 2.0);
        return p.k1 * na * na + p.k4 * nb * nb;
    };
    auto record = [&]() {
        log.times.push_back(t);
        log.weighted_dist2.push_back(weighted(u1, u4));
        log.u1_snapshots.push_back(u1);
        log.u4_snapshots.push_back(u4);
    };
    record();
    double next_out = cfg.output_every;
    while (t < cfg.t_end - 1e-12) {
        auto [n1, n4] = step_reduced(p, u1, u4, cfg.dt);
        const double rate =
            std::sqrt(std::pow(field_diff_l2(n1, u1), 2) +
                      std::pow(field_diff_l2(n4, u4), 2)) /
            cfg.dt;
        u1 = std::move(n1);
        u4 = std::move(n4);
        t += cfg.dt;
        if (t >= next_out - 1e-9 * cfg.dt) {
            record();
            next_out += cfg.output_every;
        }
        if (rate < cfg.steady_tol) break;
    }
    return log;
}

void TrajectoryLog::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,mass,l2_u1,l2_u2,l2_u3,l2_u4,linf_u1,linf_u2,linf_u3,linf_u4,"
           "E2,dist_circ,dist_b\n";
    char buf[32];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << sep;
    };
    for (std::size_t n = 0; n < times.size(); ++n) {
        put(times[n], ',');
        put(mass_col[n], ',');
        for (int i = 0; i < 4; ++i) put(l2[i][n], ',');
        for (int i = 0; i < 4; ++i) put(linf[i][n], ',');
        put(e2[n], ',');
        put(dist_circ[n], ',');
        put(dist_b[n], '\n');
    }
}

void write_snapshot(const std::string& path, const State& s, const Params& p,
                    double rho) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    const Grid& g = s.grid();
    char buf[512];
    out << "# rgslab snapshot\n";
    out << "dim " << g.dim << "\n";
    out << "cells " << g.cells[0] << " " << g.cells[1] << "\n";
    std::snprintf(buf, sizeof buf, "extent %.17g %.17g\n", g.extent[0], g.extent[1]);
    out << buf;
    std::snprintf(buf, sizeof buf, "time %.17g\n", s.t);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "params %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  p.d1, p.d2, p.d3, p.d4, p.k1, p.k2, p.k3, p.k4);
    out << buf;
    std::snprintf(buf, sizeof buf, "rho %.17g\n", rho);
    out << buf;
    out << "species u1 u2 u3 u4\n";
    for (int j = 0; j < g.total_cells(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n",
                      s.u[0].values[j], s.u[1].values[j], s.u[2].values[j],
                      s.u[3].values[j]);
        out << buf;
    }
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot " + path);
    std::string line, key;
    if (!std::getline(in, line) || line != "# rgslab snapshot")
        throw std::runtime_error("not a snapshot file: " + path);
    int dim = 0, nx = 0, ny = 1;
    double lx = 0, ly = 1, t = 0, rho = 0;
    Params p{};
    auto expect = [&](const std::string& want) {
        std::getline(in, line);
        std::istringstream ss(line);
        ss >> key;
        if (key != want) throw std::runtime_error("snapshot: expected '" + want + "' in " + path);
        return ss;
    };
    {
        auto ss = expect("dim");
        ss >> dim;
    }
    {
        auto ss = expect("cells");
        ss >> nx >> ny;
    }
    {
        auto ss = expect("extent");
        ss >> lx >> ly;
    }
    {
        auto ss = expect("time");
        ss >> t;
    }
    {
        auto ss = expect("params");
        ss >> p.d1 >> p.d2 >> p.d3 >> p.d4 >> p.k1 >> p.k2 >> p.k3 >> p.k4;
    }
    {
        auto ss = expect("rho");
        ss >> rho;
    }
    expect("species");
    const Grid g = dim == 1 ? Grid::line(lx, nx) : Grid::rect(lx, ly, nx, ny);
    Snapshot snap;
    snap.state = State::constant(g, {0, 0, 0, 0}, t);
    snap.params = p;
    snap.rho = rho;
    for (int j = 0; j < g.total_cells(); ++j) {
        if (!std::getline(in, line))
            throw std::runtime_error("snapshot: truncated data in " + path);
        std::istringstream ss(line);
        for (int i = 0; i < 4; ++i)
            if (!(ss >> snap.state.u[i].values[j]))
                throw std::runtime_error("snapshot: malformed row in " + path);
    }
    return snap;
}

} // namespace rgs
