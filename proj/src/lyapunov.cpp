#include "rgslab/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rgs {

PhiProfile PhiProfile::power(double p) {
    if (!(p >= 2.0))
        throw std::invalid_argument("PhiProfile::power: exponent must be >= 2");
    PhiProfile phi;
    phi.kind = PhiKind::power;
    phi.p = p;
    return phi;
}

PhiProfile PhiProfile::entropy() {
    PhiProfile phi;
    phi.kind = PhiKind::entropy;
    return phi;
}

PhiProfile PhiProfile::clip_above(double M) {
    PhiProfile phi;
    phi.kind = PhiKind::clip_above;
    phi.M = M;
    return phi;
}

PhiProfile PhiProfile::clip_below(double M) {
    PhiProfile phi;
    phi.kind = PhiKind::clip_below;
    phi.M = M;
    return phi;
}

double PhiProfile::phi(double r) const {
    switch (kind) {
    case PhiKind::power:
        if (p == 2.0) return r * r;
        if (p == 3.0) {
            const double a = std::abs(r);
            return a * a * a;
        }
        return std::pow(std::abs(r), p);
    case PhiKind::entropy:
        if (r < 0.0) throw std::domain_error("entropy profile: negative argument");
        if (r == 0.0) return 1.0;
        return r * std::log(r) - r + 1.0;
    case PhiKind::clip_above:
        return std::max(r - M, 0.0);
    case PhiKind::clip_below:
        return std::max(-r - M, 0.0);
    }
    return 0.0;
}

double PhiProfile::dphi(double r) const {
    switch (kind) {
    case PhiKind::power: {
        if (p == 2.0) return 2.0 * r;
        const double a = std::abs(r);
        const double m = p * std::pow(a, p - 1.0);
        return r >= 0.0 ? m : -m;
    }
    case PhiKind::entropy:
        if (r < 0.0) throw std::domain_error("entropy profile: negative argument");
        if (r == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(r);
    case PhiKind::clip_above:
        return r > M ? 1.0 : 0.0;
    case PhiKind::clip_below:
        return r < -M ? -1.0 : 0.0;
    }
    return 0.0;
}

double PhiProfile::ddphi(double r) const {
    switch (kind) {
    case PhiKind::power:
        if (p == 2.0) return 2.0;
        return p * (p - 1.0) * std::pow(std::abs(r), p - 2.0);
    case PhiKind::entropy:
        if (r < 0.0) throw std::domain_error("entropy profile: negative argument");
        return 1.0 / r;
    case PhiKind::clip_above:
    case PhiKind::clip_below:
        return 0.0; // a.e. second derivative of a kinked linear profile
    }
    return 0.0;
}

double PhiProfile::ddphi_face(double a, double b) const {
    if (a == b) return ddphi(a);
    const double num = dphi(b) - dphi(a);
    if (num == 0.0) return 0.0;
    return num / (b - a);
}

namespace {

struct SpeciesScaling {
    double scale;  // multiplies the species value inside phi
    double weight; // multiplies the integrand
};

std::array<SpeciesScaling, 4> scalings(const Params& p) {
    return {{{1.0, 1.0},
             {p.k2, 1.0 / p.k2},
             {p.k2 * p.k3, 1.0 / (p.k2 * p.k3)},
             {p.k4 / p.k1, p.k1 / p.k4}}};
}

void check_domain(const PhiProfile& phi, const State& s) {
    if (!phi.needs_nonnegative()) return;
    for (const auto& f : s.u)
        for (double v : f.values)
            if (v < 0.0)
                throw std::domain_error("entropy profile requires a non-negative state");
}

} // namespace

double energy(const PhiProfile& phi, const Params& p, const State& s) {
    check_domain(phi, s);
    const auto sc = scalings(p);
    const double w = s.grid().cell_weight();
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        double sum = 0.0;
        for (double v : s.u[i].values) sum += phi.phi(sc[i].scale * v);
        total += sc[i].weight * sum * w;
    }
    return total;
}

double dissipation(const PhiProfile& phi, const Params& p, const State& s) {
    check_domain(phi, s);
    const auto sc = scalings(p);
    const double d[4] = {p.d1, p.d2, p.d3, p.d4};
    const Grid& g = s.grid();
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        const auto& v = s.u[i].values;
        const double a = sc[i].scale;
        double sum = 0.0;
        if (g.dim == 1) {
            const double dx = g.spacing[0];
            for (int j = 0; j + 1 < g.cells[0]; ++j) {
                const double grad = (v[j + 1] - v[j]) / dx;
                sum += phi.ddphi_face(a * v[j], a * v[j + 1]) * grad * grad * dx;
            }
        } else {
            const int nx = g.cells[0], ny = g.cells[1];
            const double dx = g.spacing[0], dy = g.spacing[1];
            const double wf = dx * dy;
            for (int iy = 0; iy < ny; ++iy)
                for (int ix = 0; ix + 1 < nx; ++ix) {
                    const int j = iy * nx + ix;
                    const double grad = (v[j + 1] - v[j]) / dx;
                    sum += phi.ddphi_face(a * v[j], a * v[j + 1]) * grad * grad * wf;
                }
            for (int iy = 0; iy + 1 < ny; ++iy)
                for (int ix = 0; ix < nx; ++ix) {
                    const int j = iy * nx + ix;
                    const double grad = (v[j + nx] - v[j]) / dy;
                    sum += phi.ddphi_face(a * v[j], a * v[j + nx]) * grad * grad * wf;
                }
        }
        // d_i * weight_i * scale_i^2 reproduces the continuous weights
        // (d1, d2 k2, d3 k2 k3, d4 k4/k1) acting on phi''(scaled species).
        total += d[i] * sc[i].weight * a * a * sum;
    }
    return total;
}

double reaction_production(const PhiProfile& phi, const Params& p, const State& s) {
    check_domain(phi, s);
    const double w = s.grid().cell_weight();
    const auto& u1 = s.u[0].values;
    const auto& u2 = s.u[1].values;
    const auto& u3 = s.u[2].values;
    const auto& u4 = s.u[3].values;
    double total = 0.0;
    for (std::size_t j = 0; j < u1.size(); ++j) {
        // Each term is factor * (phi'(x) - phi'(y)) with factor proportional
        // to (x - y); a zero factor kills the term before phi' can blow up.
        const double x1 = u1[j], y1 = p.k2 * u2[j];
        const double f1 = u2[j] * u2[j] * (x1 - y1);
        if (f1 != 0.0) total += w * f1 * (phi.dphi(x1) - phi.dphi(y1));

        const double x2 = p.k2 * u2[j], y2 = p.k2 * p.k3 * u3[j];
        const double f2 = (x2 - y2) / p.k2;
        if (f2 != 0.0) total += w * f2 * (phi.dphi(x2) - phi.dphi(y2));

        const double x3 = u1[j], y3 = p.k4 / p.k1 * u4[j];
        const double f3 = p.k1 * (x3 - y3);
        if (f3 != 0.0) total += w * f3 * (phi.dphi(x3) - phi.dphi(y3));
    }
    return total;
}

EnergyBreakdown energy_breakdown(const PhiProfile& phi, const Params& p,
                                 const State& s) {
    EnergyBreakdown out;
    out.t = s.t;
    out.E = energy(phi, p, s);
    out.D = dissipation(phi, p, s);
    out.R = reaction_production(phi, p, s);
    return out;
}

std::vector<double> energy_identity_residuals(const PhiProfile& phi,
                                              const Params& p,
                                              const std::vector<State>& traj) {
    std::vector<double> res;
    if (traj.size() < 2) return res;
    const double dt = traj[1].t - traj[0].t;
    if (!(dt > 0.0))
        throw std::invalid_argument("energy_identity_residuals: non-increasing times");
    for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
        const double step = traj[n + 1].t - traj[n].t;
        if (std::abs(step - dt) > 1e-9 * dt)
            throw std::invalid_argument("energy_identity_residuals: non-uniform sampling");
        State mid = traj[n];
        mid.t = 0.5 * (traj[n].t + traj[n + 1].t);
        for (int i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < mid.u[i].size(); ++j)
                mid.u[i].values[j] =
                    0.5 * (traj[n].u[i].values[j] + traj[n + 1].u[i].values[j]);
        const double e0 = energy(phi, p, traj[n]);
        const double e1 = energy(phi, p, traj[n + 1]);
        const double d = dissipation(phi, p, mid);
        const double r = reaction_production(phi, p, mid);
        res.push_back((e1 - e0) / dt + d + r);
    }
    return res;
}

double scaled_sup_max(const Params& p, const State& s) {
    const double inf = std::numeric_limits<double>::infinity();
    const double m1 = norm_p(s.u[0], inf);
    const double m2 = p.k2 * norm_p(s.u[1], inf);
    const double m3 = p.k2 * p.k3 * norm_p(s.u[2], inf);
    const double m4 = p.k4 / p.k1 * norm_p(s.u[3], inf);
    return std::max(std::max(m1, m2), std::max(m3, m4));
}

} // namespace rgs
