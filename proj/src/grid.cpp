#include "rgslab/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rgs {

static void check_axis(double length, int n) {
    if (!(length > 0.0))
        throw std::invalid_argument("grid: extent must be positive");
    if (n < 3)
        throw std::invalid_argument("grid: need at least 3 cells per axis");
}

Grid Grid::line(double length, int n) {
    check_axis(length, n);
    Grid g;
    g.dim = 1;
    g.extent = {length, 1.0};
    g.cells = {n, 1};
    g.spacing = {length / n, 0.0};
    g.volume = length;
    return g;
}

Grid Grid::rect(double lx, double ly, int nx, int ny) {
    check_axis(lx, nx);
    check_axis(ly, ny);
    Grid g;
    g.dim = 2;
    g.extent = {lx, ly};
    g.cells = {nx, ny};
    g.spacing = {lx / nx, ly / ny};
    g.volume = lx * ly;
    return g;
}

bool same_grid(const Grid& a, const Grid& b) {
    return a.dim == b.dim && a.cells == b.cells && a.extent == b.extent;
}

State State::constant(const Grid& g, const std::array<double, 4>& vals, double t) {
    State s;
    s.t = t;
    for (int i = 0; i < 4; ++i) s.u[i] = ScalarField(g, vals[i]);
    return s;
}

ScalarField laplacian_neumann(const ScalarField& f) {
    const Grid& g = f.grid;
    ScalarField out(g);
    if (g.dim == 1) {
        const int n = g.cells[0];
        const double dx = g.spacing[0];
        double left = 0.0; // boundary flux vanishes (mirror ghost)
        for (int j = 0; j < n; ++j) {
            const double right =
                (j + 1 < n) ? (f.values[j + 1] - f.values[j]) / dx : 0.0;
            out.values[j] = (right - left) / dx;
            left = right;
        }
        return out;
    }
    const int nx = g.cells[0], ny = g.cells[1];
    const double dx = g.spacing[0], dy = g.spacing[1];
    for (int iy = 0; iy < ny; ++iy) {
        double left = 0.0;
        const int row = iy * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const double right =
                (ix + 1 < nx) ? (f.values[row + ix + 1] - f.values[row + ix]) / dx
                              : 0.0;
            out.values[row + ix] = (right - left) / dx;
            left = right;
        }
    }
    for (int ix = 0; ix < nx; ++ix) {
        double low = 0.0;
        for (int iy = 0; iy < ny; ++iy) {
            const int j = iy * nx + ix;
            const double high =
                (iy + 1 < ny) ? (f.values[j + nx] - f.values[j]) / dy : 0.0;
            out.values[j] += (high - low) / dy;
            low = high;
        }
    }
    return out;
}

double integrate(const ScalarField& f) {
    const double w = f.grid.cell_weight();
    double sum = 0.0;
    for (double v : f.values) sum += v;
    return sum * w;
}

double norm_p(const ScalarField& f, double p) {
    if (p == std::numeric_limits<double>::infinity()) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0))
        throw std::invalid_argument("norm_p: p must be >= 1 or infinity");
    const double w = f.grid.cell_weight();
    double sum = 0.0;
    if (p == 2.0) {
        for (double v : f.values) sum += v * v;
    } else if (p == 1.0) {
        for (double v : f.values) sum += std::abs(v);
    } else {
        for (double v : f.values) sum += std::pow(std::abs(v), p);
    }
    return std::pow(sum * w, 1.0 / p);
}

double mass(const State& s) {
    double total = 0.0;
    for (const auto& f : s.u) total += integrate(f);
    return total;
}

double grad_dot(const ScalarField& f, const ScalarField& g) {
    const Grid& gr = f.grid;
    double sum = 0.0;
    if (gr.dim == 1) {
        const int n = gr.cells[0];
        const double dx = gr.spacing[0];
        for (int j = 0; j + 1 < n; ++j) {
            const double df = (f.values[j + 1] - f.values[j]) / dx;
            const double dg = (g.values[j + 1] - g.values[j]) / dx;
            sum += df * dg * dx;
        }
        return sum;
    }
    const int nx = gr.cells[0], ny = gr.cells[1];
    const double dx = gr.spacing[0], dy = gr.spacing[1];
    const double w = dx * dy;
    for (int iy = 0; iy < ny; ++iy) {
        const int row = iy * nx;
        for (int ix = 0; ix + 1 < nx; ++ix) {
            const double df = (f.values[row + ix + 1] - f.values[row + ix]) / dx;
            const double dg = (g.values[row + ix + 1] - g.values[row + ix]) / dx;
            sum += df * dg * w;
        }
    }
    for (int iy = 0; iy + 1 < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const int j = iy * nx + ix;
            const double df = (f.values[j + nx] - f.values[j]) / dy;
            const double dg = (g.values[j + nx] - g.values[j]) / dy;
            sum += df * dg * w;
        }
    }
    return sum;
}

double state_distance_l2(const State& a, const State& b) {
    const double w = a.grid().cell_weight();
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < a.u[i].size(); ++j) {
            const double d = a.u[i].values[j] - b.u[i].values[j];
            sum += d * d;
        }
    }
    return std::sqrt(sum * w);
}

double state_norm_l2(const State& a) {
    const double w = a.grid().cell_weight();
    double sum = 0.0;
    for (int i = 0; i < 4; ++i)
        for (double v : a.u[i].values) sum += v * v;
    return std::sqrt(sum * w);
}

} // namespace rgs
