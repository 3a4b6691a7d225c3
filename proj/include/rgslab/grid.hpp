#pragma once
// Cell-centered rectangular grids with mirror-ghost Neumann closure,
// midpoint quadrature, discrete gradients and L_p norms.

#include <array>
#include <cstddef>
#include <vector>

namespace rgs {

/// Uniform cell-centered grid on an interval (dim 1) or rectangle (dim 2).
///
/// The Laplacian below uses mirror ghost cells, which makes it symmetric and
/// mass-neutral: the discrete integral of laplacian_neumann(f) vanishes for
/// every f, and summation by parts holds exactly against the face gradients
/// of grad_dot().
struct Grid {
    int dim = 1;
    std::array<double, 2> extent{1.0, 1.0};  // physical side lengths
    std::array<int, 2> cells{0, 1};          // cell counts per axis
    std::array<double, 2> spacing{0.0, 0.0}; // extent/cells
    double volume = 0.0;                     // product of extents

    static Grid line(double length, int n);
    static Grid rect(double lx, double ly, int nx, int ny);

    int total_cells() const { return dim == 1 ? cells[0] : cells[0] * cells[1]; }
    double cell_weight() const {
        return dim == 1 ? spacing[0] : spacing[0] * spacing[1];
    }
    /// Center coordinate of cell `index` along `axis`.
    double center(int index, int axis) const {
        return (index + 0.5) * spacing[axis];
    }
};

bool same_grid(const Grid& a, const Grid& b);

/// One real value per cell.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.total_cells()), fill) {}

    double& operator[](std::size_t j) { return values[j]; }
    double operator[](std::size_t j) const { return values[j]; }
    std::size_t size() const { return values.size(); }
};

/// Four species fields on one grid at one time instant.
struct State {
    double t = 0.0;
    std::array<ScalarField, 4> u;

    static State constant(const Grid& g, const std::array<double, 4>& vals,
                          double t = 0.0);
    const Grid& grid() const { return u[0].grid; }
};

/// Second-order central stencil with mirror ghost closure, in flux form.
ScalarField laplacian_neumann(const ScalarField& f);

/// Midpoint quadrature sum f_j * w_j.
double integrate(const ScalarField& f);

/// (sum |f_j|^p w_j)^(1/p); max |f_j| for p = infinity. Rejects p < 1.
double norm_p(const ScalarField& f, double p);

/// Total integrated mass over all four species.
double mass(const State& s);

/// Sum over interior faces of (grad f . grad g) with face weights.
/// Pairs with laplacian_neumann: integrate(g * lap f) == -grad_dot(f, g).
double grad_dot(const ScalarField& f, const ScalarField& g);

double state_distance_l2(const State& a, const State& b);
double state_norm_l2(const State& a);

} // namespace rgs
