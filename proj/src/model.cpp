#include "rgslab/model.hpp"

#include <stdexcept>

namespace rgs {

void Params::validate() const {
    for (double v : {d1, d2, d3, d4, k1, k2, k3, k4})
        if (!(v > 0.0))
            throw std::invalid_argument("Params: all rates and diffusivities must be positive");
}

void GSParams::validate() const {
    for (double v : {d1, d2, k1})
        if (!(v > 0.0))
            throw std::invalid_argument("GSParams: d1, d2, k1 must be positive");
    for (double v : a.values)
        if (v < 0.0)
            throw std::invalid_argument("GSParams: feed a must be non-negative");
}

std::array<double, 4> reaction_rgs_point(const Params& p,
                                         const std::array<double, 4>& u) {
    const double cubic = u[1] * u[1] * (u[0] - p.k2 * u[1]);
    const double ch23 = u[1] - p.k3 * u[2];
    const double ch14 = p.k1 * u[0] - p.k4 * u[3];
    return {-cubic - ch14, cubic - ch23, ch23, ch14};
}

ReactionVector reaction_rgs(const Params& p, const State& s) {
    const std::size_t n = s.u[0].size();
    ReactionVector rv;
    for (auto& c : rv.r) c.resize(n);
    rv.cubic.resize(n);
    rv.ch23.resize(n);
    rv.ch14.resize(n);
    const auto& u1 = s.u[0].values;
    const auto& u2 = s.u[1].values;
    const auto& u3 = s.u[2].values;
    const auto& u4 = s.u[3].values;
    for (std::size_t j = 0; j < n; ++j) {
        const double cubic = u2[j] * u2[j] * (u1[j] - p.k2 * u2[j]);
        const double ch23 = u2[j] - p.k3 * u3[j];
        const double ch14 = p.k1 * u1[j] - p.k4 * u4[j];
        rv.cubic[j] = cubic;
        rv.ch23[j] = ch23;
        rv.ch14[j] = ch14;
        rv.r[0][j] = -cubic - ch14;
        rv.r[1][j] = cubic - ch23;
        rv.r[2][j] = ch23;
        rv.r[3][j] = ch14;
    }
    return rv;
}

std::array<ScalarField, 4> rhs_rgs(const Params& p, const State& s) {
    const ReactionVector rv = reaction_rgs(p, s);
    const double d[4] = {p.d1, p.d2, p.d3, p.d4};
    std::array<ScalarField, 4> out;
    for (int i = 0; i < 4; ++i) {
        out[i] = laplacian_neumann(s.u[i]);
        for (std::size_t j = 0; j < out[i].size(); ++j)
            out[i].values[j] = d[i] * out[i].values[j] + rv.r[i][j];
    }
    return out;
}

std::pair<ScalarField, ScalarField> reaction_gs(const GSParams& p,
                                                const ScalarField& u1,
                                                const ScalarField& u2) {
    ScalarField r1(u1.grid), r2(u1.grid);
    for (std::size_t j = 0; j < u1.size(); ++j) {
        const double cubic = u1.values[j] * u2.values[j] * u2.values[j];
        r1.values[j] = -cubic - p.k1 * u1.values[j] + p.a.values[j];
        r2.values[j] = cubic - u2.values[j];
    }
    return {std::move(r1), std::move(r2)};
}

std::pair<ScalarField, ScalarField> rhs_gs(const GSParams& p,
                                           const ScalarField& u1,
                                           const ScalarField& u2) {
    auto [r1, r2] = reaction_gs(p, u1, u2);
    const ScalarField l1 = laplacian_neumann(u1);
    const ScalarField l2 = laplacian_neumann(u2);
    for (std::size_t j = 0; j < u1.size(); ++j) {
        r1.values[j] += p.d1 * l1.values[j];
        r2.values[j] += p.d2 * l2.values[j];
    }
    return {std::move(r1), std::move(r2)};
}

std::pair<ScalarField, ScalarField> rhs_reduced_linear(const Params& p,
                                                       const ScalarField& u1,
                                                       const ScalarField& u4) {
    ScalarField f1 = laplacian_neumann(u1);
    ScalarField f4 = laplacian_neumann(u4);
    for (std::size_t j = 0; j < u1.size(); ++j) {
        const double ch14 = p.k1 * u1.values[j] - p.k4 * u4.values[j];
        f1.values[j] = p.d1 * f1.values[j] - ch14;
        f4.values[j] = p.d4 * f4.values[j] + ch14;
    }
    return {std::move(f1), std::move(f4)};
}

ScalarField rhs_limit_u3(double d3, const ScalarField& u3, const ScalarField& u2) {
    ScalarField out = laplacian_neumann(u3);
    for (std::size_t j = 0; j < u3.size(); ++j)
        out.values[j] = d3 * out.values[j] + u2.values[j];
    return out;
}

} // namespace rgs
