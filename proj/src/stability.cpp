#include "rgslab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "rgslab/ode.hpp"

namespace rgs {

namespace {

constexpr int kDenseCellCap = 256;
constexpr double kKernelTol = 1e-9;

std::array<double, 4> v_weights(const Params& p) {
    return {1.0, p.k2, p.k2 * p.k3, p.k4 / p.k1};
}

double equilibrium_e2(const Params& p, double rho, double volume,
                      EquilibriumKind which) {
    const EquilibriumPair eq = compute_equilibria(p, rho, volume);
    return which == EquilibriumKind::b ? eq.e_b[1] : eq.e_circ[1];
}

Eigen::Matrix4d jacobian_from_e2(const Params& p, double e2) {
    const double q = e2 * e2;
    Eigen::Matrix4d J;
    J << -q - p.k1, p.k2 * q, 0.0, p.k4,
         q, -p.k2 * q - 1.0, p.k3, 0.0,
         0.0, 1.0, -p.k3, 0.0,
         p.k1, 0.0, 0.0, -p.k4;
    return J;
}

// Eigensolve M restricted to the hyperplane {g . v = 0} after the similarity
// transform that symmetrizes M (M is self-adjoint in the inner product with
// species weights c). Returns eigenvalues ascending plus the back-transformed
// eigenvectors.
struct RestrictedEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors; // columns, in the original coordinates
};

RestrictedEigen restricted_symmetric_eigen(const Eigen::MatrixXd& M,
                                           const Eigen::VectorXd& c_sqrt,
                                           const Eigen::VectorXd& g) {
    const Eigen::Index n = M.rows();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index cc = 0; cc < n; ++cc)
            K(r, cc) = M(r, cc) * c_sqrt(r) / c_sqrt(cc);
    K = 0.5 * (K + K.transpose()).eval();

    // constraint in symmetrized coordinates
    Eigen::VectorXd gy = g.cwiseQuotient(c_sqrt);
    gy.normalize();
    // Householder reflector mapping gy to +-e1; its trailing columns span the
    // constraint plane orthonormally.
    Eigen::VectorXd v = gy;
    v(0) += (gy(0) >= 0.0 ? 1.0 : -1.0) * gy.norm();
    v.normalize();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose();
    Eigen::MatrixXd Q = H.rightCols(n - 1);

    Eigen::MatrixXd Kz = Q.transpose() * K * Q;
    Kz = 0.5 * (Kz + Kz.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Kz);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigensolver failed");

    RestrictedEigen out;
    out.values = es.eigenvalues();
    Eigen::MatrixXd Y = Q * es.eigenvectors();
    out.vectors.resize(n, n - 1);
    for (Eigen::Index j = 0; j < n - 1; ++j)
        out.vectors.col(j) = Y.col(j).cwiseQuotient(c_sqrt);
    return out;
}

} // namespace

Eigen::Matrix4d reaction_jacobian(const Params& p, double rho, double volume,
                                  EquilibriumKind which) {
    p.validate();
    return jacobian_from_e2(p, equilibrium_e2(p, rho, volume, which));
}

LinearizedOperator assemble_linearization(const Params& p, double rho,
                                          EquilibriumKind which, const Grid& grid) {
    p.validate();
    const int n = grid.total_cells();
    if (n > kDenseCellCap)
        throw std::invalid_argument(
            "assemble_linearization: grid too large for the dense eigensolve "
            "path; reduce the resolution to at most " +
            std::to_string(kDenseCellCap) + " cells");

    LinearizedOperator op;
    op.which = which;
    op.params = p;
    op.rho = rho;
    op.grid = grid;
    op.e2 = equilibrium_e2(p, rho, grid.volume, which);
    const Eigen::Matrix4d J = jacobian_from_e2(p, op.e2);

    // Dense per-species Laplacian built by applying the stencil to unit fields,
    // so the matrix path and the operator path share one discretization.
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int col = 0; col < n; ++col) {
        ScalarField e(grid);
        e.values[col] = 1.0;
        const ScalarField le = laplacian_neumann(e);
        for (int row = 0; row < n; ++row) lap(row, col) = le.values[row];
    }

    const double d[4] = {p.d1, p.d2, p.d3, p.d4};
    op.matrix = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    for (int i = 0; i < 4; ++i) {
        op.matrix.block(i * n, i * n, n, n) = d[i] * lap;
        for (int k = 0; k < 4; ++k)
            if (J(i, k) != 0.0)
                op.matrix.block(i * n, k * n, n, n) +=
                    J(i, k) * Eigen::MatrixXd::Identity(n, n);
    }
    return op;
}

std::array<ScalarField, 4> apply_linearization(const Params& p, double rho,
                                               double volume, EquilibriumKind which,
                                               const std::array<ScalarField, 4>& v) {
    const Eigen::Matrix4d J =
        jacobian_from_e2(p, equilibrium_e2(p, rho, volume, which));
    const double d[4] = {p.d1, p.d2, p.d3, p.d4};
    std::array<ScalarField, 4> out;
    for (int i = 0; i < 4; ++i) {
        out[i] = laplacian_neumann(v[i]);
        for (std::size_t j = 0; j < out[i].size(); ++j) {
            double acc = d[i] * out[i].values[j];
            for (int k = 0; k < 4; ++k) acc += J(i, k) * v[k].values[j];
            out[i].values[j] = acc;
        }
    }
    return out;
}

std::pair<double, double> weighted_form_check(const LinearizedOperator& opr,
                                              const std::array<ScalarField, 4>& v) {
    const Params& p = opr.params;
    const auto cw = v_weights(p);
    const auto lv = apply_linearization(p, opr.rho, opr.grid.volume, opr.which, v);

    const double w = opr.grid.cell_weight();
    double lhs = 0.0;
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < v[i].size(); ++j)
            s += lv[i].values[j] * v[i].values[j];
        lhs += cw[i] * s * w;
    }

    const double dgw[4] = {p.d1, p.d2 * p.k2, p.d3 * p.k2 * p.k3,
                           p.d4 * p.k4 / p.k1};
    double rhs = 0.0;
    for (int i = 0; i < 4; ++i) rhs -= dgw[i] * grad_dot(v[i], v[i]);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t j = 0; j < v[0].size(); ++j) {
        const double p1 = v[0].values[j] - p.k2 * v[1].values[j];
        const double p2 = v[1].values[j] - p.k3 * v[2].values[j];
        const double p3 = p.k1 * v[0].values[j] - p.k4 * v[3].values[j];
        s1 += p1 * p1;
        s2 += p2 * p2;
        s3 += p3 * p3;
    }
    rhs -= opr.e2 * opr.e2 * s1 * w;
    rhs -= p.k2 * s2 * w;
    rhs -= s3 * w / p.k1;
    return {lhs, rhs};
}

SpectrumReport spectrum(const LinearizedOperator& opr) {
    const int n = opr.grid.total_cells();
    const auto cw = v_weights(opr.params);
    Eigen::VectorXd c_sqrt(4 * n), g(4 * n);
    const double w = opr.grid.cell_weight();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < n; ++j) {
            c_sqrt(i * n + j) = std::sqrt(cw[i]);
            g(i * n + j) = w; // zero-mass constraint: sum of all cell integrals
        }

    const RestrictedEigen re = restricted_symmetric_eigen(opr.matrix, c_sqrt, g);

    SpectrumReport rep;
    rep.which = opr.which;
    std::vector<int> order(re.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return re.values(a) > re.values(b); });

    double gap_candidate = 0.0;
    bool have_gap = false;
    for (int idx : order) {
        const double lam = re.values(idx);
        rep.eigenvalues.emplace_back(lam, 0.0);
        if (std::abs(lam) <= kKernelTol) {
            ++rep.kernel_dim;
            // homogeneous direction of the kernel vector: species means
            Eigen::VectorXd vec = re.vectors.col(idx);
            std::array<double, 4> means{};
            for (int i = 0; i < 4; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += vec(i * n + j);
                means[i] = s / n;
            }
            double norm = 0.0;
            for (double m : means) norm += m * m;
            norm = std::sqrt(norm);
            if (norm > 0.0)
                for (int i = 0; i < 4; ++i) rep.kernel_vector[i] = means[i] / norm;
        } else if (lam < 0.0 && !have_gap) {
            gap_candidate = -lam;
            have_gap = true;
        }
    }
    rep.gap = gap_candidate;
    return rep;
}

std::array<double, 3> homogeneous_spectrum(const Params& p, double rho,
                                           double volume, EquilibriumKind which) {
    const Eigen::Matrix4d J = reaction_jacobian(p, rho, volume, which);
    const auto cw = v_weights(p);
    Eigen::VectorXd c_sqrt(4), g(4);
    for (int i = 0; i < 4; ++i) {
        c_sqrt(i) = std::sqrt(cw[i]);
        g(i) = volume;
    }
    const RestrictedEigen re = restricted_symmetric_eigen(J, c_sqrt, g);
    std::array<double, 3> lam{re.values(0), re.values(1), re.values(2)};
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return lam;
}

CenterManifoldConstants center_constants(const Params& p, double rho,
                                         double volume) {
    p.validate();
    CenterManifoldConstants c;
    const double sum14 = p.k1 + p.k4;
    const double sum3 = 1.0 + p.k3;
    c.K1 = 1.0 / (volume * sum14);
    c.K2 = 1.0 / (2.0 * volume * sum14 * sum3);
    c.K4 = rho * c.K1 * c.K2 * p.k3 * p.k3 * p.k4 * sum14 * sum14 * volume;
    c.k_vec = {p.k4 * sum3, -p.k3 * sum14, -sum14, p.k1 * sum3};
    return c;
}

double q_functional(const Params& p, const State& w) {
    const CenterManifoldConstants c = center_constants(p, 1.0, w.grid().volume);
    return c.K2 * (integrate(w.u[0]) + integrate(w.u[3]) - integrate(w.u[1]) -
                   integrate(w.u[2]));
}

double q_homogeneous(const Params& p, double volume,
                     const std::array<double, 4>& w) {
    const CenterManifoldConstants c = center_constants(p, 1.0, volume);
    return c.K2 * volume * (w[0] + w[3] - w[1] - w[2]);
}

std::array<ScalarField, 4> nonlinearity_N(const Params& p, double rho,
                                          const State& w) {
    const Grid& g = w.grid();
    const double k1term = rho * p.k4 / (g.volume * (p.k1 + p.k4)); // rho K1 k4
    std::array<ScalarField, 4> out{ScalarField(g), ScalarField(g), ScalarField(g),
                                   ScalarField(g)};
    for (std::size_t j = 0; j < w.u[0].size(); ++j) {
        const double w1 = w.u[0].values[j];
        const double w2 = w.u[1].values[j];
        const double val = w2 * w2 * (p.k2 * w2 - k1term - w1);
        out[0].values[j] = val;
        out[1].values[j] = -val;
    }
    return out;
}

std::vector<double> center_coefficient_check(const Params& p, double rho,
                                             double volume,
                                             const std::vector<double>& xis) {
    const CenterManifoldConstants c = center_constants(p, rho, volume);
    const Grid g = Grid::line(volume, 4);
    std::vector<double> ratios;
    ratios.reserve(xis.size());
    for (double xi : xis) {
        State w = State::constant(
            g, {xi * c.k_vec[0], xi * c.k_vec[1], xi * c.k_vec[2], xi * c.k_vec[3]});
        const auto nw = nonlinearity_N(p, rho, w);
        State nstate;
        nstate.u = nw;
        ratios.push_back(q_functional(p, nstate) / (xi * xi));
    }
    return ratios;
}

std::vector<EnvelopePoint> boundary_decay_envelope(const Params& p, double rho,
                                                   double volume, double s0,
                                                   double t_end, double out_every) {
    p.validate();
    const EquilibriumPair eq = compute_equilibria(p, rho, volume);
    const CenterManifoldConstants c = center_constants(p, rho, volume);

    std::vector<double> y(4);
    for (int i = 0; i < 4; ++i) y[i] = eq.e_b[i] + s0 * c.k_vec[i];

    auto rhs = [&](double, const std::vector<double>& state) {
        const auto r = reaction_rgs_point(p, {state[0], state[1], state[2], state[3]});
        return std::vector<double>{r[0], r[1], r[2], r[3]};
    };
    auto s_of = [&](const std::vector<double>& state) {
        const std::array<double, 4> w{state[0] - eq.e_b[0], state[1] - eq.e_b[1],
                                      state[2] - eq.e_b[2], state[3] - eq.e_b[3]};
        return q_homogeneous(p, volume, w);
    };

    std::vector<EnvelopePoint> out;
    double t = 0.0;
    out.push_back({0.0, s_of(y), s0, s0});
    while (t < t_end - 1e-12) {
        const double t_next = std::min(t + out_every, t_end);
        y = dp54_integrate(rhs, y, t, t_next);
        t = t_next;
        EnvelopePoint pt;
        pt.t = t;
        pt.s = s_of(y);
        pt.lower = s0 / (1.0 + 3.0 * c.K4 * s0 * t);
        pt.upper = s0 / (1.0 + c.K4 * s0 * t);
        out.push_back(pt);
    }
    return out;
}

} // namespace rgs
