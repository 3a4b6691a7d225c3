#pragma once
// Adaptive Dormand-Prince 5(4) integrator for small ODE systems.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rgs {

/// Integrates y' = f(t, y) from t0 to t1 with embedded 5(4) error control.
/// Throws std::runtime_error if the step size collapses.
inline std::vector<double> dp54_integrate(
    const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
    std::vector<double> y, double t0, double t1, double rtol = 1e-12,
    double atol = 1e-12) {
    const std::size_t n = y.size();
    if (t1 <= t0) return y;
    double t = t0;
    double h = std::min(1e-3, t1 - t0);

    auto scaled_err = [&](const std::vector<double>& e,
                          const std::vector<double>& ya,
                          const std::vector<double>& yb) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = atol + rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            const double q = e[i] / sc;
            s += q * q;
        }
        return std::sqrt(s / n);
    };

    std::vector<double> k1 = f(t, y);
    int rejected_in_a_row = 0;
    while (t < t1) {
        h = std::min(h, t1 - t);
        std::vector<double> w(n);

        auto stage = [&](const std::vector<std::pair<double, const std::vector<double>*>>& terms) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                for (const auto& [coef, kv] : terms) acc += h * coef * (*kv)[i];
                w[i] = acc;
            }
            return w;
        };

        const std::vector<double> k2 = f(t + h / 5.0, stage({{1.0 / 5, &k1}}));
        const std::vector<double> k3 =
            f(t + 3.0 * h / 10.0, stage({{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
        const std::vector<double> k4 = f(
            t + 4.0 * h / 5.0,
            stage({{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
        const std::vector<double> k5 =
            f(t + 8.0 * h / 9.0, stage({{19372.0 / 6561, &k1},
                                        {-25360.0 / 2187, &k2},
                                        {64448.0 / 6561, &k3},
                                        {-212.0 / 729, &k4}}));
        const std::vector<double> k6 = f(t + h, stage({{9017.0 / 3168, &k1},
                                                       {-355.0 / 33, &k2},
                                                       {46732.0 / 5247, &k3},
                                                       {49.0 / 176, &k4},
                                                       {-5103.0 / 18656, &k5}}));
        std::vector<double> y5(n);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] +
                                125.0 / 192 * k4[i] - 2187.0 / 6784 * k5[i] +
                                11.0 / 84 * k6[i]);
        const std::vector<double> k7 = f(t + h, y5);
        std::vector<double> err(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double y4 = y[i] + h * (5179.0 / 57600 * k1[i] +
                                          7571.0 / 16695 * k3[i] +
                                          393.0 / 640 * k4[i] -
                                          92097.0 / 339200 * k5[i] +
                                          187.0 / 2100 * k6[i] + 1.0 / 40 * k7[i]);
            err[i] = y5[i] - y4;
        }
        const double e = scaled_err(err, y, y5);
        if (e <= 1.0) {
            t += h;
            y = std::move(y5);
            k1 = k7; // first-same-as-last
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 60) {
            throw std::runtime_error("dp54_integrate: step control failed");
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(e, 1e-10), -0.2), 0.2, 5.0);
        h *= factor;
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw std::runtime_error("dp54_integrate: step size underflow");
    }
    return y;
}

} // namespace rgs
