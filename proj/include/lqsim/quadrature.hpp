#pragma once

#include <cmath>
#include <functional>

#include "lqsim/errors.hpp"

namespace lqsim {

// Adaptive Gauss-Kronrod 15(7) quadrature with interval bisection.
// Error estimate per panel: |GK15 - G7|.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b,
                          double rel_tol = 1e-9, double abs_tol = 1e-14,
                          int max_depth = 50);

namespace detail {

// QUADPACK 15-point Kronrod nodes/weights and embedded 7-point Gauss weights.
inline constexpr double gk15_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double gk15_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double g7_weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelResult {
    double value;
    double error;
};

inline PanelResult gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    double kron = gk15_weights[7] * f(c);
    double gauss = g7_weights[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double x = h * gk15_nodes[i];
        const double fs = f(c - x) + f(c + x);
        kron += gk15_weights[i] * fs;
        if (i % 2 == 1) gauss += g7_weights[i / 2] * fs;
    }
    return {kron * h, std::abs((kron - gauss) * h)};
}

inline double adapt(const std::function<double(double)>& f, double a, double b,
                    double tol, int depth, int max_depth) {
    const PanelResult r = gk15_panel(f, a, b);
    if (r.error <= tol || depth >= max_depth) {
        if (depth >= max_depth && r.error > 1e3 * tol)
            throw integrator_error("integrate_adaptive: max depth reached without convergence");
        return r.value;
    }
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b,
                                 double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const auto coarse = detail::gk15_panel(f, a, b);
    const double scale = std::max(std::abs(coarse.value), abs_tol);
    return detail::adapt(f, a, b, std::max(abs_tol, rel_tol * scale), 0, max_depth);
}

}  // namespace lqsim
