#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

namespace pastent {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 50;
    // Probability mass discarded when a caller truncates an infinite upper
    // limit. integrate() itself only sees finite intervals; see
    // measures::effective_upper.
    double tail_cut = 1e-12;

    void validate() const;
};

struct RootConfig {
    double x_tol = 1e-12;
    int max_iter = 200;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double err_est = 0.0;
};

using RealFunction = std::function<double(double)>;

/// Adaptive quadrature of f over the finite interval [a, b].
///
/// Each panel uses a 15-point Gauss-Kronrod rule whose nodes are strictly
/// interior, so f is never evaluated at a or b. Before subdividing, the
/// interval is re-parameterized through a polynomial map whose derivative
/// vanishes to fourth order at both ends; integrable endpoint singularities
/// of the type x^(p-1) * log(x), p > 0, then converge within the depth
/// budget. Panels are split worst-first until the summed error estimate
/// meets max(abs_tol, rel_tol * |value|).
///
/// Throws accuracy_error (carrying the partial value and its estimate) when
/// the worst panel reaches max_depth while the estimate is above tolerance,
/// and domain_error if f returns a non-finite value at an evaluation node.
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureConfig& cfg = {});

/// Root of g on [lo, hi], requiring g(lo) * g(hi) <= 0.
///
/// Bisection with secant acceleration; every iterate keeps a valid sign
/// bracket, and a bisection step is forced whenever the accelerated step
/// leaves the bracket or fails to shrink it. Returns a point whose bracket
/// width is at most x_tol * max(1, |x|).
double find_root(const RealFunction& g, double lo, double hi,
                 const RootConfig& cfg = {});

/// Central difference (f(t+h) - f(t-h)) / (2h). Evaluation failures in f
/// propagate unchanged.
double central_diff(const RealFunction& f, double t, double h);

/// Step size used for finite-difference checks on entropy curves.
inline double ode_check_step(double t) {
    return 1e-4 * std::max(1.0, std::fabs(t));
}

}  // namespace pastent
