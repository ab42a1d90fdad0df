// Small numerical building blocks: bracketed root finding and adaptive
// Gauss-Kronrod quadrature.
#pragma once

#include <cstddef>
#include <functional>

namespace nlosc::numerics {

struct RootOptions {
    double x_tol = 1e-12;        // absolute, scaled by max(1, |x|)
    double f_tol = 0.0;          // stop once |f| <= f_tol
    std::size_t max_iter = 200;
};

struct RootResult {
    double x;
    double fx;
    std::size_t iterations;
};

/// Bisection-safeguarded secant on a bracket [lo, hi] with f(lo) f(hi) <= 0.
/// Throws ConvergenceError if the bracket is invalid or the tolerance is not
/// met within max_iter iterations.
RootResult find_root(const std::function<double(double)>& f, double lo, double hi, const RootOptions& opts = {});

/// Grows [start, start + step * 2^k] until f changes sign. Returns the bracket
/// (lo, hi) with lo < hi, or (start, start) when f(start) == 0. step may be
/// negative. Throws ConvergenceError after max_doublings or on overflow.
std::pair<double, double> expand_bracket(const std::function<double(double)>& f, double start, double step,
                                         std::size_t max_doublings = 200);

struct QuadratureResult {
    double value;
    double error_estimate;
    std::size_t evaluations;
};

/// Adaptive 7/15-point Gauss-Kronrod integration of f on [a, b].
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-13,
                                double rel_tol = 1e-12, std::size_t max_intervals = 2000);

}  // namespace nlosc::numerics
