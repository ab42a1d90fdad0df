// Direct numerical treatment of the equations of motion: acceleration, the
// first integral p^2(x), turning points, and an adaptive Dormand-Prince 5(4)
// integrator with dense output. Serves as the independent oracle for the
// analytic producers.
#pragma once

#include <cstddef>
#include <vector>

#include "nlosc/model.hpp"

namespace nlosc {

/// xddot from the Euler-Lagrange equation
///   (1 + lambda x^2) xddot - lambda x xdot^2 + alpha^2 x - beta g(x) = 0,
/// g = 0 (original), 1 - lambda x^2 (first), sqrt(1 + lambda x^2) (second).
/// Throws IntegrationError when 1 + lambda x^2 <= 0.
double acceleration(const ModelParams& params, const State& s);

/// Left-hand side of the Euler-Lagrange equation; zero along exact solutions.
double euler_lagrange_residual(const ModelParams& params, double x, double xdot, double xddot);

/// p^2(x) = C (1 + lambda x^2) + alpha^2/lambda + 2 beta x, with 2 beta x
/// replaced by 2 beta x sqrt(1 + lambda x^2) for the second oscillator.
/// Equals xdot^2 on the energy shell.
double p_squared(const ModelParams& params, double C, double x);

/// Sorted real roots of p^2 = 0 inside the position domain. A tangency
/// (E = V_max, E = V_min) is reported once. Analytic for the first
/// oscillator, bracketed root finding for the second.
std::vector<double> turning_points(const ModelParams& params, double energy);

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;           // 0 picks a step from the local scales
    std::size_t max_steps = 50'000'000;
};

struct Sample {
    double t = 0.0;
    double x = 0.0;
    double xdot = 0.0;
    double E = 0.0;
};

struct Trajectory {
    std::vector<Sample> samples;
    double E0 = 0.0;
    double max_energy_drift = 0.0;  // max |E - E0| / max(1, |E0|) over samples
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
};

/// Integrates forward from s0 and reports the state at each requested time
/// (sorted, >= s0.t) through the 4th-order continuous extension.
/// Throws DomainError for tolerances outside [1e-14, 1e-3] or unsorted times,
/// IntegrationError on step-size underflow or a mass singularity.
Trajectory integrate(const ModelParams& params, const State& s0, const std::vector<double>& times,
                     const IntegrateOptions& opts = {});

/// Same, sampling every accepted step up to t_end.
Trajectory integrate(const ModelParams& params, const State& s0, double t_end, const IntegrateOptions& opts = {});

}  // namespace nlosc
