#include "nlosc/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "nlosc/numerics.hpp"
#include "nlosc/potential.hpp"

namespace nlosc {
namespace {

double sqr(double v) { return v * v; }

// beta g(x) in the Euler-Lagrange equation.
double drive(const ModelParams& params, double x) {
    const double m = mass_factor(params, x);
    if (params.uses_sqrt_term()) {
        return params.beta * std::sqrt(m);
    }
    return params.beta * (1.0 - params.lambda * x * x);
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
// Dense output (Hairer, Norsett, Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using Vec = std::array<double, 2>;

class Stepper {
public:
    explicit Stepper(const ModelParams& params) : params_(params), lower_(validate(params).lower) {}

    // Right-hand side; NaN outside the usable domain so the step gets rejected.
    Vec rhs(double t, const Vec& y) const {
        const double m = mass_factor(params_, y[0]);
        if (params_.lambda < 0.0 && !(std::abs(y[0]) < -lower_ * (1.0 - kWallMargin))) {
            return {NAN, NAN};
        }
        if (!(m > 0.0)) {
            return {NAN, NAN};
        }
        (void)t;
        const double acc =
            (params_.lambda * y[0] * sqr(y[1]) - sqr(params_.alpha) * y[0] + drive(params_, y[0])) / m;
        return {y[1], acc};
    }

private:
    const ModelParams& params_;
    double lower_;
};

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
    Vec out = y;
    for (const auto& [coef, k] : terms) {
        out[0] += h * coef * (*k)[0];
        out[1] += h * coef * (*k)[1];
    }
    return out;
}

void check_options(const IntegrateOptions& opts) {
    auto ok = [](double tol) { return tol >= 1e-14 && tol <= 1e-3; };
    if (!ok(opts.rel_tol) || !ok(opts.abs_tol)) {
        throw DomainError("integrator tolerances must lie in [1e-14, 1e-3]");
    }
}

Trajectory run(const ModelParams& params, const State& s0, double t_end, const std::vector<double>* times,
               const IntegrateOptions& opts) {
    check_options(opts);
    require_inside(params, s0.x);
    if (times != nullptr) {
        if (!std::is_sorted(times->begin(), times->end())) {
            throw DomainError("sample times must be sorted");
        }
        if (!times->empty() && times->front() < s0.t) {
            throw DomainError("sample times must not precede the initial time");
        }
    }
    if (t_end < s0.t) {
        throw DomainError("integration runs forward in time only");
    }
    (void)acceleration(params, s0);

    const Stepper f(params);
    Trajectory traj;
    traj.E0 = energy_from_state(params, s0);

    auto record = [&](double t, const Vec& y) {
        Sample smp{t, y[0], y[1], energy_from_state(params, State{t, y[0], y[1]})};
        traj.max_energy_drift =
            std::max(traj.max_energy_drift, std::abs(smp.E - traj.E0) / std::max(1.0, std::abs(traj.E0)));
        traj.samples.push_back(smp);
    };

    std::size_t next = 0;
    double t = s0.t;
    Vec y{s0.x, s0.xdot};
    if (times != nullptr) {
        while (next < times->size() && (*times)[next] == t) {
            record(t, y);
            ++next;
        }
    } else {
        record(t, y);
    }
    if (t_end == t) {
        return traj;
    }

    auto scaled_norm = [&](const Vec& err, const Vec& y0, const Vec& y1) {
        double acc = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            acc += sqr(err[i] / sc);
        }
        return std::sqrt(acc / 2.0);
    };

    Vec k1 = f.rhs(t, y);
    double h = opts.initial_step;
    if (h <= 0.0) {
        // Hairer's starting-step heuristic, first stage only.
        const double d0 = scaled_norm(y, y, y);
        const double d1n = scaled_norm(k1, y, y);
        h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h = std::min(h, t_end - t);
    }
    double err_prev = 1e-4;
    bool rejected_last = false;

    while (t < t_end) {
        if (traj.steps_accepted + traj.steps_rejected >= opts.max_steps) {
            throw IntegrationError("maximum number of steps exceeded");
        }
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < h_min) {
            throw IntegrationError("step size underflow at t = " + std::to_string(t) + ", x = " + std::to_string(y[0]));
        }
        const bool last = t + h >= t_end;
        if (last) {
            h = t_end - t;
        }

        const Vec k2 = f.rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}));
        const Vec k3 = f.rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const Vec k4 = f.rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec k5 = f.rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec k6 = f.rhs(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Vec y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const Vec k7 = f.rhs(t + h, y1);

        Vec err{};
        for (int i = 0; i < 2; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        double en = scaled_norm(err, y, y1);
        if (!std::isfinite(en) || !std::isfinite(y1[0]) || !std::isfinite(y1[1])) {
            en = 1e10;
        }

        if (en <= 1.0) {
            const double t_new = last ? t_end : t + h;
            // Dense output between t and t_new.
            if (times != nullptr) {
                while (next < times->size() && (*times)[next] <= t_new) {
                    const double ts = (*times)[next];
                    const double th = (ts - t) / h;
                    const double th1 = 1.0 - th;
                    Vec ys{};
                    for (int i = 0; i < 2; ++i) {
                        const double r1 = y[i];
                        const double ydiff = y1[i] - y[i];
                        const double bspl = h * k1[i] - ydiff;
                        const double r3 = ydiff;
                        const double r4 = bspl;
                        const double r5 = ydiff - h * k7[i] - bspl;
                        const double r6 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                               d7 * k7[i]);
                        ys[i] = r1 + th * (r3 + th1 * (r4 + th * (r5 + th1 * r6)));
                    }
                    if (ts == t_new) {
                        ys = y1;
                    }
                    record(ts, ys);
                    ++next;
                }
            }
            t = t_new;
            y = y1;
            k1 = k7;
            ++traj.steps_accepted;
            if (times == nullptr) {
                record(t, y);
            }
            // PI controller (beta = 0.04) as in DOPRI5.
            double fac = 0.9 * std::pow(en, -0.2 + 0.04 * 0.75) * std::pow(err_prev, 0.04);
            fac = std::clamp(fac, 0.2, 10.0);
            if (rejected_last) {
                fac = std::min(fac, 1.0);
            }
            err_prev = std::max(en, 1e-4);
            rejected_last = false;
            if (!last) {
                h *= fac;
            }
        } else {
            ++traj.steps_rejected;
            rejected_last = true;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
    }
    return traj;
}

}  // namespace

double acceleration(const ModelParams& params, const State& s) {
    const double m = mass_factor(params, s.x);
    if (!(m > 0.0)) {
        throw IntegrationError("mass singularity: 1 + lambda x^2 <= 0 at x = " + std::to_string(s.x));
    }
    return (params.lambda * s.x * sqr(s.xdot) - sqr(params.alpha) * s.x + drive(params, s.x)) / m;
}

double euler_lagrange_residual(const ModelParams& params, double x, double xdot, double xddot) {
    return mass_factor(params, x) * xddot - params.lambda * x * sqr(xdot) + sqr(params.alpha) * x - drive(params, x);
}

double p_squared(const ModelParams& params, double C, double x) {
    const double m = mass_factor(params, x);
    const double linear = params.uses_sqrt_term() ? 2.0 * params.beta * x * std::sqrt(m) : 2.0 * params.beta * x;
    return C * m + sqr(params.alpha) / params.lambda + linear;
}

std::vector<double> turning_points(const ModelParams& params, double energy) {
    const PositionDomain dom = validate(params);
    const EnergyRegime regime = classify_energy(params, energy);
    const PotentialShape shp = shape(params);
    if (regime.row == RegimeRow::BelowMinimum) {
        return {};
    }
    if (regime.row == RegimeRow::Equilibrium) {
        return {shp.x_min};
    }
    std::vector<double> roots;
    auto keep = [&](double x) {
        if (dom.contains(x)) {
            roots.push_back(x);
        }
    };

    if (!params.uses_sqrt_term()) {
        // lambda C x^2 + 2 beta x + (C + alpha^2/lambda) = 0, discriminant -Delta.
        const double C = regime.C;
        const double A2 = params.lambda * C;
        const double B1 = 2.0 * params.beta;
        const double C0 = C + sqr(params.alpha) / params.lambda;
        const double Delta = *regime.Delta;
        const double scale = sqr(sqr(params.alpha)) + 4.0 * std::abs(params.lambda) * sqr(params.beta);
        if (regime.row == RegimeRow::G1PosAtMax || std::abs(Delta) <= 1e-12 * scale) {
            keep(regime.row == RegimeRow::G1PosAtMax ? *shp.x_max : -params.beta / A2);
        } else if (A2 == 0.0) {
            if (B1 > 0.0) {
                keep(-C0 / B1);
            }
        } else if (Delta < 0.0) {
            const double q = -0.5 * (B1 + std::sqrt(-Delta));
            keep(q / A2);
            if (q != 0.0) {
                keep(C0 / q);
            }
        }
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    // Second oscillator: E - V(x) changes sign once on each side of x_min.
    auto gap = [&](double x) { return energy - potential(params, x); };
    numerics::RootOptions opts;
    opts.x_tol = 1e-15;
    opts.max_iter = 400;
    const double x_min = shp.x_min;
    if (params.lambda < 0.0) {
        const double wall = usable_limit(params);
        if (gap(-wall) < 0.0) {
            keep(numerics::find_root(gap, -wall, x_min, opts).x);
        }
        if (gap(wall) < 0.0) {
            keep(numerics::find_root(gap, x_min, wall, opts).x);
        }
        return roots;
    }
    const double step = std::max(1.0, std::abs(x_min));
    if (table_row(regime.row) == 1) {
        const auto [lo, hi] = numerics::expand_bracket(gap, x_min, step);
        keep(numerics::find_root(gap, lo, hi, opts).x);
    }
    const bool left = regime.row == RegimeRow::G2PosBounded || regime.row == RegimeRow::G2PosBetween ||
                      (regime.row == RegimeRow::G2PosAtPlusInf && params.beta > 0.0);
    if (left) {
        const auto [lo, hi] = numerics::expand_bracket(gap, x_min, -step);
        roots.insert(roots.begin(), numerics::find_root(gap, lo, hi, opts).x);
    }
    return roots;
}

Trajectory integrate(const ModelParams& params, const State& s0, const std::vector<double>& times,
                     const IntegrateOptions& opts) {
    const double t_end = times.empty() ? s0.t : std::max(s0.t, times.back());
    return run(params, s0, t_end, &times, opts);
}

Trajectory integrate(const ModelParams& params, const State& s0, double t_end, const IntegrateOptions& opts) {
    return run(params, s0, t_end, nullptr, opts);
}

}  // namespace nlosc
