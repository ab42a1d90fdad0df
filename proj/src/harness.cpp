#include "nlosc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>

#include "nlosc/implicit.hpp"
#include "nlosc/numerics.hpp"

namespace nlosc::harness {
namespace {

bool is_bounded(RegimeRow row) {
    return row == RegimeRow::G1PosBounded || row == RegimeRow::G1NegBounded || row == RegimeRow::G2PosBounded ||
           row == RegimeRow::G2NegBounded || row == RegimeRow::Equilibrium || row == RegimeRow::BelowMinimum;
}

double relative_drift(const std::vector<Sample>& samples, double energy) {
    double worst = 0.0;
    for (const Sample& s : samples) {
        worst = std::max(worst, std::abs(s.E - energy) / std::max(1.0, std::abs(energy)));
    }
    return worst;
}

}  // namespace

std::string_view to_string(Producer producer) {
    switch (producer) {
    case Producer::Closed: return "closed";
    case Producer::Implicit: return "implicit";
    case Producer::Ode: return "ode";
    }
    return "?";
}

Producer parse_producer(std::string_view text) {
    if (text == "closed") {
        return Producer::Closed;
    }
    if (text == "implicit") {
        return Producer::Implicit;
    }
    if (text == "ode") {
        return Producer::Ode;
    }
    throw DomainError("unknown producer '" + std::string(text) + "' (expected closed, implicit or ode)");
}

Producer analytic_producer(const ModelParams& params) {
    return params.uses_sqrt_term() ? Producer::Implicit : Producer::Closed;
}

double default_start(const ModelParams& params, double energy, BranchSide branch) {
    const EnergyRegime regime = classify_energy(params, energy);
    const PotentialShape shp = shape(params);
    const std::vector<double> tps = turning_points(params, energy);
    switch (regime.row) {
    case RegimeRow::BelowMinimum:
    case RegimeRow::Equilibrium:
    case RegimeRow::G1PosAboveMax:
        return shp.x_min;
    case RegimeRow::G1PosBelowMax:
        return branch == BranchSide::Left ? tps.front() : tps.back();
    case RegimeRow::G1PosAtMax: {
        const double offset = std::max(1.0, std::abs(*shp.x_max));
        return branch == BranchSide::Left ? *shp.x_max - offset : *shp.x_max + offset;
    }
    default:
        return tps.empty() ? shp.x_min : tps.front();
    }
}

OrbitScale orbit_scale(const ModelParams& params, double energy) {
    const EnergyRegime regime = classify_energy(params, energy);
    const double two_pi = 2.0 * std::numbers::pi;
    if (regime.row == RegimeRow::BelowMinimum || regime.row == RegimeRow::Equilibrium) {
        return {true, two_pi / params.alpha};
    }
    if (!params.uses_sqrt_term()) {
        const double omega = std::sqrt(std::abs(params.lambda * regime.C));
        if (is_bounded(regime.row)) {
            return {true, two_pi / omega};
        }
        return {false, omega > 0.0 ? 1.0 / omega : 1.0 / params.alpha};
    }
    if (is_bounded(regime.row)) {
        const ImplicitSolution sol = ImplicitSolution::build(params, energy, default_start(params, energy));
        return {true, 2.0 * *sol.half_period()};
    }
    const double a = 2.0 * params.lambda * (energy - *shape(params).V_plus_inf);
    const double rate = regime.row == RegimeRow::G2PosAtPlusInf ? 0.0 : std::sqrt(std::max(0.0, a));
    return {false, rate > 0.0 ? 1.0 / rate : 1.0 / params.alpha};
}

double default_t_end(const ModelParams& params, double energy) {
    const OrbitScale sc = orbit_scale(params, energy);
    if (sc.bounded) {
        return 5.0 * sc.time;
    }
    // Near a separatrix the e-folding time is long and x runs far out well
    // before four of them, so also stop where |x| first reaches `reach`.
    const double t_max = 4.0 * sc.time;
    const double x0 = default_start(params, energy);
    const double reach = kEscapeGrowth * std::max(1.0, std::abs(x0));
    std::function<double(double)> x_at;
    if (params.uses_sqrt_term()) {
        auto sol = std::make_shared<ImplicitSolution>(ImplicitSolution::build(params, energy, x0));
        x_at = [sol](double t) { return sol->x_of_t(t).x; };
    } else {
        const ClosedFormSolution sol = from_energy(params, energy, BranchSide::Either, x0, 0.0);
        x_at = [sol](double t) { return eval(sol, t).x; };
    }
    constexpr int kScan = 64;
    double lo = 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double hi = t_max * i / kScan;
        if (std::abs(x_at(hi)) >= reach) {
            double a = lo;
            double b = hi;
            for (int k = 0; k < 60; ++k) {
                const double m = 0.5 * (a + b);
                (std::abs(x_at(m)) >= reach ? b : a) = m;
            }
            return b;
        }
        lo = hi;
    }
    return t_max;
}

SolveOptions compare_options() {
    SolveOptions o;
    o.ode.rel_tol = 1e-12;
    o.ode.abs_tol = 1e-14;
    return o;
}

SolveResult solve(const ModelParams& params, double energy, Producer producer, const std::vector<double>& times,
                  const SolveOptions& opts) {
    validate(params);
    if (producer == Producer::Closed && params.uses_sqrt_term()) {
        throw BranchError("the closed producer applies to the original and first oscillators; use implicit or ode");
    }
    if (producer == Producer::Implicit && !params.uses_sqrt_term()) {
        throw BranchError("the implicit producer applies to the second oscillator; use closed or ode");
    }
    const EnergyRegime regime = classify_energy(params, energy);
    if (regime.row == RegimeRow::BelowMinimum) {
        throw UnreachableError("E < V_min: no motion at this energy");
    }
    const double x0 = opts.x0.value_or(default_start(params, energy, opts.branch));

    SolveResult out;
    out.producer = producer;
    switch (producer) {
    case Producer::Closed: {
        const ClosedFormSolution sol = from_energy(params, energy, opts.branch, x0, 0.0, opts.direction);
        const PhasePoint p0 = eval(sol, 0.0);
        out.s0 = {0.0, p0.x, p0.xdot};
        out.samples = kernels::sample_closed_form(params, sol, times, opts.exec);
        out.info = {{"producer", "closed"}, {"solution", sol}};
        break;
    }
    case Producer::Implicit: {
        const ImplicitSolution sol =
            ImplicitSolution::build(params, energy, x0, 0.0, opts.direction, opts.force_quadrature);
        const ImplicitPoint p0 = sol.x_of_t(0.0);
        out.s0 = {0.0, p0.x, p0.xdot};
        out.samples = kernels::sample_implicit(sol, times, opts.exec);
        out.info = {{"producer", "implicit"}, {"solution", sol}};
        break;
    }
    case Producer::Ode: {
        require_inside(params, x0);
        const double p2 = p_squared(params, regime.C, x0);
        out.s0 = {0.0, x0, sign_of(opts.direction) * std::sqrt(std::max(0.0, p2))};
        const Trajectory traj = integrate(params, out.s0, times, opts.ode);
        out.samples = traj.samples;
        out.info = {{"producer", "ode"},
                    {"method", "dormand_prince_5_4"},
                    {"rel_tol", opts.ode.rel_tol},
                    {"abs_tol", opts.ode.abs_tol},
                    {"steps_accepted", traj.steps_accepted},
                    {"steps_rejected", traj.steps_rejected},
                    {"max_energy_drift", traj.max_energy_drift}};
        break;
    }
    }
    out.info["regime"] = regime;
    out.info["s0"] = {{"t", out.s0.t}, {"x", out.s0.x}, {"xdot", out.s0.xdot}};
    return out;
}

ComparisonReport compare(const ModelParams& params, double energy, const std::vector<double>& times,
                         const SolveOptions& opts, const Thresholds& thresholds) {
    validate(params);
    ComparisonReport rep;
    rep.params = params;
    rep.energy = energy;
    rep.regime = classify_energy(params, energy);
    rep.thresholds = thresholds;
    rep.samples = times.size();
    rep.t_end = times.empty() ? 0.0 : times.back();
    if (rep.regime.row == RegimeRow::BelowMinimum || rep.regime.row == RegimeRow::Equilibrium) {
        rep.no_motion = true;
        rep.details = {{"note", rep.regime.row == RegimeRow::BelowMinimum ? "E < V_min: no classical motion"
                                                                           : "E = V_min: rest at x_min"}};
        return rep;
    }

    const Producer analytic = analytic_producer(params);
    const SolveResult a = solve(params, energy, analytic, times, opts);
    const Trajectory ode = integrate(params, a.s0, times, opts.ode);
    rep.producers = {analytic, Producer::Ode};

    for (std::size_t i = 0; i < times.size(); ++i) {
        rep.max_abs_x_error = std::max(rep.max_abs_x_error, std::abs(a.samples[i].x - ode.samples[i].x));
    }
    rep.max_energy_drift = std::max(relative_drift(a.samples, energy), relative_drift(ode.samples, energy));
    std::optional<double> round_trip_raw;

    if (analytic == Producer::Closed) {
        const ClosedFormSolution sol = from_energy(params, energy, opts.branch,
                                                   opts.x0.value_or(default_start(params, energy, opts.branch)), 0.0,
                                                   opts.direction);
        const std::vector<double> res = kernels::closed_form_residuals(params, sol, times, opts.exec);
        rep.residual_max = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
    } else {
        const ImplicitSolution sol =
            ImplicitSolution::build(params, energy, opts.x0.value_or(default_start(params, energy, opts.branch)), 0.0,
                                    opts.direction, opts.force_quadrature);
        const std::vector<double> raw = kernels::implicit_round_trip(sol, times, opts.exec);
        const std::vector<double> res = kernels::implicit_round_trip_excess(sol, times, opts.exec);
        rep.residual_max = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
        round_trip_raw = raw.empty() ? 0.0 : *std::max_element(raw.begin(), raw.end());
    }

    rep.pass = rep.max_abs_x_error <= thresholds.x_error && rep.max_energy_drift <= thresholds.energy_drift &&
               rep.residual_max <= thresholds.residual;
    rep.details = {{"analytic", a.info},
                   {"ode",
                    {{"steps_accepted", ode.steps_accepted},
                     {"steps_rejected", ode.steps_rejected},
                     {"max_energy_drift", ode.max_energy_drift},
                     {"rel_tol", opts.ode.rel_tol},
                     {"abs_tol", opts.ode.abs_tol}}}};
    if (round_trip_raw) {
        rep.details["round_trip_raw_max"] = *round_trip_raw;
    }
    return rep;
}

void to_json(nlohmann::json& j, const ComparisonReport& r) {
    std::vector<std::string> names;
    for (Producer p : r.producers) {
        names.emplace_back(to_string(p));
    }
    j = nlohmann::json{{"params", r.params},
                       {"energy", r.energy},
                       {"regime", r.regime},
                       {"producers", names},
                       {"no_motion", r.no_motion},
                       {"samples", r.samples},
                       {"t_end", r.t_end},
                       {"max_abs_x_error", r.max_abs_x_error},
                       {"max_energy_drift", r.max_energy_drift},
                       {"residual_max", r.residual_max},
                       {"thresholds",
                        {{"x_error", r.thresholds.x_error},
                         {"energy_drift", r.thresholds.energy_drift},
                         {"residual", r.thresholds.residual}}},
                       {"verdict", r.pass ? "pass" : "fail"},
                       {"details", r.details}};
}

FigureSpec figure_spec(int id) {
    FigureSpec f;
    f.id = id;
    switch (id) {
    case 1:
        f.solid = {OscillatorKind::Generalized1, 1.0, 0.45, -1.0};
        f.x_lo = -0.99;
        f.x_hi = 0.99;
        f.title = "first oscillator, alpha = -lambda = 1, beta = 0.45";
        break;
    case 2:
        f.solid = {OscillatorKind::Generalized1, 1.0, 1.0, 1.0};
        f.x_lo = -6.0;
        f.x_hi = 6.0;
        f.title = "first oscillator, alpha = lambda = 1, beta = 1";
        break;
    case 3:
        f.solid = {OscillatorKind::Generalized2, 1.0, 1.0, -1.0};
        f.x_lo = -0.99;
        f.x_hi = 0.99;
        f.title = "second oscillator, alpha = -lambda = 1, beta = 1";
        break;
    case 4:
        f.solid = {OscillatorKind::Generalized2, 1.0, 0.5, 0.5};
        f.x_lo = -8.0;
        f.x_hi = 8.0;
        f.title = "second oscillator, alpha = 1, lambda = 0.5, beta = 0.5";
        break;
    default:
        throw DomainError("figure id must be 1, 2, 3 or 4");
    }
    f.dashed = f.solid;
    f.dashed.beta = 0.0;
    return f;
}

Landmarks locate_landmarks(const ModelParams& params, const std::vector<double>& xs, const std::vector<double>& V) {
    Landmarks lm;
    numerics::RootOptions opts;
    opts.x_tol = 1e-16;
    opts.max_iter = 400;
    auto V_of = [&params](double x) { return potential(params, x); };
    auto dV_of = [&params](double x) { return potential_derivative(params, x); };

    const std::size_t n = xs.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (V[i] == 0.0) {
            lm.zeros.push_back(xs[i]);
        } else if (i + 1 < n && V[i + 1] != 0.0 && std::signbit(V[i]) != std::signbit(V[i + 1])) {
            lm.zeros.push_back(numerics::find_root(V_of, xs[i], xs[i + 1], opts).x);
        }
    }

    std::vector<double> dV(n);
    for (std::size_t i = 0; i < n; ++i) {
        dV[i] = dV_of(xs[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const bool down_up = dV[i] < 0.0 && dV[i + 1] >= 0.0;
        const bool up_down = dV[i] > 0.0 && dV[i + 1] <= 0.0;
        if (!down_up && !up_down) {
            continue;
        }
        const double x = dV[i + 1] == 0.0 ? xs[i + 1] : numerics::find_root(dV_of, xs[i], xs[i + 1], opts).x;
        if (down_up) {
            lm.minima.push_back(x);
            lm.minimum_values.push_back(V_of(x));
        } else {
            lm.maxima.push_back(x);
            lm.maximum_values.push_back(V_of(x));
        }
    }
    // A minimum touching V = 0 is a double zero that the sign scan cannot see.
    for (std::size_t k = 0; k < lm.minima.size(); ++k) {
        const bool listed = std::any_of(lm.zeros.begin(), lm.zeros.end(),
                                        [&](double z) { return std::abs(z - lm.minima[k]) <= 1e-12; });
        if (!listed && std::abs(lm.minimum_values[k]) <= 1e-15) {
            lm.zeros.push_back(lm.minima[k]);
        }
    }
    std::sort(lm.zeros.begin(), lm.zeros.end());

    if (params.lambda > 0.0) {
        constexpr double far = 1e13;
        lm.V_plus_inf = V_of(far);
        lm.V_minus_inf = V_of(-far);
    }
    return lm;
}

FigureData figure_data(int id, const std::vector<double>& xs, kernels::Exec exec) {
    FigureData fd;
    fd.spec = figure_spec(id);
    fd.xs = xs;
    fd.V_solid = kernels::potential_grid(fd.spec.solid, xs, exec);
    fd.V_dashed = kernels::potential_grid(fd.spec.dashed, xs, exec);
    fd.solid = locate_landmarks(fd.spec.solid, xs, fd.V_solid);
    fd.dashed = locate_landmarks(fd.spec.dashed, xs, fd.V_dashed);
    return fd;
}

void to_json(nlohmann::json& j, const Landmarks& lm) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    j = nlohmann::json{{"zeros", lm.zeros},
                       {"minima", lm.minima},
                       {"minimum_values", lm.minimum_values},
                       {"maxima", lm.maxima},
                       {"maximum_values", lm.maximum_values},
                       {"V_plus_inf", opt(lm.V_plus_inf)},
                       {"V_minus_inf", opt(lm.V_minus_inf)}};
}

}  // namespace nlosc::harness
