#include "nlosc/closed_form.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlosc/dynamics.hpp"

namespace nlosc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sqr(double v) { return v * v; }

double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}

void require_reachable(const ModelParams& params, double C, double x0) {
    const double p2 = p_squared(params, C, x0);
    const double scale = std::abs(C) * (1.0 + std::abs(params.lambda) * x0 * x0) +
                         sqr(params.alpha) / std::abs(params.lambda) + 2.0 * params.beta * std::abs(x0);
    if (p2 < -1e-10 * scale) {
        throw UnreachableError("x0 = " + std::to_string(x0) + " is not reachable at this energy (p^2 < 0)");
    }
}

// Picks the barrier side for the Cosh/Exp families.
bool choose_right(BranchSide branch, double x0, double B) {
    const bool right_of_top = x0 >= B;
    if (branch == BranchSide::Right && !right_of_top) {
        throw BranchError("x0 lies left of the barrier but the right branch was requested");
    }
    if (branch == BranchSide::Left && right_of_top && x0 != B) {
        throw BranchError("x0 lies right of the barrier but the left branch was requested");
    }
    if (branch == BranchSide::Left) {
        return false;
    }
    return right_of_top;
}

// (-alpha^2 + sqrt(alpha^4 + 4 lambda beta^2 m)) / (2 m), rationalized so it
// stays accurate when beta is small; valid for either sign of m.
double plus_root(double a2, double lb2, double m) {
    const double rad = a2 * a2 + 4.0 * lb2 * m;
    if (rad < 0.0) {
        throw ConsistencyError("negative radicand in the frequency relation");
    }
    return 2.0 * lb2 / (a2 + std::sqrt(rad));
}

}  // namespace

std::string_view to_string(Family family) {
    switch (family) {
    case Family::Sin: return "sin";
    case Family::Quadratic: return "quadratic";
    case Family::Linear: return "linear";
    case Family::CoshRight: return "cosh_right";
    case Family::CoshLeft: return "cosh_left";
    case Family::ExpRight: return "exp_right";
    case Family::ExpLeft: return "exp_left";
    case Family::Sinh: return "sinh";
    }
    return "unknown";
}

Family parse_family(std::string_view text) {
    for (Family f : {Family::Sin, Family::Quadratic, Family::Linear, Family::CoshRight, Family::CoshLeft,
                     Family::ExpRight, Family::ExpLeft, Family::Sinh}) {
        if (to_string(f) == text) {
            return f;
        }
    }
    throw DomainError("unknown solution family '" + std::string(text) + "'");
}

ClosedFormSolution from_energy(const ModelParams& params, double energy, BranchSide branch, double x0, double t0,
                               Direction direction) {
    if (params.uses_sqrt_term()) {
        throw BranchError("closed-form solutions exist only for the first oscillator; use the implicit producer");
    }
    const EnergyRegime regime = classify_energy(params, energy);
    require_inside(params, x0);
    if (regime.row == RegimeRow::BelowMinimum) {
        throw UnreachableError("E < V_min: no motion at this energy");
    }
    require_reachable(params, regime.C, x0);

    const double lambda = params.lambda;
    const double beta = params.beta;
    const double dir = sign_of(direction);
    const double omega2 = std::abs(lambda * regime.C);
    const double omega = std::sqrt(omega2);
    const double amplitude = regime.Delta ? std::sqrt(std::abs(*regime.Delta)) / (2.0 * omega2) : 0.0;

    ClosedFormSolution sol;
    sol.omega = omega;
    switch (regime.row) {
    case RegimeRow::Equilibrium:
    case RegimeRow::G1PosBounded:
    case RegimeRow::G1NegBounded: {
        sol.family = Family::Sin;
        sol.A = regime.row == RegimeRow::Equilibrium ? 0.0 : amplitude;
        sol.B = beta / omega2;
        double theta = 0.0;
        if (sol.A > 0.0) {
            const double s = std::clamp((x0 - sol.B) / sol.A, -1.0, 1.0);
            theta = dir > 0.0 ? std::asin(s) : std::numbers::pi - std::asin(s);
        }
        sol.phi = wrap_phase(theta - omega * t0);
        sol.x_range = {sol.B - sol.A, sol.B + sol.A};
        break;
    }
    case RegimeRow::G1PosAsymptote: {
        if (beta > 0.0) {
            sol.family = Family::Quadratic;
            sol.omega = 0.0;
            sol.A = std::sqrt(beta / 2.0);
            sol.B = -sqr(params.alpha) / (2.0 * lambda * beta);
            const double r = std::sqrt(std::max(0.0, x0 - sol.B));
            sol.phi = dir * r - sol.A * t0;
            sol.x_range = {sol.B, kInf};
        } else {
            sol.family = Family::Linear;
            sol.omega = 0.0;
            sol.A = dir * params.alpha / std::sqrt(lambda);
            sol.B = x0 - sol.A * t0;
            sol.x_range = {-kInf, kInf};
        }
        break;
    }
    case RegimeRow::G1PosBelowMax: {
        sol.B = -beta / omega2;
        const bool right = choose_right(branch, x0, sol.B);
        sol.family = right ? Family::CoshRight : Family::CoshLeft;
        sol.A = right ? amplitude : -amplitude;
        const double ratio = std::max(1.0, (x0 - sol.B) / sol.A);
        const double theta = dir * (right ? 1.0 : -1.0) * std::acosh(ratio);
        sol.phi = theta - omega * t0;
        sol.x_range = right ? Interval{sol.A + sol.B, kInf} : Interval{-kInf, sol.A + sol.B};
        break;
    }
    case RegimeRow::G1PosAtMax: {
        sol.B = -beta / omega2;
        const bool right = choose_right(branch, x0, sol.B);
        sol.family = right ? Family::ExpRight : Family::ExpLeft;
        sol.A = (x0 - sol.B) * std::exp(-omega * t0);
        sol.phi = 0.0;
        sol.x_range = right ? Interval{sol.B, kInf} : Interval{-kInf, sol.B};
        break;
    }
    case RegimeRow::G1PosAboveMax: {
        sol.family = Family::Sinh;
        sol.B = -beta / omega2;
        sol.A = dir * amplitude;
        sol.phi = std::asinh((x0 - sol.B) / sol.A) - omega * t0;
        sol.x_range = {-kInf, kInf};
        break;
    }
    default:
        throw BranchError("regime has no closed-form family");
    }
    return sol;
}

PhasePoint eval(const ClosedFormSolution& sol, double t) {
    const double w = sol.omega;
    const double theta = w * t + sol.phi;
    switch (sol.family) {
    case Family::Sin:
        return {sol.A * std::sin(theta) + sol.B, sol.A * w * std::cos(theta)};
    case Family::Quadratic: {
        const double s = sol.A * t + sol.phi;
        return {s * s + sol.B, 2.0 * sol.A * s};
    }
    case Family::Linear:
        return {sol.A * t + sol.B, sol.A};
    case Family::CoshRight:
    case Family::CoshLeft:
        return {sol.A * std::cosh(theta) + sol.B, sol.A * w * std::sinh(theta)};
    case Family::ExpRight:
    case Family::ExpLeft: {
        const double e = sol.A * std::exp(theta);
        return {e + sol.B, w * e};
    }
    case Family::Sinh:
        return {sol.A * std::sinh(theta) + sol.B, sol.A * w * std::cosh(theta)};
    }
    return {0.0, 0.0};
}

double eval_acceleration(const ClosedFormSolution& sol, double t) {
    const double w2 = sol.omega * sol.omega;
    const double theta = sol.omega * t + sol.phi;
    switch (sol.family) {
    case Family::Sin:
        return -sol.A * w2 * std::sin(theta);
    case Family::Quadratic:
        return 2.0 * sol.A * sol.A;
    case Family::Linear:
        return 0.0;
    case Family::CoshRight:
    case Family::CoshLeft:
        return sol.A * w2 * std::cosh(theta);
    case Family::ExpRight:
    case Family::ExpLeft:
        return sol.A * w2 * std::exp(theta);
    case Family::Sinh:
        return sol.A * w2 * std::sinh(theta);
    }
    return 0.0;
}

OmegaSquaredForms omega_squared_forms(const ModelParams& params, Family family, double A, double B) {
    const double a2 = sqr(params.alpha);
    const double lambda = params.lambda;
    const double lb2 = lambda * sqr(params.beta);
    const double A2 = A * A;
    const double B2 = B * B;
    OmegaSquaredForms forms{};
    switch (family) {
    case Family::Sin: {
        // lambda > 0: alpha^2/(1 + lambda(A^2 - B^2)) = (alpha^2 + sqrt(alpha^4 + 4 lambda beta^2 (1 + lambda A^2)))/(2(1 + lambda A^2))
        // lambda < 0: the same with lambda = -|lambda|.
        const double m = 1.0 + lambda * A2;
        const double rad = a2 * a2 + 4.0 * lb2 * m;
        if (rad < 0.0 || m <= 0.0) {
            throw ConsistencyError("negative radicand in the Sin frequency relation");
        }
        forms.from_amplitude_offset = a2 / (1.0 + lambda * (A2 - B2));
        forms.closed = (a2 + std::sqrt(rad)) / (2.0 * m);
        break;
    }
    case Family::CoshRight:
    case Family::CoshLeft: {
        const double m = 1.0 + lambda * A2;
        forms.from_amplitude_offset = -a2 / (1.0 + lambda * (A2 - B2));
        forms.closed = plus_root(a2, lb2, m);
        break;
    }
    case Family::ExpRight:
    case Family::ExpLeft:
        forms.from_amplitude_offset = -a2 / (1.0 - lambda * B2);
        forms.closed = plus_root(a2, lb2, 1.0);
        break;
    case Family::Sinh: {
        const double m = 1.0 - lambda * A2;
        forms.from_amplitude_offset = -a2 / (1.0 - lambda * (A2 + B2));
        const double split = lambda * B2 - (lambda * A2 - 1.0);
        if (split == 0.0) {
            throw ConsistencyError("lambda B^2 = lambda A^2 - 1: frequency relation is degenerate");
        }
        if (split > 0.0) {
            forms.closed = plus_root(a2, lb2, m);
        } else {
            const double rad = a2 * a2 + 4.0 * lb2 * m;
            if (rad < 0.0) {
                throw ConsistencyError("negative radicand in the Sinh frequency relation");
            }
            forms.closed = (-a2 - std::sqrt(rad)) / (2.0 * m);
        }
        break;
    }
    case Family::Quadratic:
    case Family::Linear:
        throw ConsistencyError(std::string(to_string(family)) + " family has no frequency");
    }
    if (!(forms.closed > 0.0) || !(forms.from_amplitude_offset > 0.0)) {
        throw ConsistencyError("(A, B) inconsistent with the family: omega^2 <= 0");
    }
    return forms;
}

double omega_of_amplitude(const ModelParams& params, Family family, double A, double B) {
    return std::sqrt(omega_squared_forms(params, family, A, B).closed);
}

double tabulated_amplitude(const ModelParams& params, Family family, double omega) {
    const double a2 = sqr(params.alpha);
    const double w2 = omega * omega;
    const double w4 = w2 * w2;
    const double lambda = params.lambda;
    const double lb2 = lambda * sqr(params.beta);
    double inner = 0.0;
    switch (family) {
    case Family::Sin:
        inner = lambda > 0.0 ? (-w4 + a2 * w2 + lb2) / lambda : (w4 - a2 * w2 - lb2) / -lambda;
        break;
    case Family::CoshRight:
    case Family::CoshLeft:
        inner = (-w4 - a2 * w2 + lb2) / lambda;
        break;
    case Family::Sinh:
        inner = (w4 + a2 * w2 - lb2) / lambda;
        break;
    case Family::Quadratic:
        return std::sqrt(params.beta / 2.0);
    case Family::ExpRight:
    case Family::ExpLeft:
    case Family::Linear:
        throw ConsistencyError("amplitude of the " + std::string(to_string(family)) + " family is free");
    }
    return std::sqrt(std::max(0.0, inner)) / w2;
}

void to_json(nlohmann::json& j, const ClosedFormSolution& sol) {
    auto bound = [](double v) {
        return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "+inf" : "-inf");
    };
    j = nlohmann::json{{"family", std::string(to_string(sol.family))},
                       {"A", sol.A},
                       {"B", sol.B},
                       {"phi", sol.phi},
                       {"omega", sol.omega},
                       {"x_range", {bound(sol.x_range.lower), bound(sol.x_range.upper)}}};
}

}  // namespace nlosc
