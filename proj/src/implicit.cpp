#include "nlosc/implicit.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlosc/dynamics.hpp"
#include "nlosc/numerics.hpp"

namespace nlosc {
namespace {

constexpr double kPi = std::numbers::pi;

double sqr(double v) { return v * v; }

// arctanh of an argument with |z| > 1, i.e. arccoth(z).
double arccoth(double z) {
    const double excess = std::max(std::abs(z) - 1.0, DBL_MIN);
    return std::copysign(0.5 * std::log1p(2.0 / excess), z);
}

double p2_scale(const ModelParams& params, double C, double x) {
    return std::abs(C) * (1.0 + std::abs(params.lambda) * x * x) + sqr(params.alpha) / std::abs(params.lambda) +
           2.0 * params.beta * std::abs(x);
}

}  // namespace

std::string_view to_string(ImplicitMethod method) {
    return method == ImplicitMethod::ClosedForm ? "closed_form" : "quadrature";
}

std::string_view to_string(FirstTerm term) {
    switch (term) {
    case FirstTerm::I11: return "I11";
    case FirstTerm::I12: return "I12";
    case FirstTerm::I13: return "I13";
    }
    return "?";
}

std::string_view to_string(SecondTerm term) {
    switch (term) {
    case SecondTerm::I21: return "I21";
    case SecondTerm::I22: return "I22";
    case SecondTerm::I23: return "I23";
    }
    return "?";
}

std::pair<double, double> g2_discriminants(const ModelParams& params, double energy) {
    if (!params.uses_sqrt_term() || params.lambda <= 0.0) {
        throw DomainError("discriminants of the I1/I2 split need the second oscillator with lambda > 0");
    }
    const double C = energy_to_C(params, energy);
    const double sl = std::sqrt(params.lambda);
    const double a2 = sqr(params.alpha);
    const double a = params.lambda * C + 2.0 * params.beta * sl;
    const double b = -2.0 * (a2 - params.beta * sl);
    const double ap = params.lambda * C - 2.0 * params.beta * sl;
    const double bp = 2.0 * (a2 + params.beta * sl);
    const double c = -a2;
    return {4.0 * a * c - b * b, 4.0 * ap * c - bp * bp};
}

ImplicitBranchNeg g2_negative_constants(const ModelParams& params, double energy) {
    if (!params.uses_sqrt_term() || params.lambda >= 0.0) {
        throw DomainError("the L, p, q constants need the second oscillator with lambda < 0");
    }
    const double l = -params.lambda;
    const double sl = std::sqrt(l);
    const double a2 = sqr(params.alpha);
    const double b2 = sqr(params.beta);
    const double C = energy_to_C(params, energy);

    ImplicitBranchNeg k;
    k.S = std::sqrt(l * C * C + 4.0 * b2);
    // S + sqrt(l) C and S - sqrt(l) C multiply to 4 beta^2; form whichever sum
    // does not cancel and divide for the other.
    double sum = 0.0;
    if (C >= 0.0) {
        sum = k.S + sl * C;
        k.d = 4.0 * b2 / sum;
    } else {
        k.d = k.S - sl * C;
        sum = 4.0 * b2 / k.d;
    }
    // sqrt(l)(alpha^2 C + 2 beta^2) - alpha^2 S = 2 beta^2 (sqrt(l) - 2 alpha^2/(S + sqrt(l) C))
    k.R = 2.0 * b2 * (sl - 2.0 * a2 / sum);
    k.L = 2.0 * std::numbers::sqrt2 * b2 / (std::sqrt(k.S) * k.d * std::sqrt(k.R));
    // (l C^2 + 2 beta^2 + sqrt(l) C S)/(2 beta^2) = (S + sqrt(l) C)/(S - sqrt(l) C)
    k.p = sum / k.d;
    k.q = (a2 * sum + 2.0 * b2 * sl) / k.R;
    k.p_plus_q_separate = k.p + k.q;
    k.p_plus_q = k.S / (2.0 * b2 * (l * a2 * C + l * b2 - a2 * a2)) *
                 (l * (a2 * C + b2) * sum + 2.0 * sl * a2 * b2);
    k.kappa = k.R * k.S / (2.0 * l * b2);
    k.c1 = k.L / std::sqrt(k.p_plus_q_separate);
    k.c2 = k.L / std::sqrt(k.p * k.p_plus_q_separate);
    k.z_inf = std::sqrt(k.p_plus_q_separate / k.p);
    k.constants_valid = params.beta > 0.0 && k.R > 0.0 && std::isfinite(k.L) && k.L > 0.0 && k.p > 0.0 &&
                        k.q > 0.0 && std::isfinite(k.c1) && std::isfinite(k.c2) && std::isfinite(k.kappa);
    return k;
}

ImplicitSolution ImplicitSolution::build(const ModelParams& params, double energy, double x_ref, double t_ref,
                                         Direction direction, bool force_quadrature) {
    if (!params.uses_sqrt_term()) {
        throw BranchError("implicit solutions apply to the second oscillator only");
    }
    validate(params);
    ImplicitSolution sol;
    sol.params_ = params;
    sol.regime_ = classify_energy(params, energy);
    if (sol.regime_.row == RegimeRow::BelowMinimum) {
        throw UnreachableError("E < V_min: no motion at this energy");
    }
    if (sol.regime_.row == RegimeRow::Equilibrium) {
        throw UnreachableError("E = V_min: the particle rests at x_min");
    }
    const RegimeRow row = sol.regime_.row;
    const bool snapped = row == RegimeRow::G2PosAtPlusInf || row == RegimeRow::G2PosAtMinusInf;
    sol.C_ = sol.regime_.C;
    sol.energy_ = snapped ? C_to_energy(params, sol.C_) : energy;

    const double lambda = params.lambda;
    const double l = std::abs(lambda);
    const double sl = std::sqrt(l);
    const double a2 = sqr(params.alpha);
    const double beta = params.beta;
    const double E = sol.energy_;
    const double V_min = -sqr(beta) / (2.0 * a2);

    // Roots of p^2 in u: u = (beta sqrt|lambda| +- sqrt(D))/alpha^2 with
    // D = 2 |lambda| alpha^2 (E - V_min); the product is -2 |lambda| E/alpha^2.
    const double D = 2.0 * l * a2 * (E - V_min);
    const double sD = std::sqrt(D);
    sol.u2_ = (beta * sl + sD) / a2;
    sol.u1_ = -2.0 * l * E / (a2 * sol.u2_);

    if (lambda > 0.0) {
        const PotentialShape shp = shape(params);
        ImplicitBranchPos pos;
        pos.a = 2.0 * lambda * (E - *shp.V_plus_inf);
        pos.a_prime = 2.0 * lambda * (E - *shp.V_minus_inf);
        if (row == RegimeRow::G2PosAtPlusInf) {
            pos.a = 0.0;
            if (beta == 0.0) {
                pos.a_prime = 0.0;
            }
        }
        if (row == RegimeRow::G2PosAtMinusInf) {
            pos.a_prime = 0.0;
        }
        pos.b = -2.0 * (a2 - beta * sl);
        pos.b_prime = 2.0 * (a2 + beta * sl);
        pos.c = -a2;
        pos.disc = -8.0 * a2 * lambda * (E - V_min);
        pos.first = pos.a < 0.0 ? FirstTerm::I11 : (pos.a == 0.0 ? FirstTerm::I12 : FirstTerm::I13);
        pos.second = pos.a_prime < 0.0 ? SecondTerm::I21 : (pos.a_prime == 0.0 ? SecondTerm::I22 : SecondTerm::I23);
        sol.one_minus_u2_ = -pos.a / (a2 - beta * sl + sD);
        sol.one_plus_u1_ = -pos.a_prime / (a2 + beta * sl + sD);
        if (pos.a < 0.0) {
            sol.x_right_ = sol.u2_ / (sl * std::sqrt(sol.one_minus_u2_ * (1.0 + sol.u2_)));
        }
        if (pos.a_prime < 0.0) {
            sol.x_left_ = sol.u1_ / (sl * std::sqrt(sol.one_plus_u1_ * (1.0 - sol.u1_)));
        }
        sol.pos_ = pos;
    } else {
        sol.one_minus_u2_ = 1.0 - sol.u2_;
        sol.one_plus_u1_ = 1.0 + sol.u1_;
        sol.x_left_ = sol.u1_ / (sl * std::sqrt(1.0 + sqr(sol.u1_)));
        sol.x_right_ = sol.u2_ / (sl * std::sqrt(1.0 + sqr(sol.u2_)));
        ImplicitBranchNeg neg = g2_negative_constants(params, E);
        if (!neg.constants_valid) {
            sol.method_ = ImplicitMethod::Quadrature;
        }
        sol.neg_ = neg;
    }

    const bool bounded = sol.x_left_ && sol.x_right_;
    if (force_quadrature) {
        if (!bounded) {
            throw BranchError("the quadrature form needs an orbit with two turning points");
        }
        sol.method_ = ImplicitMethod::Quadrature;
    }

    // F at the turning points, from the exact angle values rather than a
    // re-evaluation at rounded positions.
    if (sol.method_ == ImplicitMethod::Quadrature) {
        sol.F_left_ = 0.0;
        sol.F_right_ = numerics::integrate_gk15(
                           [&sol](double theta) {
                               const double um = 0.5 * (sol.u1_ + sol.u2_);
                               const double uh = 0.5 * (sol.u2_ - sol.u1_);
                               const double u = um - uh * std::cos(theta);
                               const double sign = sol.params_.lambda > 0.0 ? -1.0 : 1.0;
                               return 1.0 / (sol.params_.alpha * (1.0 + sign * u * u));
                           },
                           0.0, kPi, 1e-15, 1e-14)
                           .value;
    } else if (lambda < 0.0) {
        sol.F_left_ = 0.0;
        sol.F_right_ = sol.neg_->c1 * kPi;
    } else {
        if (sol.x_left_) {
            sol.F_left_ = sol.F_pos(*sol.x_left_, true);
        }
        if (bounded) {
            sol.F_right_ = sol.F_left_ + 0.5 * kPi / std::sqrt(-sol.pos_->a) + 0.5 * kPi / std::sqrt(-sol.pos_->a_prime);
        } else if (sol.x_right_) {
            sol.F_right_ = sol.F_pos(*sol.x_right_, true);
        }
    }

    sol.dir_ = direction;
    sol.t_ref_ = t_ref;
    sol.x_ref_ = sol.clamp_reachable(x_ref);
    // A reference point a few ulps off a turning point (as produced by another
    // root finder) is the turning point itself; keeping the offset would shift
    // every later reflection by ~sqrt(ulp).
    for (const auto& tp : {sol.x_left_, sol.x_right_}) {
        if (tp && std::abs(sol.x_ref_ - *tp) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(*tp))) {
            sol.x_ref_ = *tp;
        }
    }
    sol.F_ref_ = sol.F(sol.x_ref_);
    sol.K_ = sign_of(direction) * sol.F_ref_ - t_ref;
    return sol;
}

double ImplicitSolution::clamp_reachable(double x) const {
    require_inside(params_, x);
    const bool below = x_left_ && x < *x_left_;
    const bool above = x_right_ && x > *x_right_;
    if (!below && !above) {
        return x;
    }
    const double p2 = p_squared(params_, C_, x);
    if (p2 < -1e-10 * p2_scale(params_, C_, x)) {
        throw UnreachableError("x = " + std::to_string(x) + " lies beyond a turning point (p^2 < 0)");
    }
    return below ? *x_left_ : *x_right_;
}

double ImplicitSolution::F(double x) const {
    x = clamp_reachable(x);
    if (x_left_ && x == *x_left_) {
        return F_left_;
    }
    if (x_right_ && x == *x_right_) {
        return F_right_;
    }
    if (method_ == ImplicitMethod::Quadrature) {
        return F_quad(x);
    }
    return params_.lambda > 0.0 ? F_pos(x, false) : F_neg(x, false);
}

double ImplicitSolution::F_pos(double x, bool at_turning_point) const {
    const ImplicitBranchPos& k = *pos_;
    const double lambda = params_.lambda;
    const double sl = std::sqrt(lambda);
    const double a2 = sqr(params_.alpha);
    const double beta = params_.beta;
    const double s = std::sqrt(1.0 + lambda * x * x);
    const double u = sl * x / s;
    // v = u - 1 and w = u + 1 without cancellation on either side of the origin.
    const double v = x >= 0.0 ? -1.0 / (s * (s + sl * x)) : u - 1.0;
    const double w = x <= 0.0 ? 1.0 / (s * (s - sl * x)) : u + 1.0;
    // R = lambda p^2 / s^2 = -alpha^2 (u - u1)(u - u2)
    const double R = at_turning_point ? 0.0 : std::max(0.0, -a2 * (w - one_plus_u1_) * (v + one_minus_u2_));
    const double abs_disc = std::abs(k.disc);

    double I1 = 0.0;
    switch (k.first) {
    case FirstTerm::I11: {
        const double ra = std::sqrt(-k.a);
        I1 = std::atan2(-(2.0 * k.a + k.b * v), 2.0 * ra * std::sqrt(R)) / (2.0 * ra);
        break;
    }
    case FirstTerm::I12:
        I1 = std::sqrt(R) / (-v * 2.0 * (a2 - beta * sl));
        break;
    case FirstTerm::I13: {
        const double ra = std::sqrt(k.a);
        const double g = 2.0 * k.a + k.b * v;
        const double root = 2.0 * ra * std::sqrt(R);
        const double mag = g < 0.0 ? root - g : abs_disc * v * v / (root + g);
        I1 = -(std::log(std::abs(mag)) - std::log(-v)) / (2.0 * ra);
        break;
    }
    }

    double I2 = 0.0;
    switch (k.second) {
    case SecondTerm::I21: {
        const double ra = std::sqrt(-k.a_prime);
        I2 = std::atan2(2.0 * k.a_prime + k.b_prime * w, 2.0 * ra * std::sqrt(R)) / (2.0 * ra);
        break;
    }
    case SecondTerm::I22:
        I2 = -std::sqrt(R) / (w * 2.0 * (a2 + beta * sl));
        break;
    case SecondTerm::I23: {
        const double ra = std::sqrt(k.a_prime);
        const double g = 2.0 * k.a_prime + k.b_prime * w;
        const double root = 2.0 * ra * std::sqrt(R);
        const double mag = g > 0.0 ? root + g : abs_disc * w * w / (root - g);
        I2 = -(std::log(std::abs(mag)) - std::log(w)) / (2.0 * ra);
        break;
    }
    }
    return I1 + I2;
}

double ImplicitSolution::F_neg(double x, bool at_turning_point) const {
    const ImplicitBranchNeg& k = *neg_;
    const double l = -params_.lambda;
    const double sl = std::sqrt(l);
    const double beta = params_.beta;
    const double u = sl * x / std::sqrt(1.0 - l * x * x);
    // N = p^2/(1 - |lambda| x^2) in factored form.
    const double N =
        at_turning_point ? 0.0 : std::max(0.0, -(sqr(params_.alpha) / l) * (u - u1_) * (u - u2_));
    const double den = k.d - 2.0 * beta * u;
    if (den == 0.0) {
        return k.c1 * 0.5 * kPi + k.c2 * arccoth(k.z_inf);
    }
    const double nk = std::sqrt(N / k.kappa);
    const double angle = std::atan2(2.0 * k.S * nk / std::sqrt(k.p_plus_q_separate), std::abs(den));
    double G = k.c1 * angle;
    if (nk > 0.0) {
        // z = sqrt((p+q)/p) v/sqrt(v^2 - q) with v/(v+1) = (2 beta u + sqrt|lambda| C + S)/(2S)
        const double ratio = (2.0 * beta * u + sl * C_ + k.S) / (2.0 * k.S);
        const double z = k.z_inf * ratio * (den > 0.0 ? 1.0 : -1.0) / nk;
        G += k.c2 * arccoth(z);
    }
    return den > 0.0 ? G : k.c1 * kPi - G;
}

double ImplicitSolution::F_quad(double x) const {
    // In u = um - uh cos(theta) the quadrature becomes
    //   dt = dtheta / (alpha (1 - sign(lambda) u^2)),
    // free of the endpoint singularities of dx/sqrt(p^2).
    const double lambda = params_.lambda;
    const double sl = std::sqrt(std::abs(lambda));
    const double u = sl * x / std::sqrt(1.0 + lambda * x * x);
    const double um = 0.5 * (u1_ + u2_);
    const double uh = 0.5 * (u2_ - u1_);
    const double theta = std::acos(std::clamp((um - u) / uh, -1.0, 1.0));
    const double sign = lambda > 0.0 ? -1.0 : 1.0;
    const double alpha = params_.alpha;
    return numerics::integrate_gk15(
               [=](double th) {
                   const double uu = um - uh * std::cos(th);
                   return 1.0 / (alpha * (1.0 + sign * uu * uu));
               },
               0.0, theta, 1e-15, 1e-14)
        .value;
}

double ImplicitSolution::t_of_x(double x) const { return t_ref_ + sign_of(dir_) * (F(x) - F_ref_); }

std::optional<double> ImplicitSolution::half_period() const {
    if (x_left_ && x_right_) {
        return F_right_ - F_left_;
    }
    return std::nullopt;
}

ImplicitSolution::Pass ImplicitSolution::pass_at(double t) const {
    const double dir = sign_of(dir_);
    const double dt = t - t_ref_;
    if (x_left_ && x_right_) {
        const double H = F_right_ - F_left_;
        const double P = 2.0 * H;
        const double tau_ref = dir > 0.0 ? F_ref_ - F_left_ : P - (F_ref_ - F_left_);
        double tau = std::fmod(tau_ref + dt, P);
        if (tau < 0.0) {
            tau += P;
        }
        if (tau <= H) {
            return {F_left_ + tau, 1.0};
        }
        return {F_left_ + (P - tau), -1.0};
    }
    if (x_left_) {
        const double tau = dir * (F_ref_ - F_left_) + dt;
        return tau >= 0.0 ? Pass{F_left_ + tau, 1.0} : Pass{F_left_ - tau, -1.0};
    }
    if (x_right_) {
        const double tau = dir * (F_ref_ - F_right_) + dt;
        return tau <= 0.0 ? Pass{F_right_ + tau, 1.0} : Pass{F_right_ - tau, -1.0};
    }
    return {F_ref_ + dir * dt, dir};
}

double ImplicitSolution::solve_F(double target) const {
    if (x_left_ && target <= F_left_) {
        return *x_left_;
    }
    if (x_right_ && target >= F_right_) {
        return *x_right_;
    }
    auto f = [this, target](double x) { return F(x) - target; };
    double lo = 0.0;
    double hi = 0.0;
    if (x_left_ && x_right_) {
        lo = *x_left_;
        hi = *x_right_;
    } else {
        double start = x_ref_;
        double step = std::max(1.0, std::abs(x_ref_));
        if (x_left_) {
            start = *x_left_;
        } else if (x_right_) {
            start = *x_right_;
            step = -std::max(1.0, std::abs(start));
        } else if (target < F_ref_) {
            step = -step;
        }
        std::tie(lo, hi) = numerics::expand_bracket(f, start, step, 1100);
    }
    // Refine to adjacent doubles: F is steep near turning points, so every ulp
    // of x counts in the round trip.
    numerics::RootOptions opts;
    opts.x_tol = 0.0;
    opts.max_iter = 400;
    return numerics::find_root(f, lo, hi, opts).x;
}

double ImplicitSolution::velocity(double x, double sign) const {
    const double lambda = params_.lambda;
    const double sl = std::sqrt(std::abs(lambda));
    const double a2 = sqr(params_.alpha);
    const double m = 1.0 + lambda * x * x;
    const double u = sl * x / std::sqrt(m);
    double p2 = 0.0;
    if (lambda > 0.0) {
        const double s = std::sqrt(m);
        const double v = x >= 0.0 ? -1.0 / (s * (s + sl * x)) : u - 1.0;
        const double w = x <= 0.0 ? 1.0 / (s * (s - sl * x)) : u + 1.0;
        p2 = m * (-a2 * (w - one_plus_u1_) * (v + one_minus_u2_)) / lambda;
    } else {
        p2 = m * (-(a2 / -lambda) * (u - u1_) * (u - u2_));
    }
    return sign * std::sqrt(std::max(0.0, p2));
}

ImplicitPoint ImplicitSolution::x_of_t(double t) const {
    const Pass pass = pass_at(t);
    const double x = solve_F(pass.target);
    // p^2 near a root is pure roundoff; at the turning point itself report rest
    if ((x_left_ && x == *x_left_) || (x_right_ && x == *x_right_)) {
        return {x, 0.0};
    }
    return {x, velocity(x, pass.sign)};
}

double ImplicitSolution::round_trip_error(double t) const {
    const Pass pass = pass_at(t);
    const double x = solve_F(pass.target);
    return std::abs(F(x) - pass.target);
}

double ImplicitSolution::round_trip_excess(double t) const {
    const Pass pass = pass_at(t);
    const double x = solve_F(pass.target);
    const double fx = F(x);
    double step = 0.0;
    for (double toward : {-INFINITY, INFINITY}) {
        const double y = std::nextafter(x, toward);
        if ((!x_left_ || y >= *x_left_) && (!x_right_ || y <= *x_right_)) {
            step = std::max(step, std::abs(F(y) - fx));
        }
    }
    return std::max(0.0, std::abs(fx - pass.target) - step);
}

std::string ImplicitSolution::case_label() const {
    if (method_ == ImplicitMethod::Quadrature) {
        return "quadrature";
    }
    if (pos_) {
        return std::string(to_string(pos_->first)) + "+" + std::string(to_string(pos_->second));
    }
    return "arctan+arctanh";
}

void to_json(nlohmann::json& j, const ImplicitSolution& sol) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    j = nlohmann::json{{"method", std::string(to_string(sol.method()))},
                       {"case", sol.case_label()},
                       {"regime", sol.regime()},
                       {"energy", sol.energy()},
                       {"turning_points", {opt(sol.left_turning_point()), opt(sol.right_turning_point())}},
                       {"half_period", opt(sol.half_period())},
                       {"x_ref", sol.x_ref()},
                       {"t_ref", sol.t_ref()},
                       {"direction", sign_of(sol.direction())},
                       {"K", sol.K()}};
    if (const auto& k = sol.positive()) {
        j["constants"] = {{"a", k->a},         {"a_prime", k->a_prime}, {"b", k->b},
                          {"b_prime", k->b_prime}, {"c", k->c},          {"Delta", k->disc}};
    }
    if (const auto& k = sol.negative()) {
        j["constants"] = {{"L", k->L},       {"p", k->p},         {"q", k->q},
                          {"p_plus_q", k->p_plus_q}, {"kappa", k->kappa}, {"S", k->S},
                          {"d", k->d},       {"R", k->R},         {"valid", k->constants_valid}};
    }
}

}  // namespace nlosc
