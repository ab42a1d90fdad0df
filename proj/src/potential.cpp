#include "nlosc/potential.hpp"

#include <cmath>
#include <limits>

namespace nlosc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sqr(double v) { return v * v; }

// Asymptote zero of the G2, lambda > 0 potential: alpha^4 = 4 lambda beta^2.
bool zero_goes_to_infinity(const ModelParams& params) {
    const double a4 = sqr(sqr(params.alpha));
    return std::abs(a4 - 4.0 * params.lambda * sqr(params.beta)) <= 1e-12 * a4;
}

EnergyRegime make_regime(RegimeRow row, double energy, double C, double lower, double upper) {
    EnergyRegime r;
    r.row = row;
    r.energy = energy;
    r.C = C;
    r.C_lower = lower;
    r.C_upper = upper;
    return r;
}

}  // namespace

double potential(const ModelParams& params, double x) {
    require_inside(params, x);
    const double m = mass_factor(params, x);
    const double a2x2 = sqr(params.alpha * x);
    if (params.uses_sqrt_term()) {
        return 0.5 * a2x2 / m - params.beta * x / std::sqrt(m);
    }
    return 0.5 * (a2x2 - 2.0 * params.beta * x) / m;
}

double potential_derivative(const ModelParams& params, double x) {
    require_inside(params, x);
    const double m = mass_factor(params, x);
    const double a2 = sqr(params.alpha);
    if (params.uses_sqrt_term()) {
        // d/dx [x^2/m] = 2x/m^2, d/dx [x/sqrt(m)] = m^{-3/2}
        return a2 * x / (m * m) - params.beta / (m * std::sqrt(m));
    }
    return (a2 * x - params.beta + params.beta * params.lambda * x * x) / (m * m);
}

std::pair<double, double> g1_stationary_C(const ModelParams& params) {
    const double a2 = sqr(params.alpha);
    const double disc = std::sqrt(a2 * a2 + 4.0 * params.lambda * sqr(params.beta));
    const double q = -0.5 * (a2 + disc);
    const double r1 = q / params.lambda;
    const double r2 = -sqr(params.beta) / q;
    return {std::min(r1, r2), std::max(r1, r2)};
}

PotentialShape shape(const ModelParams& params) {
    validate(params);
    const double alpha = params.alpha;
    const double beta = params.beta;
    const double lambda = params.lambda;
    const double a2 = sqr(alpha);
    const double a4 = sqr(a2);

    PotentialShape s;
    s.zeros.push_back(0.0);
    if (!params.uses_sqrt_term()) {
        const double disc = std::sqrt(a4 + 4.0 * lambda * sqr(beta));
        if (beta > 0.0) {
            s.zeros.push_back(2.0 * beta / a2);
            // Rationalized form of (-alpha^2 + disc)/(2 lambda beta); valid for both signs of lambda.
            s.x_min = 2.0 * beta / (a2 + disc);
            s.V_min = -0.5 * beta * s.x_min;
            if (lambda > 0.0) {
                s.x_max = (-a2 - disc) / (2.0 * lambda * beta);
                s.V_max = (a2 + disc) / (4.0 * lambda);
            }
        }
        if (lambda > 0.0) {
            s.V_plus_inf = a2 / (2.0 * lambda);
            s.V_minus_inf = a2 / (2.0 * lambda);
        }
        return s;
    }

    s.x_min = beta / std::sqrt(a4 - lambda * sqr(beta));
    s.V_min = -sqr(beta) / (2.0 * a2);
    if (beta > 0.0) {
        if (lambda < 0.0) {
            s.zeros.push_back(2.0 * beta / std::sqrt(a4 + 4.0 * std::abs(lambda) * sqr(beta)));
        } else if (zero_goes_to_infinity(params)) {
            s.zero_at_infinity = true;
        } else if (a4 > 4.0 * lambda * sqr(beta)) {
            s.zeros.push_back(2.0 * beta / std::sqrt(a4 - 4.0 * lambda * sqr(beta)));
        }
    }
    if (lambda > 0.0) {
        const double root = std::sqrt(lambda);
        s.V_plus_inf = (a2 - 2.0 * beta * root) / (2.0 * lambda);
        s.V_minus_inf = (a2 + 2.0 * beta * root) / (2.0 * lambda);
    }
    return s;
}

EnergyRegime classify_energy(const ModelParams& params, double energy) {
    const PotentialShape s = shape(params);
    const double eps = energy_tolerance(energy);
    const double a2 = sqr(params.alpha);
    const double lambda = params.lambda;
    const double C = energy_to_C(params, energy);
    const double C_rest = 2.0 * s.V_min - a2 / lambda;

    // lower bound of the first moving row
    double C_first = C_rest;
    if (params.uses_sqrt_term()) {
        C_first = lambda > 0.0 ? -a2 / lambda - sqr(params.beta) / a2 : a2 / -lambda - sqr(params.beta) / a2;
    } else if (params.beta > 0.0) {
        C_first = g1_stationary_C(params).first;
        if (lambda < 0.0) {
            C_first = g1_stationary_C(params).second;
        }
    }

    if (energy < s.V_min - eps) {
        return make_regime(RegimeRow::BelowMinimum, energy, C, -kInf, C_first);
    }
    if (std::abs(energy - s.V_min) <= eps) {
        EnergyRegime r = make_regime(RegimeRow::Equilibrium, energy, C_first, C_first, C_first);
        if (!params.uses_sqrt_term()) {
            r.c = r.C * lambda;
            r.Delta = 0.0;  // tangency at the minimum
        }
        return r;
    }

    if (!params.uses_sqrt_term()) {
        EnergyRegime r;
        if (lambda < 0.0) {
            r = make_regime(RegimeRow::G1NegBounded, energy, C, C_first, kInf);
        } else {
            const double v_inf = *s.V_plus_inf;
            const double c_top = params.beta > 0.0 ? g1_stationary_C(params).second : 0.0;
            if (energy < v_inf - eps) {
                r = make_regime(RegimeRow::G1PosBounded, energy, C, C_first, 0.0);
            } else if (std::abs(energy - v_inf) <= eps) {
                r = make_regime(RegimeRow::G1PosAsymptote, energy, 0.0, 0.0, 0.0);
            } else if (s.V_max && energy < *s.V_max - eps) {
                r = make_regime(RegimeRow::G1PosBelowMax, energy, C, 0.0, c_top);
            } else if (s.V_max && std::abs(energy - *s.V_max) <= eps) {
                r = make_regime(RegimeRow::G1PosAtMax, energy, c_top, c_top, c_top);
            } else {
                r = make_regime(RegimeRow::G1PosAboveMax, energy, C, c_top, kInf);
            }
        }
        r.c = r.C * lambda;
        if (r.row == RegimeRow::G1PosAtMax) {
            r.Delta = 0.0;
        } else {
            // 4ac - b^2 = 4 lambda (C - r1)(C - r2); the factored form keeps the sign exact near the roots.
            const auto [r1, r2] = g1_stationary_C(params);
            r.Delta = 4.0 * lambda * (r.C - r1) * (r.C - r2);
        }
        return r;
    }

    if (lambda < 0.0) {
        return make_regime(RegimeRow::G2NegBounded, energy, C, C_first, kInf);
    }
    const double edge = 2.0 * params.beta / std::sqrt(lambda);
    const double v_plus = *s.V_plus_inf;
    const double v_minus = *s.V_minus_inf;
    if (energy < v_plus - eps) {
        return make_regime(RegimeRow::G2PosBounded, energy, C, C_first, -edge);
    }
    if (std::abs(energy - v_plus) <= eps) {
        return make_regime(RegimeRow::G2PosAtPlusInf, energy, -edge, -edge, -edge);
    }
    if (energy < v_minus - eps) {
        return make_regime(RegimeRow::G2PosBetween, energy, C, -edge, edge);
    }
    if (std::abs(energy - v_minus) <= eps) {
        return make_regime(RegimeRow::G2PosAtMinusInf, energy, edge, edge, edge);
    }
    return make_regime(RegimeRow::G2PosAboveMinusInf, energy, C, edge, kInf);
}

std::string_view to_string(RegimeRow row) {
    switch (row) {
    case RegimeRow::BelowMinimum: return "below_minimum";
    case RegimeRow::Equilibrium: return "equilibrium";
    case RegimeRow::G1PosBounded: return "g1_pos_bounded";
    case RegimeRow::G1PosAsymptote: return "g1_pos_asymptote";
    case RegimeRow::G1PosBelowMax: return "g1_pos_below_max";
    case RegimeRow::G1PosAtMax: return "g1_pos_at_max";
    case RegimeRow::G1PosAboveMax: return "g1_pos_above_max";
    case RegimeRow::G1NegBounded: return "g1_neg_bounded";
    case RegimeRow::G2PosBounded: return "g2_pos_bounded";
    case RegimeRow::G2PosAtPlusInf: return "g2_pos_at_plus_inf";
    case RegimeRow::G2PosBetween: return "g2_pos_between";
    case RegimeRow::G2PosAtMinusInf: return "g2_pos_at_minus_inf";
    case RegimeRow::G2PosAboveMinusInf: return "g2_pos_above_minus_inf";
    case RegimeRow::G2NegBounded: return "g2_neg_bounded";
    }
    return "unknown";
}

std::string_view describe(RegimeRow row) {
    switch (row) {
    case RegimeRow::BelowMinimum: return "E < V_min";
    case RegimeRow::Equilibrium: return "E = V_min";
    case RegimeRow::G1PosBounded:
    case RegimeRow::G2PosBounded: return "V_min < E < V(+inf)";
    case RegimeRow::G1PosAsymptote:
    case RegimeRow::G2PosAtPlusInf: return "E = V(+inf)";
    case RegimeRow::G1PosBelowMax: return "V(+inf) < E < V_max";
    case RegimeRow::G1PosAtMax: return "E = V_max";
    case RegimeRow::G1PosAboveMax: return "V_max < E < +inf";
    case RegimeRow::G1NegBounded:
    case RegimeRow::G2NegBounded: return "V_min < E < +inf";
    case RegimeRow::G2PosBetween: return "V(+inf) < E < V(-inf)";
    case RegimeRow::G2PosAtMinusInf: return "E = V(-inf)";
    case RegimeRow::G2PosAboveMinusInf: return "V(-inf) < E < +inf";
    }
    return "unknown";
}

int table_row(RegimeRow row) {
    switch (row) {
    case RegimeRow::BelowMinimum:
    case RegimeRow::Equilibrium: return 0;
    case RegimeRow::G1PosBounded:
    case RegimeRow::G2PosBounded: return 1;
    case RegimeRow::G1PosAsymptote:
    case RegimeRow::G2PosAtPlusInf: return 2;
    case RegimeRow::G1PosBelowMax:
    case RegimeRow::G2PosBetween: return 3;
    case RegimeRow::G1PosAtMax:
    case RegimeRow::G2PosAtMinusInf: return 4;
    case RegimeRow::G1PosAboveMax:
    case RegimeRow::G2PosAboveMinusInf: return 5;
    case RegimeRow::G1NegBounded:
    case RegimeRow::G2NegBounded: return 6;
    }
    return 0;
}

bool is_unbounded(RegimeRow row) {
    switch (row) {
    case RegimeRow::G1PosAsymptote:
    case RegimeRow::G1PosBelowMax:
    case RegimeRow::G1PosAtMax:
    case RegimeRow::G1PosAboveMax:
    case RegimeRow::G2PosAtPlusInf:
    case RegimeRow::G2PosBetween:
    case RegimeRow::G2PosAtMinusInf:
    case RegimeRow::G2PosAboveMinusInf: return true;
    default: return false;
    }
}

namespace {

nlohmann::json finite_or_null(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return v > 0 ? nlohmann::json("+inf") : nlohmann::json("-inf");
}

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void to_json(nlohmann::json& j, const PotentialShape& s) {
    j = nlohmann::json{{"zeros", s.zeros},
                       {"zero_at_infinity", s.zero_at_infinity},
                       {"x_min", s.x_min},
                       {"V_min", s.V_min},
                       {"x_max", optional_json(s.x_max)},
                       {"V_max", optional_json(s.V_max)},
                       {"V_plus_inf", optional_json(s.V_plus_inf)},
                       {"V_minus_inf", optional_json(s.V_minus_inf)}};
}

void to_json(nlohmann::json& j, const EnergyRegime& r) {
    j = nlohmann::json{{"row", std::string(to_string(r.row))},
                       {"table_row", table_row(r.row)},
                       {"band", std::string(describe(r.row))},
                       {"energy", r.energy},
                       {"C", r.C},
                       {"c", optional_json(r.c)},
                       {"Delta", optional_json(r.Delta)},
                       {"C_interval", {finite_or_null(r.C_lower), finite_or_null(r.C_upper)}}};
}

}  // namespace nlosc
