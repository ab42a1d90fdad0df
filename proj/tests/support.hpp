// Test oracles that share no code with the library: potentials and boundary
// energies written out from their defining formulas, 50-digit quadrature of
// dt = dx / sqrt(p^2), and fixed-seed samplers of valid (params, E) per regime.
#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "nlosc/model.hpp"
#include "nlosc/potential.hpp"

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;
using nlosc::ModelParams;
using nlosc::OscillatorKind;
using nlosc::RegimeRow;

inline ModelParams make(OscillatorKind kind, double alpha, double lambda, double beta) {
    ModelParams p;
    p.kind = kind;
    p.alpha = alpha;
    p.lambda = lambda;
    p.beta = beta;
    return p;
}

inline ModelParams g1(double alpha, double lambda, double beta) {
    return make(OscillatorKind::Generalized1, alpha, lambda, beta);
}
inline ModelParams g2(double alpha, double lambda, double beta) {
    return make(OscillatorKind::Generalized2, alpha, lambda, beta);
}

template <class R>
R V(const ModelParams& p, R x) {
    using std::sqrt;
    const R a2 = R(p.alpha) * R(p.alpha);
    const R m = 1 + R(p.lambda) * x * x;
    const R lin = p.kind == OscillatorKind::Generalized2 ? 2 * R(p.beta) * x * sqrt(m) : 2 * R(p.beta) * x;
    return (a2 * x * x - lin) / (2 * m);
}

/// xdot^2 on the energy shell: 2 (E - V(x)) (1 + lambda x^2).
template <class R>
R p2(const ModelParams& p, R E, R x) {
    return 2 * (E - V<R>(p, x)) * (1 + R(p.lambda) * x * x);
}

// Stationary points and asymptotes from their closed formulas.
struct Landmarks {
    double x_min = 0.0;
    double V_min = 0.0;
    double x_max = 0.0;  // G1, lambda > 0
    double V_max = 0.0;
    double V_plus = 0.0;  // lambda > 0
    double V_minus = 0.0;
};

inline Landmarks landmarks(const ModelParams& p) {
    const double a2 = p.alpha * p.alpha;
    const double a4 = a2 * a2;
    const double b = p.beta;
    const double l = p.lambda;
    Landmarks m;
    if (p.kind == OscillatorKind::Generalized2) {
        m.x_min = b / std::sqrt(a4 - l * b * b);
        m.V_min = -b * b / (2.0 * a2);
        if (l > 0.0) {
            m.V_plus = (a2 - 2.0 * b * std::sqrt(l)) / (2.0 * l);
            m.V_minus = (a2 + 2.0 * b * std::sqrt(l)) / (2.0 * l);
        }
        return m;
    }
    if (b == 0.0) {
        m.V_plus = m.V_minus = l > 0.0 ? a2 / (2.0 * l) : 0.0;
        return m;
    }
    if (l < 0.0) {
        const double al = -l;
        m.x_min = (a2 - std::sqrt(a4 - 4.0 * al * b * b)) / (2.0 * al * b);
    } else {
        m.x_min = (-a2 + std::sqrt(a4 + 4.0 * l * b * b)) / (2.0 * l * b);
        m.x_max = (-a2 - std::sqrt(a4 + 4.0 * l * b * b)) / (2.0 * l * b);
        m.V_max = -0.5 * b * m.x_max;
        m.V_plus = m.V_minus = a2 / (2.0 * l);
    }
    m.V_min = -0.5 * b * m.x_min;
    return m;
}

/// Root of p^2 refined in 50 digits from a double-precision guess. `inside`
/// is +1 when the classically allowed side lies to the right of the root.
inline hp turning_point(const ModelParams& p, double E, double guess, int inside) {
    const hp e(E);
    const double scale = std::max(1.0, std::abs(guess));
    double d = 1e-14 * scale;
    hp lo;
    hp hi;
    for (int k = 0;; ++k) {
        if (k > 60) {
            throw std::runtime_error("oracle: no sign change around turning point guess");
        }
        const hp in = hp(guess) + inside * hp(d);
        const hp out = hp(guess) - inside * hp(d);
        const bool domain_ok = p.lambda > 0.0 || (abs(in) * std::sqrt(-p.lambda) < 1 && abs(out) * std::sqrt(-p.lambda) < 1);
        if (domain_ok && p2<hp>(p, e, in) > 0 && p2<hp>(p, e, out) < 0) {
            lo = out;
            hi = in;
            break;
        }
        d *= 4.0;
    }
    for (int it = 0; it < 200; ++it) {
        const hp mid = (lo + hi) / 2;
        if (p2<hp>(p, e, mid) > 0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return (lo + hi) / 2;
}

/// Time of flight from x1 to x2 (signed) on the energy shell E.
inline hp time_of_flight(const ModelParams& p, double E, hp x1, hp x2) {
    if (x1 == x2) {
        return hp(0);
    }
    const hp e(E);
    auto f = [&](hp x) -> hp {
        const hp q = p2<hp>(p, e, x);
        return q > 0 ? 1 / sqrt(q) : hp(0);  // only at the 1e-50 level next to a turning point
    };
    static boost::math::quadrature::tanh_sinh<hp> integrator(12);
    const bool forward = x1 < x2;
    const hp value = integrator.integrate(f, forward ? x1 : x2, forward ? x2 : x1, hp(1e-22));
    return forward ? value : -value;
}

// ---------------------------------------------------------------------------
// Samplers. Each returns a parameter set and an energy inside the requested
// regime row, with boundary rows hit exactly.

struct Draw {
    ModelParams p;
    double E = 0.0;
};

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    Draw draw(RegimeRow row) {
        switch (row) {
        case RegimeRow::G1PosBounded:
        case RegimeRow::G1PosAsymptote:
        case RegimeRow::G1PosBelowMax:
        case RegimeRow::G1PosAtMax:
        case RegimeRow::G1PosAboveMax: {
            const ModelParams p = g1(uniform(0.5, 2.0), uniform(0.2, 2.0), uniform(0.1, 2.0));
            const Landmarks m = landmarks(p);
            return {p, g1_pos_energy(row, m)};
        }
        case RegimeRow::G1NegBounded: {
            const double alpha = uniform(0.5, 2.0);
            const double l = uniform(0.2, 2.0);
            const ModelParams p = g1(alpha, -l, uniform(0.05, 0.95) * alpha * alpha / (2.0 * std::sqrt(l)));
            const Landmarks m = landmarks(p);
            return {p, m.V_min + uniform(0.01, 1.0) * alpha * alpha / l};
        }
        case RegimeRow::G2PosBounded:
        case RegimeRow::G2PosAtPlusInf:
        case RegimeRow::G2PosBetween:
        case RegimeRow::G2PosAtMinusInf:
        case RegimeRow::G2PosAboveMinusInf: {
            const double alpha = uniform(0.5, 2.0);
            const double l = uniform(0.2, 2.0);
            const ModelParams p = g2(alpha, l, uniform(0.05, 0.95) * alpha * alpha / std::sqrt(l));
            const Landmarks m = landmarks(p);
            return {p, g2_pos_energy(row, m)};
        }
        case RegimeRow::G2NegBounded: {
            const double alpha = uniform(0.5, 2.0);
            const double l = uniform(0.2, 2.0);
            const ModelParams p = g2(alpha, -l, uniform(0.1, 2.0));
            const Landmarks m = landmarks(p);
            return {p, m.V_min + uniform(0.01, 1.0) * (alpha * alpha / l + std::abs(m.V_min))};
        }
        default:
            throw std::invalid_argument("sampler: regime row without motion");
        }
    }

    std::mt19937_64& rng() { return rng_; }

private:
    double g1_pos_energy(RegimeRow row, const Landmarks& m) {
        switch (row) {
        case RegimeRow::G1PosBounded: return m.V_min + uniform(0.02, 0.98) * (m.V_plus - m.V_min);
        case RegimeRow::G1PosAsymptote: return m.V_plus;
        case RegimeRow::G1PosBelowMax: return m.V_plus + uniform(0.02, 0.98) * (m.V_max - m.V_plus);
        case RegimeRow::G1PosAtMax: return m.V_max;
        default: return m.V_max + uniform(0.02, 2.0) * (m.V_max - m.V_plus);
        }
    }

    double g2_pos_energy(RegimeRow row, const Landmarks& m) {
        switch (row) {
        case RegimeRow::G2PosBounded: return m.V_min + uniform(0.02, 0.98) * (m.V_plus - m.V_min);
        case RegimeRow::G2PosAtPlusInf: return m.V_plus;
        case RegimeRow::G2PosBetween: return m.V_plus + uniform(0.02, 0.98) * (m.V_minus - m.V_plus);
        case RegimeRow::G2PosAtMinusInf: return m.V_minus;
        default: return m.V_minus + uniform(0.02, 2.0) * (m.V_minus - m.V_plus);
        }
    }

    std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle
