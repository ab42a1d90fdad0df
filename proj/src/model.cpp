#include "nlosc/model.hpp"

#include <cmath>
#include <limits>

#include "nlosc/potential.hpp"

namespace nlosc {

std::string_view to_string(OscillatorKind kind) {
    switch (kind) {
    case OscillatorKind::Original:
        return "original";
    case OscillatorKind::Generalized1:
        return "g1";
    case OscillatorKind::Generalized2:
        return "g2";
    }
    return "unknown";
}

OscillatorKind parse_kind(std::string_view text) {
    if (text == "original" || text == "ml") {
        return OscillatorKind::Original;
    }
    if (text == "g1" || text == "generalized1") {
        return OscillatorKind::Generalized1;
    }
    if (text == "g2" || text == "generalized2") {
        return OscillatorKind::Generalized2;
    }
    throw DomainError("unknown oscillator kind '" + std::string(text) + "' (expected original, g1 or g2)");
}

bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.kind == b.kind && a.alpha == b.alpha && a.beta == b.beta && a.lambda == b.lambda;
}

bool PositionDomain::bounded() const { return std::isfinite(lower) && std::isfinite(upper); }

bool PositionDomain::contains(double x) const { return x > lower && x < upper; }

PositionDomain validate(const ModelParams& params) {
    const double alpha = params.alpha;
    const double beta = params.beta;
    const double lambda = params.lambda;
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(lambda)) {
        throw DomainError("parameters must be finite");
    }
    if (!(alpha > 0.0)) {
        throw DomainError("alpha > 0 violated");
    }
    if (lambda == 0.0) {
        throw DomainError("lambda != 0 violated");
    }
    if (beta < 0.0) {
        throw DomainError("beta >= 0 violated (use x -> -x to flip the sign of beta)");
    }
    const double a2 = alpha * alpha;
    const double root = std::sqrt(std::abs(lambda));
    switch (params.kind) {
    case OscillatorKind::Original:
        if (beta != 0.0) {
            throw DomainError("beta == 0 violated for the original oscillator");
        }
        break;
    case OscillatorKind::Generalized1:
        if (lambda < 0.0 && !(beta < a2 / (2.0 * root))) {
            throw DomainError("beta < alpha^2/(2 sqrt|lambda|) violated");
        }
        break;
    case OscillatorKind::Generalized2:
        if (lambda > 0.0 && !(beta < a2 / root)) {
            throw DomainError("beta < alpha^2/sqrt(lambda) violated");
        }
        break;
    }
    if (lambda < 0.0) {
        return {-1.0 / root, 1.0 / root};
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
}

void require_inside(const ModelParams& params, double x) {
    if (!std::isfinite(x)) {
        throw DomainError("position must be finite");
    }
    if (params.lambda < 0.0) {
        const double limit = usable_limit(params);
        if (std::abs(x) > limit) {
            throw DomainError("|x| < 1/sqrt|lambda| violated (x = " + std::to_string(x) + ")");
        }
    }
}

double energy_to_C(const ModelParams& params, double energy) {
    return 2.0 * energy - params.alpha * params.alpha / params.lambda;
}

double C_to_energy(const ModelParams& params, double C) {
    return 0.5 * C + params.alpha * params.alpha / (2.0 * params.lambda);
}

double energy_from_state(const ModelParams& params, const State& state) {
    return 0.5 * state.xdot * state.xdot / mass_factor(params, state.x) + potential(params, state.x);
}

void to_json(nlohmann::json& j, const ModelParams& params) {
    j = nlohmann::json{{"kind", std::string(to_string(params.kind))},
                       {"alpha", params.alpha},
                       {"beta", params.beta},
                       {"lambda", params.lambda}};
}

void from_json(const nlohmann::json& j, ModelParams& params) {
    params.kind = parse_kind(j.at("kind").get<std::string>());
    params.alpha = j.at("alpha").get<double>();
    params.beta = j.at("beta").get<double>();
    params.lambda = j.at("lambda").get<double>();
}

}  // namespace nlosc
