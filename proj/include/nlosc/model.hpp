// Parameter containers, domain validation and the energy <-> integration
// constant map shared by every other module.
//
// The three oscillators share the kinetic term  T = xdot^2 / (2 (1 + lambda x^2))
// and differ only in the potential:
//
//   Original      V = (alpha^2 x^2) / (2 (1 + lambda x^2))
//   Generalized1  V = (alpha^2 x^2 - 2 beta x) / (2 (1 + lambda x^2))
//   Generalized2  V = (alpha^2 x^2 - 2 beta x sqrt(1 + lambda x^2)) / (2 (1 + lambda x^2))
//
// Original is Generalized1 (or Generalized2) with beta = 0.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace nlosc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter set or a position outside the legal domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A position with p^2(x) < 0 at the requested energy.
class UnreachableError : public Error {
public:
    using Error::Error;
};

/// A request that contradicts the solution branch (wrong side of a barrier,
/// producer not applicable to the oscillator kind, ...).
class BranchError : public Error {
public:
    using Error::Error;
};

/// Amplitude/offset pair inconsistent with a frequency relation.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to reach tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// ODE integration failure: step-size underflow or mass singularity.
class IntegrationError : public Error {
public:
    using Error::Error;
};

enum class OscillatorKind { Original, Generalized1, Generalized2 };

std::string_view to_string(OscillatorKind kind);
/// Accepts "original", "g1", "g2" (also "generalized1", "generalized2").
OscillatorKind parse_kind(std::string_view text);

struct ModelParams {
    OscillatorKind kind = OscillatorKind::Original;
    double alpha = 1.0;   // 1/time
    double beta = 0.0;    // length/time^2
    double lambda = 1.0;  // 1/length^2

    /// True when the beta x sqrt(1 + lambda x^2) potential applies.
    [[nodiscard]] bool uses_sqrt_term() const { return kind == OscillatorKind::Generalized2; }
};

bool operator==(const ModelParams& a, const ModelParams& b);

/// Open interval of legal positions; infinite bounds for lambda > 0.
struct PositionDomain {
    double lower;
    double upper;

    [[nodiscard]] bool bounded() const;
    [[nodiscard]] bool contains(double x) const;
};

struct State {
    double t = 0.0;
    double x = 0.0;
    double xdot = 0.0;
};

/// Checks the parameter inequalities and returns the legal x-interval.
/// Throws DomainError whose message names the violated inequality.
PositionDomain validate(const ModelParams& params);

/// 1 + lambda x^2, the inverse of the position-dependent mass.
inline double mass_factor(const ModelParams& params, double x) { return 1.0 + params.lambda * x * x; }

/// Fraction of the wall distance 1/sqrt|lambda| at which lambda < 0 positions
/// stop being accepted.
inline constexpr double kWallMargin = 1e-12;

/// Largest usable |x| for lambda < 0: (1 - kWallMargin)/sqrt|lambda|.
inline double usable_limit(const ModelParams& params) { return (1.0 - kWallMargin) / std::sqrt(-params.lambda); }

/// Throws DomainError unless x lies strictly inside the usable position domain
/// (|x| <= usable_limit for lambda < 0).
void require_inside(const ModelParams& params, double x);

double energy_to_C(const ModelParams& params, double energy);
double C_to_energy(const ModelParams& params, double C);

/// Conserved energy  xdot^2 / (2 (1 + lambda x^2)) + V(x).
double energy_from_state(const ModelParams& params, const State& state);

/// Absolute tolerance used when comparing an energy with a regime boundary.
inline double energy_tolerance(double energy) { return 1e-12 * std::max(1.0, std::abs(energy)); }

void to_json(nlohmann::json& j, const ModelParams& params);
void from_json(const nlohmann::json& j, ModelParams& params);

}  // namespace nlosc
