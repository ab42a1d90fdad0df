// Closed-form trajectories x(t) of the first generalized oscillator.
//
// Along any orbit the equation of motion collapses to the linear ODE
// xddot = lambda C x + beta, so every family is an elementary function of
// omega t with omega^2 = |lambda C| and offset B = +-beta/omega^2:
//
//   Sin        A sin(omega t + phi) + B         lambda C < 0
//   Quadratic  (A t + phi)^2 + B                C = 0, beta > 0
//   Linear     A t + B                          C = 0, beta = 0 (original oscillator)
//   CoshRight  A cosh(omega t + phi) + B, A > 0 lambda C > 0, Delta < 0, right of the barrier
//   CoshLeft   A cosh(omega t + phi) + B, A < 0 lambda C > 0, Delta < 0, left of the barrier
//   ExpRight   A exp(omega t) + B, A > 0        Delta = 0 (E = V_max)
//   ExpLeft    A exp(omega t) + B, A < 0        Delta = 0
//   Sinh       A sinh(omega t + phi) + B        lambda C > 0, Delta > 0
#pragma once

#include <string_view>

#include "nlosc/model.hpp"
#include "nlosc/potential.hpp"

namespace nlosc {

enum class Family { Sin, Quadratic, Linear, CoshRight, CoshLeft, ExpRight, ExpLeft, Sinh };

std::string_view to_string(Family family);
Family parse_family(std::string_view text);

/// Which side of the G1 barrier (x_max) an unbounded orbit lives on.
enum class BranchSide { Left, Right, Either };

/// Sign of xdot at the reference time.
enum class Direction { Forward = 1, Backward = -1 };

inline double sign_of(Direction d) { return d == Direction::Forward ? 1.0 : -1.0; }

struct Interval {
    double lower;
    double upper;

    [[nodiscard]] bool contains(double x, double slack = 0.0) const { return x >= lower - slack && x <= upper + slack; }
};

struct ClosedFormSolution {
    Family family = Family::Sin;
    double A = 0.0;
    double B = 0.0;
    double phi = 0.0;
    double omega = 0.0;  // 0 for Quadratic and Linear
    Interval x_range{0.0, 0.0};
};

struct PhasePoint {
    double x;
    double xdot;
};

/// Builds the solution through x0 at time t0 for energy E. The sign of
/// xdot(t0) follows `direction`, except for the Exp families whose motion is
/// always away from the barrier top. `branch` selects the barrier side for the
/// Cosh/Exp families; Either picks the side x0 lies on.
///
/// Throws BranchError for the second oscillator, UnreachableError when
/// p^2(x0) < 0 or E < V_min, and BranchError when x0 lies on the other side of
/// the barrier from the requested branch.
ClosedFormSolution from_energy(const ModelParams& params, double energy, BranchSide branch, double x0, double t0,
                               Direction direction = Direction::Forward);

PhasePoint eval(const ClosedFormSolution& sol, double t);
double eval_acceleration(const ClosedFormSolution& sol, double t);

/// The two tabulated expressions for omega^2 of a family: one in terms of the
/// amplitude and the offset, and the closed form in terms of the amplitude
/// alone (or the parameters alone for the Exp families).
struct OmegaSquaredForms {
    double from_amplitude_offset;
    double closed;
};

/// Throws ConsistencyError when a radicand or the resulting omega^2 is
/// negative, when (A, B) sit exactly on the Sinh split lambda B^2 = lambda A^2 - 1,
/// and for the Quadratic/Linear families which have no frequency.
OmegaSquaredForms omega_squared_forms(const ModelParams& params, Family family, double A, double B);

/// sqrt of the closed form above.
double omega_of_amplitude(const ModelParams& params, Family family, double A, double B);

/// |A| as tabulated in terms of omega for each family (before the sign that
/// picks the branch). Quadratic returns sqrt(beta/2); Exp and Linear throw.
double tabulated_amplitude(const ModelParams& params, Family family, double omega);

void to_json(nlohmann::json& j, const ClosedFormSolution& sol);

}  // namespace nlosc
