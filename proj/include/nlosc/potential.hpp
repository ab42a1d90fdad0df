// Potential evaluation, extrema/zeros/asymptotes, and energy regime
// classification for the first and second generalized oscillators.
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nlosc/model.hpp"

namespace nlosc {

/// V(x). Throws DomainError outside the usable position domain.
double potential(const ModelParams& params, double x);

/// dV/dx, analytic.
double potential_derivative(const ModelParams& params, double x);

struct PotentialShape {
    std::vector<double> zeros;       // finite zeros, sorted
    bool zero_at_infinity = false;   // G2, lambda > 0, beta = alpha^2/(2 sqrt(lambda))
    double x_min = 0.0;
    double V_min = 0.0;
    std::optional<double> x_max;     // G1, lambda > 0, beta > 0 only
    std::optional<double> V_max;
    std::optional<double> V_plus_inf;   // lambda > 0 only
    std::optional<double> V_minus_inf;  // lambda > 0 only
};

/// Closed-form extrema, zeros and asymptotes.
PotentialShape shape(const ModelParams& params);

/// Energy bands. The G1 rows follow the six-row C/c/Delta table of the first
/// oscillator, the G2 rows the six-row C table of the second one. Original
/// parameters classify with the G1 rows.
enum class RegimeRow {
    BelowMinimum,        // E < V_min: no motion
    Equilibrium,         // E = V_min: rest at the minimum
    G1PosBounded,        // lambda > 0, V_min < E < V(+inf)
    G1PosAsymptote,      // lambda > 0, E = V(+inf)
    G1PosBelowMax,       // lambda > 0, V(+inf) < E < V_max
    G1PosAtMax,          // lambda > 0, E = V_max
    G1PosAboveMax,       // lambda > 0, V_max < E
    G1NegBounded,        // lambda < 0, V_min < E
    G2PosBounded,        // lambda > 0, V_min < E < V(+inf)
    G2PosAtPlusInf,      // lambda > 0, E = V(+inf)
    G2PosBetween,        // lambda > 0, V(+inf) < E < V(-inf)
    G2PosAtMinusInf,     // lambda > 0, E = V(-inf)
    G2PosAboveMinusInf,  // lambda > 0, V(-inf) < E
    G2NegBounded,        // lambda < 0, V_min < E
};

std::string_view to_string(RegimeRow row);
/// Human-readable energy band, e.g. "V(+inf) < E < V_max".
std::string_view describe(RegimeRow row);
/// 1-based row index in the oscillator's regime table; 0 for BelowMinimum and
/// Equilibrium.
int table_row(RegimeRow row);
/// Motion extends to |x| -> infinity.
bool is_unbounded(RegimeRow row);

struct EnergyRegime {
    RegimeRow row = RegimeRow::BelowMinimum;
    double energy = 0.0;
    double C = 0.0;
    std::optional<double> c;      // C lambda (G1 only)
    std::optional<double> Delta;  // 4ac - b^2 of the G1 quadrature (G1 only)
    double C_lower = 0.0;         // table interval containing C; equal bounds on equality rows
    double C_upper = 0.0;
};

/// Classifies E into exactly one regime row. Boundary hits within
/// energy_tolerance(E) snap to the equality row and C takes the exact boundary
/// value.
EnergyRegime classify_energy(const ModelParams& params, double energy);

/// Roots (r_low, r_high) of lambda C^2 + alpha^2 C - beta^2, i.e. the values of
/// C at the two stationary points of the G1 potential.
std::pair<double, double> g1_stationary_C(const ModelParams& params);

void to_json(nlohmann::json& j, const PotentialShape& shape);
void to_json(nlohmann::json& j, const EnergyRegime& regime);

}  // namespace nlosc
