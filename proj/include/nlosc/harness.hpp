// Producer plumbing behind the command-line tool: trajectories from the
// closed-form, implicit and ODE producers, cross-verification reports, and the
// potential curves of the four reference figures.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nlosc/closed_form.hpp"
#include "nlosc/dynamics.hpp"
#include "nlosc/kernels.hpp"
#include "nlosc/model.hpp"
#include "nlosc/potential.hpp"

namespace nlosc::harness {

enum class Producer { Closed, Implicit, Ode };

std::string_view to_string(Producer producer);
Producer parse_producer(std::string_view text);

/// Analytic producer for the kind: Closed for original/first, Implicit for second.
Producer analytic_producer(const ModelParams& params);

struct SolveOptions {
    std::optional<double> x0;  // start position; default_start() when absent
    Direction direction = Direction::Forward;
    BranchSide branch = BranchSide::Either;
    IntegrateOptions ode;
    bool force_quadrature = false;
    kernels::Exec exec = kernels::Exec::Serial;
};

/// Start position used when none is given: the left turning point when one
/// exists (the barrier-side turning point of the chosen branch for the
/// cosh-type orbits, a point one unit from the barrier top for E = V_max),
/// otherwise x_min.
double default_start(const ModelParams& params, double energy, BranchSide branch = BranchSide::Either);

/// Period for bounded orbits, otherwise the e-folding time of the escape
/// (1/alpha when the escape is slower than exponential).
struct OrbitScale {
    bool bounded = false;
    double time = 0.0;
};

OrbitScale orbit_scale(const ModelParams& params, double energy);

/// Escaping orbits are followed until |x| reaches this multiple of max(1, |x0|).
inline constexpr double kEscapeGrowth = 10.0;

/// Five periods for bounded orbits. Escaping orbits get four e-folding times,
/// cut short where |x| first reaches kEscapeGrowth max(1, |x0|) from the
/// default start; ODE errors grow with |x|.
double default_t_end(const ModelParams& params, double energy);

struct SolveResult {
    Producer producer = Producer::Ode;
    State s0;
    std::vector<Sample> samples;
    nlohmann::json info;  // producer-specific description (family, I_ij case, step counts)
};

/// Samples one producer on the given times (sorted, >= 0, starting state at t = 0).
/// Throws BranchError on a producer/kind mismatch and UnreachableError when
/// there is no motion at this energy.
SolveResult solve(const ModelParams& params, double energy, Producer producer, const std::vector<double>& times,
                  const SolveOptions& opts = {});

/// Defaults for compare: the ODE runs two digits tighter than for solve so
/// that it serves as the reference.
SolveOptions compare_options();

struct Thresholds {
    double x_error = 1e-6;
    double energy_drift = 1e-8;
    double residual = 1e-9;
};

struct ComparisonReport {
    ModelParams params;
    double energy = 0.0;
    EnergyRegime regime;
    std::vector<Producer> producers;
    bool no_motion = false;
    std::size_t samples = 0;
    double t_end = 0.0;
    double max_abs_x_error = 0.0;
    double max_energy_drift = 0.0;
    double residual_max = 0.0;  // closed: scaled Euler-Lagrange residual; implicit: round-trip time error
    Thresholds thresholds;
    bool pass = true;
    nlohmann::json details;
};

/// Runs the analytic producer and the ODE producer on the same times and
/// compares them. Energies at or below V_min yield a no-motion report that passes.
ComparisonReport compare(const ModelParams& params, double energy, const std::vector<double>& times,
                         const SolveOptions& opts = {}, const Thresholds& thresholds = {});

void to_json(nlohmann::json& j, const ComparisonReport& report);

struct FigureSpec {
    int id = 0;
    ModelParams solid;   // beta != 0
    ModelParams dashed;  // same with beta = 0
    double x_lo = 0.0;   // default plotting window
    double x_hi = 0.0;
    std::string title;
};

/// Parameter sets of figures 1-4. Throws DomainError for other ids.
FigureSpec figure_spec(int id);

struct Landmarks {
    std::vector<double> zeros;
    std::vector<double> minima;
    std::vector<double> maxima;
    std::vector<double> minimum_values;
    std::vector<double> maximum_values;
    std::optional<double> V_plus_inf;
    std::optional<double> V_minus_inf;
};

/// Zeros and extrema found from sign changes of V and V' along the sampled
/// curve, refined by root finding; asymptotes from V at |x| = 1e13.
Landmarks locate_landmarks(const ModelParams& params, const std::vector<double>& xs, const std::vector<double>& V);

struct FigureData {
    FigureSpec spec;
    std::vector<double> xs;
    std::vector<double> V_solid;
    std::vector<double> V_dashed;
    Landmarks solid;
    Landmarks dashed;
};

FigureData figure_data(int id, const std::vector<double>& xs, kernels::Exec exec = kernels::Exec::Serial);

void to_json(nlohmann::json& j, const Landmarks& landmarks);

}  // namespace nlosc::harness
