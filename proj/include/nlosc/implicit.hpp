// Implicit solutions t = t(x) of the second generalized oscillator and their
// numerical inversion x = x(t).
//
// lambda > 0: with u = sqrt(lambda) x / sqrt(1 + lambda x^2) the quadrature
// splits into I1 (in v = u - 1) and I2 (in w = u + 1). The sign of
//   a  = 2 lambda (E - V(+inf)),   a' = 2 lambda (E - V(-inf))
// picks arcsin-, algebraic- or log-type terms:
//
//   V_min < E < V(+inf)     I11 + I21
//   E = V(+inf)             I12 + I21
//   V(+inf) < E < V(-inf)   I13 + I21
//   E = V(-inf)             I13 + I22
//   V(-inf) < E             I13 + I23
//
// lambda < 0: with the constants L, p, q the time is
//   L/sqrt(p+q) arctan w + L/sqrt(p(p+q)) arctanh z.
// Here |z| > 1 on the whole orbit, so the second term is evaluated as arccoth.
//
// Internally every branch is a single function F(x), increasing in x, with
// dF/dx = 1/sqrt(p^2(x)); the reference point fixes the additive constant.
#pragma once

#include <optional>
#include <string>
#include <utility>

#include "nlosc/closed_form.hpp"
#include "nlosc/model.hpp"
#include "nlosc/potential.hpp"

namespace nlosc {

enum class ImplicitMethod { ClosedForm, Quadrature };

std::string_view to_string(ImplicitMethod method);

enum class FirstTerm { I11, I12, I13 };
enum class SecondTerm { I21, I22, I23 };

std::string_view to_string(FirstTerm term);
std::string_view to_string(SecondTerm term);

struct ImplicitBranchPos {
    double a = 0.0;        // 2 lambda (E - V(+inf)), exactly 0 on the E = V(+inf) row
    double a_prime = 0.0;  // 2 lambda (E - V(-inf)), exactly 0 on the E = V(-inf) row
    double b = 0.0;        // -2 (alpha^2 - beta sqrt(lambda))
    double b_prime = 0.0;  //  2 (alpha^2 + beta sqrt(lambda))
    double c = 0.0;        // -alpha^2 (shared by both integrals)
    double disc = 0.0;     // 4ac - b^2 = 4a'c - b'^2 = -8 alpha^2 lambda (E - V_min)
    FirstTerm first = FirstTerm::I11;
    SecondTerm second = SecondTerm::I21;
};

struct ImplicitBranchNeg {
    double L = 0.0;
    double p = 0.0;
    double q = 0.0;
    double p_plus_q = 0.0;          // from the dedicated closed form
    double p_plus_q_separate = 0.0; // p + q added directly
    double S = 0.0;                 // sqrt(|lambda| C^2 + 4 beta^2)
    double d = 0.0;                 // S - sqrt|lambda| C
    double R = 0.0;                 // radicand of L; positive iff E > V_min
    double kappa = 0.0;
    double c1 = 0.0;     // L / sqrt(p + q)
    double c2 = 0.0;     // L / sqrt(p (p + q))
    double z_inf = 0.0;  // sqrt((p + q)/p), the value of z where v -> infinity
    bool constants_valid = false;
};

/// 4ac - b^2 and 4a'c - b'^2 of the lambda > 0 split, computed from their
/// definitions (no identity used).
std::pair<double, double> g2_discriminants(const ModelParams& params, double energy);

/// Constants of the lambda < 0 solution straight from their defining
/// formulas. constants_valid is false when a radicand is not positive.
ImplicitBranchNeg g2_negative_constants(const ModelParams& params, double energy);

struct ImplicitPoint {
    double x;
    double xdot;
};

class ImplicitSolution {
public:
    /// Builds the branch through x_ref at time t_ref moving in `direction`.
    /// Throws BranchError unless params are of the second kind, UnreachableError
    /// below or at V_min or when p^2(x_ref) < 0. The quadrature method is used
    /// when the lambda < 0 constants are invalid (beta = 0 included) or when
    /// forced; it needs a bounded orbit.
    static ImplicitSolution build(const ModelParams& params, double energy, double x_ref, double t_ref = 0.0,
                                  Direction direction = Direction::Forward, bool force_quadrature = false);

    /// Time on the half-orbit through the reference point:
    /// t_ref + dir (F(x) - F(x_ref)). Throws UnreachableError when p^2(x) < 0.
    [[nodiscard]] double t_of_x(double x) const;

    /// F(x): increasing, dF/dx = 1/sqrt(p^2). t_of_x(x) = dir F(x) - K.
    [[nodiscard]] double F(double x) const;

    /// Position and velocity at time t, following reflections at turning points.
    [[nodiscard]] ImplicitPoint x_of_t(double t) const;

    /// x_of_t followed by t_of_x on the segment the point lies on; the result
    /// differs from t by the inversion error only. For periodic orbits t is
    /// reduced to the current pass first.
    [[nodiscard]] double round_trip_error(double t) const;

    /// round_trip_error less the change of F across one ulp of the solved x.
    /// Near a turning point dF/dx is unbounded and no double x lands closer,
    /// so only the excess measures the inversion itself.
    [[nodiscard]] double round_trip_excess(double t) const;

    [[nodiscard]] const ModelParams& params() const { return params_; }
    [[nodiscard]] const EnergyRegime& regime() const { return regime_; }
    [[nodiscard]] double energy() const { return energy_; }
    [[nodiscard]] ImplicitMethod method() const { return method_; }
    [[nodiscard]] const std::optional<ImplicitBranchPos>& positive() const { return pos_; }
    [[nodiscard]] const std::optional<ImplicitBranchNeg>& negative() const { return neg_; }
    [[nodiscard]] std::optional<double> left_turning_point() const { return x_left_; }
    [[nodiscard]] std::optional<double> right_turning_point() const { return x_right_; }
    /// Time from the left to the right turning point; bounded orbits only.
    [[nodiscard]] std::optional<double> half_period() const;
    [[nodiscard]] double K() const { return K_; }
    [[nodiscard]] double x_ref() const { return x_ref_; }
    [[nodiscard]] double t_ref() const { return t_ref_; }
    [[nodiscard]] Direction direction() const { return dir_; }
    /// "I13+I22", "arctan+arctanh" or "quadrature".
    [[nodiscard]] std::string case_label() const;

private:
    ImplicitSolution() = default;

    [[nodiscard]] double F_pos(double x, bool at_turning_point) const;
    [[nodiscard]] double F_neg(double x, bool at_turning_point) const;
    [[nodiscard]] double F_quad(double x) const;
    [[nodiscard]] double clamp_reachable(double x) const;
    [[nodiscard]] double solve_F(double target) const;
    [[nodiscard]] double velocity(double x, double sign) const;

    struct Pass {
        double target;  // value of F on the current pass
        double sign;    // direction of motion on that pass
    };
    [[nodiscard]] Pass pass_at(double t) const;

    ModelParams params_;
    EnergyRegime regime_;
    double energy_ = 0.0;
    double C_ = 0.0;
    ImplicitMethod method_ = ImplicitMethod::ClosedForm;
    std::optional<ImplicitBranchPos> pos_;
    std::optional<ImplicitBranchNeg> neg_;

    // roots of p^2 in u = sqrt|lambda| x / sqrt(1 + lambda x^2), and 1 - u2, 1 + u1
    double u1_ = 0.0;
    double u2_ = 0.0;
    double one_minus_u2_ = 0.0;
    double one_plus_u1_ = 0.0;

    std::optional<double> x_left_;
    std::optional<double> x_right_;
    double F_left_ = 0.0;
    double F_right_ = 0.0;

    double x_ref_ = 0.0;
    double t_ref_ = 0.0;
    Direction dir_ = Direction::Forward;
    double F_ref_ = 0.0;
    double K_ = 0.0;
};

void to_json(nlohmann::json& j, const ImplicitSolution& sol);

}  // namespace nlosc
