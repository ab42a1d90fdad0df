#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>

#include "nlosc/model.hpp"
#include "nlosc/numerics.hpp"

using namespace nlosc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("find_root on smooth and steep functions", "[numerics]") {
    const auto r = numerics::find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK_THAT(r.x, WithinRel(std::sqrt(2.0), 1e-12));

    // square-root steepness next to the root, as at a turning point
    const auto s = numerics::find_root([](double x) { return std::sqrt(std::abs(x - 0.3)) * (x > 0.3 ? 1 : -1); },
                                       -1.0, 1.0);
    CHECK_THAT(s.x, WithinAbs(0.3, 1e-12));

    numerics::RootOptions exact;
    exact.x_tol = 0.0;
    exact.max_iter = 400;
    const auto e = numerics::find_root([](double x) { return std::cos(x); }, 1.0, 2.0, exact);
    CHECK(std::abs(e.x - std::numbers::pi / 2.0) <= 2.3e-16);
}

TEST_CASE("find_root errors", "[numerics]") {
    CHECK_THROWS_AS(numerics::find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), ConvergenceError);
    numerics::RootOptions few;
    few.max_iter = 2;
    few.x_tol = 0.0;
    CHECK_THROWS_AS(numerics::find_root([](double x) { return std::exp(x) - 2.0; }, -50.0, 50.0, few),
                    ConvergenceError);
}

TEST_CASE("expand_bracket grows until a sign change", "[numerics]") {
    const auto [lo, hi] = numerics::expand_bracket([](double x) { return x - 100.0; }, 0.0, 1.0);
    CHECK(lo < 100.0);
    CHECK(hi >= 100.0);
    const auto [l2, h2] = numerics::expand_bracket([](double x) { return x + 7.5; }, 0.0, -1.0);
    CHECK(l2 <= -7.5);
    CHECK(h2 > -7.5);
    const auto [l3, h3] = numerics::expand_bracket([](double x) { return x; }, 0.0, 1.0);
    CHECK(l3 == 0.0);
    CHECK(h3 == 0.0);
    CHECK_THROWS_AS(numerics::expand_bracket([](double) { return 1.0; }, 0.0, 1.0), ConvergenceError);
}

TEST_CASE("Gauss-Kronrod quadrature", "[numerics]") {
    const auto a = numerics::integrate_gk15([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK_THAT(a.value, WithinRel(2.0, 1e-13));
    // integrable endpoint singularity
    const auto b = numerics::integrate_gk15([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10);
    CHECK_THAT(b.value, WithinRel(2.0, 1e-8));
    CHECK(b.evaluations > a.evaluations);
}
