#include "catch_amalgamated.hpp"

#include <cmath>

#include "nlosc/potential.hpp"
#include "support.hpp"

using namespace nlosc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kSqrt5 = std::sqrt(5.0);

// Parameter sets covering every kind and sign of lambda.
std::vector<ModelParams> representative() {
    return {
        oracle::g1(1.0, 1.0, 1.0),    oracle::g1(1.0, -1.0, 0.45), oracle::g1(2.0, 0.3, 0.2),
        oracle::g1(0.7, -2.0, 0.1),   oracle::g2(1.0, -1.0, 1.0),  oracle::g2(1.0, 0.5, 0.5),
        oracle::g2(1.3, 2.0, 0.9),    oracle::g2(0.6, -0.4, 2.0),
        oracle::make(OscillatorKind::Original, 1.0, 1.0, 0.0),
    };
}

std::vector<double> grid_for(const ModelParams& p, int n) {
    const double R = p.lambda > 0.0 ? 30.0 : 0.999 / std::sqrt(-p.lambda);
    std::vector<double> xs;
    for (int i = 0; i <= n; ++i) {
        xs.push_back(-R + 2.0 * R * i / n);
    }
    return xs;
}

}  // namespace

TEST_CASE("V examples", "[potential]") {
    CHECK(potential(oracle::g1(1.0, 1.0, 1.0), 0.0) == 0.0);
    CHECK_THAT(potential(oracle::g1(1.0, 1.0, 1.0), 2.0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(potential(oracle::g2(1.0, -1.0, 1.0), 1.0 / std::sqrt(2.0)), WithinAbs(-0.5, 1e-15));
    CHECK_THROWS_AS(potential(oracle::g1(1.0, -1.0, 0.45), 1.0), DomainError);
}

TEST_CASE("dV examples", "[potential]") {
    CHECK_THAT(potential_derivative(oracle::g1(1.0, 1.0, 1.0), (-1.0 + kSqrt5) / 2.0), WithinAbs(0.0, 1e-15));
    CHECK(potential_derivative(oracle::make(OscillatorKind::Original, 1.0, 1.0, 0.0), 0.0) == 0.0);
    CHECK_THAT(potential_derivative(oracle::g2(1.0, -1.0, 1.0), 0.0), WithinAbs(-1.0, 1e-15));
}

TEST_CASE("dV matches a central difference of V", "[potential]") {
    for (const ModelParams& p : representative()) {
        for (double x : grid_for(p, 400)) {
            // 50-digit difference with a step well inside the distance to a wall
            double room = std::max(1.0, std::abs(x));
            if (p.lambda < 0.0) {
                room = std::min(room, 1.0 / std::sqrt(-p.lambda) - std::abs(x));
            }
            const oracle::hp h = oracle::hp(1e-8 * room);
            const oracle::hp xh(x);
            const double fd = static_cast<double>((oracle::V<oracle::hp>(p, xh + h) - oracle::V<oracle::hp>(p, xh - h)) / (2 * h));
            const double d = potential_derivative(p, x);
            INFO("x = " << x);
            CHECK(std::abs(d - fd) <= 1e-8 * std::max(1.0, std::abs(d)) + 1e-9);
        }
    }
}

TEST_CASE("shape examples", "[potential]") {
    const PotentialShape s1 = shape(oracle::g1(1.0, 1.0, 1.0));
    CHECK_THAT(s1.x_min, WithinRel((-1.0 + kSqrt5) / 2.0, 1e-14));
    CHECK_THAT(s1.V_min, WithinRel(-(-1.0 + kSqrt5) / 4.0, 1e-14));
    REQUIRE(s1.x_max);
    CHECK_THAT(*s1.x_max, WithinRel((-1.0 - kSqrt5) / 2.0, 1e-14));
    CHECK_THAT(*s1.V_max, WithinRel((1.0 + kSqrt5) / 4.0, 1e-14));
    CHECK(s1.zeros == std::vector<double>{0.0, 2.0});
    CHECK(*s1.V_plus_inf == 0.5);

    const PotentialShape s2 = shape(oracle::g2(1.0, -1.0, 1.0));
    CHECK_THAT(s2.x_min, WithinRel(1.0 / std::sqrt(2.0), 1e-15));
    CHECK(s2.V_min == -0.5);
    CHECK_FALSE(s2.x_max);
    CHECK_FALSE(s2.V_plus_inf);

    const PotentialShape s4 = shape(oracle::g2(1.0, 0.5, 0.5));
    CHECK_THAT(*s4.V_plus_inf, WithinRel(1.0 - std::sqrt(0.5), 1e-14));
    CHECK_THAT(*s4.V_minus_inf, WithinRel(1.0 + std::sqrt(0.5), 1e-14));
}

TEST_CASE("shape invariants hold on representative parameters", "[potential]") {
    for (const ModelParams& p : representative()) {
        const PotentialShape s = shape(p);
        for (double z : s.zeros) {
            CHECK_THAT(potential(p, z), WithinAbs(0.0, 1e-12));
        }
        // stationary, convex minimum
        const double h = 1e-4 * std::max(1.0, std::abs(s.x_min));
        CHECK_THAT(potential_derivative(p, s.x_min), WithinAbs(0.0, 1e-12));
        CHECK(potential(p, s.x_min + h) + potential(p, s.x_min - h) - 2.0 * potential(p, s.x_min) > 0.0);
        // global minimum of a dense scan
        double scan = INFINITY;
        for (double x : grid_for(p, 2000000)) {
            scan = std::min(scan, potential(p, x));
        }
        CHECK(s.V_min <= scan + 1e-14);
        CHECK(scan - s.V_min <= 1e-8);
        if (p.lambda > 0.0 && p.kind != OscillatorKind::Generalized2 && p.beta > 0.0) {
            CHECK(*s.V_max > *s.V_plus_inf);
            CHECK(*s.V_plus_inf == p.alpha * p.alpha / (2.0 * p.lambda));
        }
        if (p.lambda > 0.0 && p.kind == OscillatorKind::Generalized2) {
            CHECK_FALSE(s.x_max);
            CHECK(*s.V_minus_inf > 0.0);
        }
    }
}

TEST_CASE("second-oscillator zero moves to infinity at beta = alpha^2/(2 sqrt(lambda))", "[potential]") {
    const double l = 0.5;
    CHECK(shape(oracle::g2(1.0, l, 0.5)).zeros.size() == 2);
    const PotentialShape at = shape(oracle::g2(1.0, l, 1.0 / (2.0 * std::sqrt(l))));
    CHECK(at.zeros == std::vector<double>{0.0});
    CHECK(at.zero_at_infinity);
    const PotentialShape above = shape(oracle::g2(1.0, l, 1.2));
    CHECK(above.zeros == std::vector<double>{0.0});
    CHECK_FALSE(above.zero_at_infinity);
}

TEST_CASE("beta = 0 gives the symmetric well", "[potential]") {
    for (const ModelParams& base : {oracle::g1(1.2, 0.7, 0.0), oracle::g1(1.2, -0.7, 0.0), oracle::g2(0.9, 1.5, 0.0),
                                    oracle::g2(0.9, -1.5, 0.0)}) {
        const PotentialShape s = shape(base);
        CHECK(s.x_min == 0.0);
        CHECK(s.V_min == 0.0);
        for (double x : grid_for(base, 500)) {
            CHECK_THAT(potential(base, x) - potential(base, -x), WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("classify_energy examples", "[potential]") {
    const ModelParams p = oracle::g1(1.0, 1.0, 1.0);
    const EnergyRegime r = classify_energy(p, 0.6);
    CHECK(r.row == RegimeRow::G1PosBelowMax);
    CHECK(table_row(r.row) == 3);
    CHECK(std::string(describe(r.row)) == "V(+inf) < E < V_max");
    CHECK_THAT(r.C, WithinAbs(0.2, 1e-15));
    CHECK(*r.c > 0.0);
    CHECK(*r.Delta < 0.0);

    const double V_max = *shape(p).V_max;
    const EnergyRegime top = classify_energy(p, V_max);
    CHECK(top.row == RegimeRow::G1PosAtMax);
    CHECK_THAT(top.C, WithinRel((-1.0 + kSqrt5) / 2.0, 1e-14));
    CHECK(*top.Delta == 0.0);

    const EnergyRegime g2 = classify_energy(oracle::g2(1.0, 0.5, 0.5), 1.0);
    CHECK(g2.row == RegimeRow::G2PosBetween);
    CHECK(g2.C == 0.0);
    CHECK_THAT(g2.C_lower, WithinRel(-std::sqrt(2.0), 1e-15));
    CHECK_THAT(g2.C_upper, WithinRel(std::sqrt(2.0), 1e-15));
}

TEST_CASE("boundary hits snap to the equality rows", "[potential]") {
    const ModelParams p = oracle::g1(1.0, 1.0, 1.0);
    const double v_inf = 0.5;
    const double eps = energy_tolerance(v_inf);
    CHECK(classify_energy(p, v_inf + 0.5 * eps).row == RegimeRow::G1PosAsymptote);
    CHECK(classify_energy(p, v_inf + 0.5 * eps).C == 0.0);
    CHECK(classify_energy(p, v_inf - 0.5 * eps).row == RegimeRow::G1PosAsymptote);
    CHECK(classify_energy(p, v_inf + 2.0 * eps).row == RegimeRow::G1PosBelowMax);
    CHECK(classify_energy(p, v_inf - 2.0 * eps).row == RegimeRow::G1PosBounded);

    const PotentialShape s = shape(p);
    CHECK(classify_energy(p, s.V_min).row == RegimeRow::Equilibrium);
    CHECK(classify_energy(p, s.V_min - 1e-6).row == RegimeRow::BelowMinimum);
    CHECK(is_unbounded(RegimeRow::G1PosAboveMax));
    CHECK_FALSE(is_unbounded(RegimeRow::G2NegBounded));
}

TEST_CASE("Delta equals 4ac - b^2 of the quadrature constants", "[potential]") {
    oracle::Sampler rng(31);
    for (int i = 0; i < 10000; ++i) {
        const RegimeRow rows[] = {RegimeRow::G1PosBounded, RegimeRow::G1PosBelowMax, RegimeRow::G1PosAboveMax,
                                  RegimeRow::G1NegBounded};
        const oracle::Draw d = rng.draw(rows[i % 4]);
        const EnergyRegime r = classify_energy(d.p, d.E);
        const double a = r.C + d.p.alpha * d.p.alpha / d.p.lambda;
        const double b = 2.0 * d.p.beta;
        const double c = r.C * d.p.lambda;
        const double scale = std::abs(4.0 * a * c) + b * b;
        REQUIRE(std::abs(*r.Delta - (4.0 * a * c - b * b)) <= 1e-12 * scale);
    }
}

TEST_CASE("exactly one row matches for random energies", "[potential]") {
    oracle::Sampler rng(37);
    const RegimeRow rows[] = {RegimeRow::G1PosBounded, RegimeRow::G1PosBelowMax, RegimeRow::G1PosAboveMax,
                              RegimeRow::G1NegBounded, RegimeRow::G2PosBounded,  RegimeRow::G2PosBetween,
                              RegimeRow::G2PosAboveMinusInf, RegimeRow::G2NegBounded};
    for (int i = 0; i < 10000; ++i) {
        const RegimeRow want = rows[i % 8];
        const oracle::Draw d = rng.draw(want);
        REQUIRE(classify_energy(d.p, d.E).row == want);
    }
}

TEST_CASE("shape and regime serialize to JSON", "[potential]") {
    const nlohmann::json s = shape(oracle::g1(1.0, 1.0, 1.0));
    CHECK(s.contains("x_min"));
    CHECK(s.contains("V_max"));
    const nlohmann::json g = shape(oracle::g2(1.0, -1.0, 1.0));
    CHECK(g.at("V_plus_inf").is_null());
    const nlohmann::json r = classify_energy(oracle::g2(1.0, 0.5, 0.5), 1.0);
    CHECK(r.at("Delta").is_null());
    CHECK(r.at("C").get<double>() == 0.0);
}
