#include "catch_amalgamated.hpp"

#include <cstring>

#include "nlosc/harness.hpp"
#include "nlosc/io.hpp"
#include "nlosc/kernels.hpp"
#include "support.hpp"

using namespace nlosc;
using kernels::Exec;

namespace {

// Bitwise equality, so that NaN and signed zeros are compared exactly too.
bool same(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same(const std::vector<Sample>& a, const std::vector<Sample>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same(a[i].t, b[i].t) || !same(a[i].x, b[i].x) || !same(a[i].xdot, b[i].xdot) || !same(a[i].E, b[i].E)) {
            return false;
        }
    }
    return true;
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same(a[i], b[i])) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit", "[kernels]") {
    kernels::set_max_threads(4);
    const std::vector<double> times = io::linspace(0.0, 40.0, 4001);

    const ModelParams g1 = oracle::g1(1.0, 1.0, 1.0);
    const ClosedFormSolution cf = from_energy(g1, 0.3, BranchSide::Either, harness::default_start(g1, 0.3), 0.0);
    CHECK(same(kernels::sample_closed_form(g1, cf, times, Exec::Serial),
               kernels::sample_closed_form(g1, cf, times, Exec::Parallel)));
    CHECK(same(kernels::closed_form_residuals(g1, cf, times, Exec::Serial),
               kernels::closed_form_residuals(g1, cf, times, Exec::Parallel)));

    const ModelParams g2 = oracle::g2(1.0, -1.0, 1.0);
    const ImplicitSolution im = ImplicitSolution::build(g2, 1.0, harness::default_start(g2, 1.0));
    const std::vector<double> short_times = io::linspace(0.0, 10.0, 501);
    CHECK(same(kernels::sample_implicit(im, short_times, Exec::Serial),
               kernels::sample_implicit(im, short_times, Exec::Parallel)));
    CHECK(same(kernels::implicit_round_trip(im, short_times, Exec::Serial),
               kernels::implicit_round_trip(im, short_times, Exec::Parallel)));

    const std::vector<double> xs = io::linspace(-0.99, 0.99, 10001);
    CHECK(same(kernels::potential_grid(g2, xs, Exec::Serial), kernels::potential_grid(g2, xs, Exec::Parallel)));

    const std::vector<double> energies = io::linspace(-1.0, 3.0, 10001);
    CHECK(kernels::classify_batch(g1, energies, Exec::Serial) == kernels::classify_batch(g1, energies, Exec::Parallel));
}

TEST_CASE("kernels match single evaluations", "[kernels]") {
    const ModelParams g1 = oracle::g1(1.0, -1.0, 0.45);
    const ClosedFormSolution cf = from_energy(g1, 0.0, BranchSide::Either, 0.0, 0.0);
    const std::vector<double> times = io::linspace(0.0, 5.0, 11);
    const std::vector<Sample> s = kernels::sample_closed_form(g1, cf, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(s[i].t == times[i]);
        CHECK(s[i].x == eval(cf, times[i]).x);
        CHECK(s[i].E == energy_from_state(g1, {times[i], s[i].x, s[i].xdot}));
    }
    const std::vector<double> xs = {-0.5, 0.0, 0.25};
    const std::vector<double> V = kernels::potential_grid(g1, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(V[i] == potential(g1, xs[i]));
    }
    CHECK(kernels::classify_batch(g1, {-1.0, 0.0})[1] == classify_energy(g1, 0.0).row);
}

TEST_CASE("thread count control", "[kernels]") {
    CHECK_THROWS_AS(kernels::set_max_threads(0), DomainError);
    kernels::set_max_threads(2);
    CHECK(kernels::max_threads() == 2);
    kernels::set_max_threads(1);
    CHECK(kernels::max_threads() == 1);
}

TEST_CASE("kernel errors propagate out of the parallel region", "[kernels]") {
    kernels::set_max_threads(4);
    const ModelParams p = oracle::g1(1.0, -1.0, 0.45);
    const std::vector<double> xs = {0.0, 0.5, 1.5, 0.2};
    CHECK_THROWS_AS(kernels::potential_grid(p, xs, Exec::Parallel), DomainError);
    CHECK_THROWS_AS(kernels::potential_grid(p, xs, Exec::Serial), DomainError);
}
