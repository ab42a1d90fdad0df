#include "nlosc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>

#include <omp.h>

namespace nlosc::kernels {
namespace {

// Runs body(i) for i in [0, n). Exceptions thrown inside the parallel region
// are carried out of it and rethrown on the calling thread.
template <typename Body>
void for_each_index(std::size_t n, Exec exec, Body body) {
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(nlosc_kernel_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

std::vector<Sample> sample_closed_form(const ModelParams& params, const ClosedFormSolution& sol,
                                       const std::vector<double>& times, Exec exec) {
    std::vector<Sample> out(times.size());
    for_each_index(times.size(), exec, [&](std::size_t i) {
        const PhasePoint pt = eval(sol, times[i]);
        out[i] = {times[i], pt.x, pt.xdot, energy_from_state(params, State{times[i], pt.x, pt.xdot})};
    });
    return out;
}

std::vector<double> closed_form_residuals(const ModelParams& params, const ClosedFormSolution& sol,
                                          const std::vector<double>& times, Exec exec) {
    std::vector<double> out(times.size());
    const double a2 = params.alpha * params.alpha;
    for_each_index(times.size(), exec, [&](std::size_t i) {
        const PhasePoint pt = eval(sol, times[i]);
        const double acc = eval_acceleration(sol, times[i]);
        out[i] = std::abs(euler_lagrange_residual(params, pt.x, pt.xdot, acc)) / (a2 * std::max(1.0, std::abs(pt.x)));
    });
    return out;
}

std::vector<Sample> sample_implicit(const ImplicitSolution& sol, const std::vector<double>& times, Exec exec) {
    std::vector<Sample> out(times.size());
    for_each_index(times.size(), exec, [&](std::size_t i) {
        const ImplicitPoint pt = sol.x_of_t(times[i]);
        out[i] = {times[i], pt.x, pt.xdot, energy_from_state(sol.params(), State{times[i], pt.x, pt.xdot})};
    });
    return out;
}

std::vector<double> implicit_round_trip(const ImplicitSolution& sol, const std::vector<double>& times, Exec exec) {
    std::vector<double> out(times.size());
    for_each_index(times.size(), exec, [&](std::size_t i) { out[i] = sol.round_trip_error(times[i]); });
    return out;
}

std::vector<double> implicit_round_trip_excess(const ImplicitSolution& sol, const std::vector<double>& times,
                                               Exec exec) {
    std::vector<double> out(times.size());
    for_each_index(times.size(), exec, [&](std::size_t i) { out[i] = sol.round_trip_excess(times[i]); });
    return out;
}

std::vector<double> potential_grid(const ModelParams& params, const std::vector<double>& xs, Exec exec) {
    std::vector<double> out(xs.size());
    for_each_index(xs.size(), exec, [&](std::size_t i) { out[i] = potential(params, xs[i]); });
    return out;
}

std::vector<RegimeRow> classify_batch(const ModelParams& params, const std::vector<double>& energies, Exec exec) {
    std::vector<RegimeRow> out(energies.size());
    for_each_index(energies.size(), exec, [&](std::size_t i) { out[i] = classify_energy(params, energies[i]).row; });
    return out;
}

int max_threads() { return omp_get_max_threads(); }

void set_max_threads(int n) {
    if (n < 1) {
        throw DomainError("thread count must be at least 1");
    }
    omp_set_num_threads(n);
}

}  // namespace nlosc::kernels
