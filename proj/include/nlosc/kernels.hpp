// Data-parallel batch kernels. Every kernel has a serial reference path and an
// OpenMP path; both produce identical results element by element.
#pragma once

#include <vector>

#include "nlosc/closed_form.hpp"
#include "nlosc/dynamics.hpp"
#include "nlosc/implicit.hpp"
#include "nlosc/potential.hpp"

namespace nlosc::kernels {

enum class Exec { Serial, Parallel };

/// (t, x, xdot, E) of a closed-form solution at each time.
std::vector<Sample> sample_closed_form(const ModelParams& params, const ClosedFormSolution& sol,
                                       const std::vector<double>& times, Exec exec = Exec::Parallel);

/// |Euler-Lagrange residual| / (alpha^2 max(1, |x|)) along a closed-form solution.
std::vector<double> closed_form_residuals(const ModelParams& params, const ClosedFormSolution& sol,
                                          const std::vector<double>& times, Exec exec = Exec::Parallel);

/// (t, x, xdot, E) of an implicit solution, each time inverted independently.
std::vector<Sample> sample_implicit(const ImplicitSolution& sol, const std::vector<double>& times,
                                    Exec exec = Exec::Parallel);

/// |t_of_x(x_of_t(t)) - t| on the current pass for each time.
std::vector<double> implicit_round_trip(const ImplicitSolution& sol, const std::vector<double>& times,
                                        Exec exec = Exec::Parallel);

/// round_trip_excess for each time.
std::vector<double> implicit_round_trip_excess(const ImplicitSolution& sol, const std::vector<double>& times,
                                               Exec exec = Exec::Parallel);

/// V on a grid of positions.
std::vector<double> potential_grid(const ModelParams& params, const std::vector<double>& xs,
                                   Exec exec = Exec::Parallel);

/// Regime row of each energy.
std::vector<RegimeRow> classify_batch(const ModelParams& params, const std::vector<double>& energies,
                                      Exec exec = Exec::Parallel);

/// Number of threads the parallel path would use.
int max_threads();

/// Caps the thread count of the parallel path (n >= 1).
void set_max_threads(int n);

}  // namespace nlosc::kernels
