#include "nlosc/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "nlosc/model.hpp"

namespace nlosc::numerics {

RootResult find_root(const std::function<double(double)>& f, double lo, double hi, const RootOptions& opts) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) {
        return {lo, flo, 0};
    }
    if (fhi == 0.0) {
        return {hi, fhi, 0};
    }
    if (!(std::signbit(flo) != std::signbit(fhi))) {
        throw ConvergenceError("find_root: interval does not bracket a sign change");
    }
    // Secant steps from the bracket ends; fall back to bisection whenever the
    // secant point leaves the middle of the bracket or progress stalls.
    double width_prev = 2.0 * std::abs(hi - lo);
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        double x = hi - fhi * (hi - lo) / (fhi - flo);
        const double width = std::abs(hi - lo);
        const double margin = 0.01 * width;
        if (!std::isfinite(x) || x <= std::min(lo, hi) + margin || x >= std::max(lo, hi) - margin ||
            width > 0.5 * width_prev) {
            x = 0.5 * (lo + hi);
        }
        width_prev = width;
        const double fx = f(x);
        if (fx == 0.0 || std::abs(fx) <= opts.f_tol) {
            return {x, fx, it};
        }
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        const double scale = std::max(1.0, std::abs(x));
        if (std::abs(hi - lo) <= opts.x_tol * scale) {
            const bool lo_better = std::abs(flo) < std::abs(fhi);
            return {lo_better ? lo : hi, lo_better ? flo : fhi, it};
        }
        // Adjacent doubles: nothing left to refine.
        if (std::nextafter(lo, hi) == hi) {
            const bool lo_better = std::abs(flo) < std::abs(fhi);
            return {lo_better ? lo : hi, lo_better ? flo : fhi, it};
        }
    }
    throw ConvergenceError("find_root: no convergence after " + std::to_string(opts.max_iter) + " iterations");
}

std::pair<double, double> expand_bracket(const std::function<double(double)>& f, double start, double step,
                                         std::size_t max_doublings) {
    const double f0 = f(start);
    if (f0 == 0.0) {
        return {start, start};
    }
    double prev = start;
    for (std::size_t k = 0; k < max_doublings; ++k) {
        const double x = start + step;
        if (!std::isfinite(x)) {
            break;
        }
        const double fx = f(x);
        if (std::signbit(fx) != std::signbit(f0) || fx == 0.0) {
            return {std::min(prev, x), std::max(prev, x)};
        }
        prev = x;
        step *= 2.0;
    }
    throw ConvergenceError("expand_bracket: no sign change found");
}

namespace {

// Kronrod 15-point nodes/weights and embedded Gauss 7-point weights.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * sum;
        }
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                double rel_tol, std::size_t max_intervals) {
    if (a == b) {
        return {0.0, 0.0, 0};
    }
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    std::size_t evaluations = 15;
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && heap.size() < max_intervals) {
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gk15(f, worst.a, mid);
        const Segment right = gk15(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    double value = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {value, err, evaluations};
}

}  // namespace nlosc::numerics
