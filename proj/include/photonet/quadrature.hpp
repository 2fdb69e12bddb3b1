// quadrature.hpp — Adaptive Gauss-Kronrod (7/15) integration for real- or complex-valued integrands

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

namespace photonet::quad {

template <typename Value>
struct Result {
    Value value{};
    double error{0.0};
    std::size_t evaluations{0};
    bool converged{true};
};

struct Options {
    double abs_tol{1e-10};
    double rel_tol{1e-12};
    std::size_t initial_panels{8};
    std::size_t max_panels{20000};
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <typename Value>
struct Panel {
    double a;
    double b;
    Value value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename Value, typename F>
Panel<Value> kronrod_panel(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const Value fc = f(center);
    Value kronrod = fc * kronrod_weights[7];
    Value gauss = fc * gauss_weights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kronrod_nodes[i];
        const Value sum = f(center - dx) + f(center + dx);
        kronrod += sum * kronrod_weights[i];
        if (i % 2 == 1) {
            gauss += sum * gauss_weights[i / 2];
        }
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, magnitude(kronrod - gauss)};
}

} // namespace detail

// Integrates f over [a, b]. The interval is first cut into opts.initial_panels equal
// panels, then the panel with the largest error estimate is bisected until the total
// estimate meets max(abs_tol, rel_tol * |I|).
template <typename Value, typename F>
Result<Value> integrate(F&& f, double a, double b, const Options& opts = {}) {
    Result<Value> result;
    if (a == b) {
        return result;
    }
    std::priority_queue<detail::Panel<Value>> panels;
    const std::size_t n0 = std::max<std::size_t>(1, opts.initial_panels);
    const double width = (b - a) / static_cast<double>(n0);
    Value total{};
    double error = 0.0;
    for (std::size_t i = 0; i < n0; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == n0) ? b : lo + width;
        auto p = detail::kronrod_panel<Value>(f, lo, hi);
        total += p.value;
        error += p.error;
        panels.push(p);
    }
    result.evaluations = 15 * n0;
    while (error > std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(total))) {
        if (panels.size() >= opts.max_panels) {
            result.converged = false;
            break;
        }
        auto worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::kronrod_panel<Value>(f, worst.a, mid);
        auto right = detail::kronrod_panel<Value>(f, mid, worst.b);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum to shed the drift of incremental updates.
    Value sum{};
    double err = 0.0;
    while (!panels.empty()) {
        sum += panels.top().value;
        err += panels.top().error;
        panels.pop();
    }
    result.value = sum;
    result.error = err;
    return result;
}

} // namespace photonet::quad
