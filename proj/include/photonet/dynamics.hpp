// dynamics.hpp — Volterra integro-differential solvers for the resonator propagators
//
// On the uniform grid t_k = t0 + k h the propagators obey
//   u'(t) + i w u(t) + Int_{t0}^{t} g(t-s) u(s) ds = 0,            u(t0) = 1
//   y'(t) + i w y(t) + Int_{t0}^{t} g(t-s) y(s) ds = -i f(t),       y(t0) = 0
//   v'(tau,t) + i w v + Int_{t0}^{tau} g(tau-s) v(s,t) ds = Int_{t0}^{t} gt(tau-s) ubar(s,t) ds
// with ubar(tau,t) = u(t - tau + t0)^dagger for stationary kernels.
//
// The free part is propagated exactly with exp(-i w h); memory integrals use the
// trapezoidal rule, and the end-point term of the step is treated implicitly, which
// makes each step a small constant linear solve. Second order in h.

#pragma once

#include <vector>

#include "photonet/kernels.hpp"
#include "photonet/lag_series.hpp"
#include "photonet/model.hpp"

namespace photonet {

// exp(sign * i * omega * h) for Hermitian omega.
Eigen::MatrixXcd free_step(const Eigen::MatrixXcd& omega, double h, double sign = -1.0);

struct VolterraSolution {
    ComplexSeries values;
    // Int_{0}^{t_k} K(t_k - s) X(s) ds by the trapezoidal rule.
    ComplexSeries memory;
};

// X_{k+1} from X' = -i w X - Int K(t-s) X(s) ds + s(t), where step_propagator = exp(-i w h).
// kernel must hold at least n_steps + 1 lags; forcing (if given) n_steps + 1 samples.
VolterraSolution integrate_volterra(const Eigen::MatrixXcd& step_propagator, const ComplexSeries& kernel, double h,
                                    const Eigen::MatrixXcd& initial, Index n_steps,
                                    const ComplexSeries* forcing = nullptr);

VolterraSolution solve_u(const KernelSet& kernels, const Eigen::MatrixXcd& omega);
VolterraSolution solve_y(const KernelSet& kernels, const NetworkSpec& spec);

// y(t_k) from the convolution -i Int u(t_k - s) f(s) ds (trapezoidal rule).
Eigen::VectorXcd y_by_convolution(const ComplexSeries& u, const NetworkSpec& spec, Index step);

// ubar(tau_k, t) for k = 0..t_step via the time-translation identity.
ComplexSeries solve_ubar_column(const ComplexSeries& u, Index t_step);

// ubar(tau_k, t) for k = 0..t_step by integrating the adjoint equation backward from tau = t.
ComplexSeries solve_ubar_backward(const KernelSet& kernels, const Eigen::MatrixXcd& omega, Index t_step);

// Int_{t0}^{t} gt(tau_k - s) ubar(s, t) ds for k = 0..t_step.
ComplexSeries noise_source_column(const KernelSet& kernels, const ComplexSeries& u, Index t_step);

// v(tau_k, t) for k = 0..t_step from the inhomogeneous Volterra equation.
ComplexSeries solve_v_column(const KernelSet& kernels, const Eigen::MatrixXcd& omega, const ComplexSeries& u,
                             Index t_step);

// v(tau_k, t) from the double integral Int Int u(tau - s) gt(s - s') ubar(s', t).
ComplexSeries v_column_double_integral(const KernelSet& kernels, const ComplexSeries& u, Index t_step);

// Everything downstream observables need. Quantities indexed "at output" follow
// output_steps; the rest cover every grid step.
struct PropagatorSet {
    TimeGrid grid;
    std::vector<Index> output_steps;

    ComplexSeries u;          // N x N, every step
    ComplexSeries y;          // N x 1, every step
    ComplexSeries memory_u;   // Int g(t-s) u(s) ds, every step

    ComplexSeries v_diag;     // v(t,t), at output

    // Per channel.
    std::vector<ComplexSeries> channel_memory_u;   // Int g_a(t-s) u(s) ds, every step
    std::vector<ComplexSeries> channel_memory_y;   // Int g_a(t-s) y(s) ds, at output
    std::vector<ComplexSeries> channel_memory_v;   // Int g_a(t-s) v(s,t) ds, at output
    std::vector<ComplexSeries> channel_noise_ubar; // Int gt_a(t-s) ubar(s,t) ds, at output

    Index dim() const { return u.block_rows(); }
    Index channels() const { return static_cast<Index>(channel_memory_u.size()); }
    Index outputs() const { return static_cast<Index>(output_steps.size()); }
    double output_time(Index o) const { return grid.time(output_steps[static_cast<std::size_t>(o)]); }
};

// Solves u and y, then sweeps the output times once to accumulate v(t,t) and the
// channel memory integrals. Cost O(n^2 N^3) overall.
PropagatorSet solve_propagators(const NetworkSpec& spec, const KernelSet& kernels);

// Max over interior grid points of || d/dt [e^{i w t} u] + e^{i w t} Int g u || with a
// centered difference; a posteriori check of the retarded Dyson equation.
double dyson_residual(const PropagatorSet& props, const Eigen::MatrixXcd& omega);

// CSV with t, re/im of u_ij, re/im of y_i.
void write_propagator_csv(const PropagatorSet& props, std::ostream& out);

} // namespace photonet
