// transport.hpp — Cavity fields, occupations, correlation functions, photocurrents and the continuity balance
//
// Sign convention: I_a > 0 means photons flow from the resonators into waveguide a, so
//   dN/dt = S - sum_a I_a,   S = 2 Im sum_i f_i(t) conj(<a_i(t)>).

#pragma once

#include <vector>

#include "photonet/dynamics.hpp"

namespace photonet {

// <a(t)> = u(t) a0 + y(t) at grid step k.
Eigen::VectorXcd cavity_field(const PropagatorSet& props, const NetworkSpec& spec, Index k);

// rho(t) = u rho0 u^dagger + v(t,t) + <a> y^dagger + y <a>^dagger - y y^dagger at output index o.
Eigen::MatrixXcd occupation(const PropagatorSet& props, const NetworkSpec& spec, Index o);

// rho(tau_j, t_k) for all j = 0..t_step. v(., t) comes from the double-integral form, which
// reproduces the equal-time v(t,t) of the propagator set.
ComplexSeries generalized_correlation(const KernelSet& kernels, const PropagatorSet& props, const NetworkSpec& spec,
                                      Index t_step);

// Green-function views: G^r(t,t0) = -i u, G^a(tau,t) = i ubar, G^<(tau,t) = i rho(tau,t).
Eigen::MatrixXcd retarded_green(const PropagatorSet& props, Index k);
Eigen::MatrixXcd advanced_green(const PropagatorSet& props, Index tau_step, Index t_step);
ComplexSeries lesser_green(const KernelSet& kernels, const PropagatorSet& props, const NetworkSpec& spec,
                           Index t_step);

// Current matrix per channel at output index o; I_a = Re Tr of it.
std::vector<Eigen::MatrixXcd> current_matrices(const PropagatorSet& props, const NetworkSpec& spec, Index o);

double source_rate(const Eigen::VectorXcd& drive, const Eigen::VectorXcd& field);

struct TransportTrace {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> field;
    std::vector<Eigen::MatrixXcd> occupation;
    std::vector<Eigen::VectorXd> photon_numbers;
    std::vector<Eigen::VectorXd> thermal_numbers;   // Re v_ii(t,t)
    std::vector<Eigen::VectorXd> currents;
    std::vector<std::vector<Eigen::MatrixXcd>> current_matrices;
    std::vector<double> source;
    std::vector<double> total_number;
    std::vector<double> residual;
    // True where dN/dt came from a one-sided difference.
    std::vector<bool> edge;

    std::size_t size() const { return times.size(); }
};

TransportTrace compute_transport(const NetworkSpec& spec, const PropagatorSet& props);

// dN/dt on a uniform output grid: centered inside, second-order one-sided at the ends.
// Sets edge[i] for the one-sided points.
std::vector<double> time_derivative(const std::vector<double>& values, double spacing, std::vector<bool>& edge);

// Fills residual/edge from total_number, source and currents.
void fill_continuity(TransportTrace& trace, double spacing);

} // namespace photonet
