// coefficients.hpp — Time-dependent master-equation coefficients extracted from the propagators
//
//   kappa_a(t)  = Int g_a(t - s) u(s) ds  u(t)^{-1}
//   lambda_a(t) = Int [gt_a(t - s) ubar(s,t) - g_a(t - s) v(s,t)] ds + kappa_a(t) v(t,t)
//   f_a(t)      = i kappa_a(t) y(t) - i Int g_a(t - s) y(s) ds
//
// Totals: omega'(t) = omega - (i/2) sum_a (kappa_a - kappa_a^dagger),
//         gamma(t) = (1/2) sum_a (kappa_a + kappa_a^dagger),
//         gammat(t) = sum_a (lambda_a + lambda_a^dagger),  f'(t) = f(t) + sum_a f_a(t).

#pragma once

#include <ostream>
#include <vector>

#include "photonet/dynamics.hpp"

namespace photonet {

// u(t) is treated as singular once sigma_max * max(1, sigma_max) / sigma_min exceeds this.
inline constexpr double SINGULAR_PROPAGATOR_LIMIT = 1e8;

// Conditioning measure used above; infinity for an exactly singular matrix.
double propagator_condition(const Eigen::MatrixXcd& u);

// Per-channel kappa at output index o. Throws SingularPropagatorError when u(t) is ill conditioned.
std::vector<Eigen::MatrixXcd> compute_kappa(const PropagatorSet& props, Index o);
std::vector<Eigen::MatrixXcd> compute_lambda(const PropagatorSet& props, Index o,
                                             const std::vector<Eigen::MatrixXcd>& kappa);
std::vector<Eigen::VectorXcd> compute_feedback(const PropagatorSet& props, Index o,
                                               const std::vector<Eigen::MatrixXcd>& kappa);

struct CoefficientTrace {
    std::vector<double> times;
    std::vector<double> condition;
    // Rows where u(t) was too ill conditioned; their coefficient entries are NaN.
    std::vector<bool> singular;

    std::vector<std::vector<Eigen::MatrixXcd>> kappa;    // [output][channel]
    std::vector<std::vector<Eigen::MatrixXcd>> lambda;   // [output][channel]
    std::vector<std::vector<Eigen::VectorXcd>> feedback; // [output][channel]

    std::vector<Eigen::MatrixXcd> omega_eff;
    std::vector<Eigen::MatrixXcd> gamma;
    std::vector<Eigen::MatrixXcd> gamma_noise;
    std::vector<Eigen::VectorXcd> drive_eff;
    std::vector<Eigen::VectorXd> gamma_eigenvalues;
};

CoefficientTrace compute_coefficients(const NetworkSpec& spec, const PropagatorSet& props);

// Long format: t,singular,channel,quantity,i,j,re,im where channel is "total" for totals.
void write_coefficient_csv(const CoefficientTrace& trace, std::ostream& out);

} // namespace photonet
