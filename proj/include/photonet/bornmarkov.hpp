// bornmarkov.hpp — Weak-coupling closed forms for a single driven cavity
//
// Scope: one resonator, any number of waveguides, at most one monochromatic drive,
// initially empty cavity. With tau = t - t0, x = exp(-kappa tau), Delta = w_d - w'_c:
//   u   = exp(-(i w'_c + kappa) tau)
//   v   = nbar (1 - x^2)
//   <a> = E0' e^{i(phase - phi)} [exp(-i w_d tau) - u]
//   n   = nbar (1 - x^2) + E0'^2 (1 + x^2 - 2 x cos(Delta tau))

#pragma once

#include <string>
#include <vector>

#include "photonet/model.hpp"
#include "photonet/transport.hpp"

namespace photonet {

// P Int dw/2pi J(w) / (pole - w). Symmetric excision around an interior pole with
// Richardson extrapolation in the excision half-width; plain quadrature otherwise.
double principal_value(const SpectralDensity& density, double pole);

struct BMParameters {
    double t0{0.0};
    double cavity_frequency{0.0};

    std::vector<double> shift;         // delta w_a at w_c
    std::vector<double> kappa;         // J_a(w_c) / 2
    std::vector<double> drive_shift;   // delta w~_a at w_d
    std::vector<double> drive_kappa;   // J_a(w_d) / 2

    double renormalized_frequency{0.0};        // w'_c
    double drive_renormalized_frequency{0.0};  // w~_c
    double kappa_total{0.0};
    double drive_kappa_total{0.0};
    double mean_occupation{0.0};               // nbar(w'_c, T); zero when kappa = 0

    bool driven{false};
    double drive_amplitude{0.0};
    double drive_frequency{0.0};
    double drive_phase{0.0};
    double phase{0.0};                 // phi = atan2(kappa~, w_d - w~_c)
    double amplified_amplitude{0.0};   // E0'

    std::size_t channels() const { return kappa.size(); }
};

// Throws UnsupportedError outside the scope above.
BMParameters born_markov_parameters(const NetworkSpec& spec);

// Non-empty when the weak-coupling assumption is doubtful (eta > 1 on any channel).
std::vector<std::string> born_markov_warnings(const NetworkSpec& spec);

cplx bm_propagator(const BMParameters& p, double t);

struct BMObservables {
    cplx field;
    double number{0.0};
    double correlation{0.0};   // v(t,t)
};

BMObservables bm_observables(const BMParameters& p, double t);
std::vector<double> bm_photocurrents(const BMParameters& p, double t);
double bm_source(const BMParameters& p, double t);
// Exact derivative of the closed-form photon number.
double bm_number_rate(const BMParameters& p, double t);

// Trace on the spec's output grid; residual uses the exact derivative, so edge is never set.
TransportTrace bm_trace(const NetworkSpec& spec);
TransportTrace bm_trace(const NetworkSpec& spec, const BMParameters& p);

} // namespace photonet
