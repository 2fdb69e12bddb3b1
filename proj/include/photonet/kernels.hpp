// kernels.hpp — Dissipation and noise memory kernels of the waveguide channels
//
// For a channel with scalar density J(w) and coupling vector c,
//   g(dt)  = c c^dagger (1/2pi) Int J(w) exp(-i w dt) dw
//   gt(dt) = c c^dagger (1/2pi) Int J(w) n(w, T) exp(-i w dt) dw
// Both are stationary; negative lags follow from g(-dt) = g(dt)^dagger.

#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "photonet/lag_series.hpp"
#include "photonet/model.hpp"
#include "photonet/quadrature.hpp"

namespace photonet {

// J_1(x)/x, with the series branch for |x| < 1e-4.
double bessel_j1_over_x(double x);

// Scalar dissipation kernel (1/2pi) Int J(w) exp(-i w dt) dw. Closed form for the
// semicircle, finite sum for discrete modes, quadrature for tabulated densities.
cplx dissipation_kernel(const SpectralDensity& density, double lag);

// Same integral evaluated by adaptive quadrature, whatever the variant admits.
cplx dissipation_kernel_quadrature(const SpectralDensity& density, double lag, const quad::Options& opts = {});

// Scalar noise kernel (1/2pi) Int J(w) n(w,T) exp(-i w dt) dw; exactly zero at T = 0.
cplx noise_kernel(const SpectralDensity& density, double temperature, double lag, const quad::Options& opts = {});

// Channel matrix kernels c c^dagger * scalar.
Eigen::MatrixXcd dissipation_kernel(const WaveguideSpec& wg, double lag);
Eigen::MatrixXcd noise_kernel(const WaveguideSpec& wg, double lag);

struct KernelSet {
    TimeGrid grid;
    Index dim{0};
    // Per channel, lags 0, h, ..., n_steps*h.
    std::vector<ComplexSeries> dissipation;
    std::vector<ComplexSeries> noise;
    ComplexSeries total_dissipation;
    ComplexSeries total_noise;
    bool noise_vanishes{true};

    Index channels() const { return static_cast<Index>(dissipation.size()); }
    Index lags() const { return total_dissipation.size(); }
    // Total kernels at a signed lag index, using g(-k) = g(k)^dagger.
    Eigen::MatrixXcd dissipation_at(Index lag) const;
    Eigen::MatrixXcd noise_at(Index lag) const;
};

KernelSet build_kernel_set(const NetworkSpec& spec);

// CSV with columns dt,channel,i,j,re_g,im_g,re_gt,im_gt.
void write_kernel_csv(const KernelSet& kernels, std::ostream& out);

} // namespace photonet
