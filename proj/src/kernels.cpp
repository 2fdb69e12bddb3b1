#include "photonet/kernels.hpp"

#include <cmath>
#include <numbers>

#include "photonet/csv.hpp"

namespace photonet {

namespace {

constexpr double TWO_PI = 2.0 * std::numbers::pi;

void require_band_covered(const TabulatedDensity& tab) {
    if (tab.values.size() < 2 || tab.values.front() != 0.0 || tab.values.back() != 0.0) {
        throw RangeError("tabulated spectral density does not vanish at the ends of its grid; "
                         "the band extends beyond the tabulated range");
    }
}

// (1/2pi) Int J(w) weight(w) dw by adaptive quadrature. The semicircle is integrated in the
// angle variable w = center + 2 xi cos(theta), which removes the square-root edges.
template <typename Weight>
cplx spectral_integral(const SpectralDensity& density, double lag, Weight&& weight, const quad::Options& base) {
    quad::Options opts = base;
    if (const auto* sc = std::get_if<TightBindingSemicircle>(&density)) {
        const double xi = sc->hopping;
        const double eta2 = sc->coupling_ratio * sc->coupling_ratio;
        if (eta2 == 0.0) {
            return 0.0;
        }
        opts.initial_panels = std::max<std::size_t>(
            opts.initial_panels, static_cast<std::size_t>(std::ceil(2.0 * xi * std::abs(lag))));
        auto integrand = [&](double theta) {
            const double s = std::sin(theta);
            const double w = sc->center + 2.0 * xi * std::cos(theta);
            return (eta2 * 4.0 * xi * xi * s * s) * weight(w) * std::exp(-I_UNIT * (w * lag));
        };
        return quad::integrate<cplx>(integrand, 0.0, std::numbers::pi, opts).value / TWO_PI;
    }
    if (std::holds_alternative<DiscreteModes>(density)) {
        throw VariantError("a discrete mode set has no density to integrate");
    }
    const auto& tab = std::get<TabulatedDensity>(density);
    require_band_covered(tab);
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < tab.frequencies.size(); ++i) {
        const double lo = tab.frequencies[i];
        const double hi = tab.frequencies[i + 1];
        quad::Options seg = opts;
        seg.initial_panels = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((hi - lo) * std::abs(lag))));
        auto integrand = [&](double w) {
            return evaluate_spectral_density(density, w) * weight(w) * std::exp(-I_UNIT * (w * lag));
        };
        total += quad::integrate<cplx>(integrand, lo, hi, seg).value;
    }
    return total / TWO_PI;
}

} // namespace

double bessel_j1_over_x(double x) {
    if (std::abs(x) < 1e-4) {
        return 0.5 - x * x / 16.0;
    }
    return std::cyl_bessel_j(1.0, std::abs(x)) / std::abs(x);
}

cplx dissipation_kernel(const SpectralDensity& density, double lag) {
    if (const auto* sc = std::get_if<TightBindingSemicircle>(&density)) {
        const double xi = sc->hopping;
        const double eta2 = sc->coupling_ratio * sc->coupling_ratio;
        return eta2 * 2.0 * xi * xi * bessel_j1_over_x(2.0 * xi * lag) * std::exp(-I_UNIT * (sc->center * lag));
    }
    if (const auto* dm = std::get_if<DiscreteModes>(&density)) {
        cplx sum = 0.0;
        for (const auto& m : dm->modes) {
            sum += std::norm(m.coupling) * std::exp(-I_UNIT * (m.frequency * lag));
        }
        return sum;
    }
    return dissipation_kernel_quadrature(density, lag);
}

cplx dissipation_kernel_quadrature(const SpectralDensity& density, double lag, const quad::Options& opts) {
    return spectral_integral(density, lag, [](double) { return 1.0; }, opts);
}

cplx noise_kernel(const SpectralDensity& density, double temperature, double lag, const quad::Options& opts) {
    if (temperature <= 0.0) {
        return 0.0;
    }
    if (const auto* dm = std::get_if<DiscreteModes>(&density)) {
        cplx sum = 0.0;
        for (const auto& m : dm->modes) {
            sum += std::norm(m.coupling) * bose_occupation(m.frequency, temperature) *
                   std::exp(-I_UNIT * (m.frequency * lag));
        }
        return sum;
    }
    return spectral_integral(density, lag, [temperature](double w) { return bose_occupation(w, temperature); },
                             opts);
}

Eigen::MatrixXcd dissipation_kernel(const WaveguideSpec& wg, double lag) {
    return dissipation_kernel(wg.spectral, lag) * (wg.coupling * wg.coupling.adjoint());
}

Eigen::MatrixXcd noise_kernel(const WaveguideSpec& wg, double lag) {
    return noise_kernel(wg.spectral, wg.temperature, lag) * (wg.coupling * wg.coupling.adjoint());
}

Eigen::MatrixXcd KernelSet::dissipation_at(Index lag) const {
    return lag >= 0 ? Eigen::MatrixXcd(total_dissipation[lag]) : Eigen::MatrixXcd(total_dissipation[-lag].adjoint());
}

Eigen::MatrixXcd KernelSet::noise_at(Index lag) const {
    return lag >= 0 ? Eigen::MatrixXcd(total_noise[lag]) : Eigen::MatrixXcd(total_noise[-lag].adjoint());
}

KernelSet build_kernel_set(const NetworkSpec& spec) {
    KernelSet ks;
    ks.grid = spec.grid;
    ks.dim = spec.dim();
    const Index n = spec.dim();
    const Index lags = spec.grid.n_steps + 1;
    const double h = spec.grid.step();
    ks.total_dissipation = ComplexSeries(lags, n, n);
    ks.total_noise = ComplexSeries(lags, n, n);

    for (std::size_t a = 0; a < spec.waveguides.size(); ++a) {
        const auto& wg = spec.waveguides[a];
        const Eigen::MatrixXcd weight = wg.coupling * wg.coupling.adjoint();
        ComplexSeries g(lags, n, n);
        ComplexSeries gt(lags, n, n);
        const bool thermal = wg.temperature > 0.0;
        try {
            for (Index k = 0; k < lags; ++k) {
                const double lag = h * static_cast<double>(k);
                g[k] = dissipation_kernel(wg.spectral, lag) * weight;
                if (thermal) {
                    gt[k] = noise_kernel(wg.spectral, wg.temperature, lag) * weight;
                }
            }
        } catch (const Error& e) {
            throw Error("channel " + std::to_string(a) + " (" + wg.label + "): " + e.what());
        }
        if (thermal && gt.stacked().cwiseAbs().maxCoeff() > 0.0) {
            ks.noise_vanishes = false;
        }
        ks.total_dissipation += g;
        ks.total_noise += gt;
        ks.dissipation.push_back(std::move(g));
        ks.noise.push_back(std::move(gt));
    }
    return ks;
}

void write_kernel_csv(const KernelSet& kernels, std::ostream& out) {
    out << "# photonet kernels v1\n";
    out << "dt,channel,i,j,re_g,im_g,re_gt,im_gt\n";
    const double h = kernels.grid.step();
    for (Index k = 0; k < kernels.lags(); ++k) {
        for (Index a = 0; a < kernels.channels(); ++a) {
            for (Index i = 0; i < kernels.dim; ++i) {
                for (Index j = 0; j < kernels.dim; ++j) {
                    const cplx g = kernels.dissipation[a][k](i, j);
                    const cplx gt = kernels.noise[a][k](i, j);
                    out << format_double(h * static_cast<double>(k)) << ',' << a << ',' << i << ',' << j << ','
                        << format_double(g.real()) << ',' << format_double(g.imag()) << ','
                        << format_double(gt.real()) << ',' << format_double(gt.imag()) << '\n';
                }
            }
        }
    }
}

} // namespace photonet
