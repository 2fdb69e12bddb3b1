#include "photonet/bornmarkov.hpp"

#include <cmath>
#include <numbers>

#include "photonet/quadrature.hpp"

namespace photonet {

namespace {

constexpr double TWO_PI = 2.0 * std::numbers::pi;

// Breakpoints of J on [lo, hi]: the support ends plus tabulation nodes.
std::vector<double> breakpoints(const SpectralDensity& density) {
    if (const auto* tab = std::get_if<TabulatedDensity>(&density)) {
        return tab->frequencies;
    }
    const auto [lo, hi] = spectral_support(density);
    return {lo, hi};
}

double integrate_piece(const SpectralDensity& density, double pole, double a, double b) {
    if (b <= a) {
        return 0.0;
    }
    quad::Options opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    opts.max_panels = 200000;
    auto f = [&](double w) { return evaluate_spectral_density(density, w) / (pole - w); };
    return quad::integrate<double>(f, a, b, opts).value;
}

// Int over the support minus (pole - eps, pole + eps).
double excised_integral(const SpectralDensity& density, double pole, double eps) {
    const auto nodes = breakpoints(density);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i];
        const double b = nodes[i + 1];
        total += integrate_piece(density, pole, a, std::min(b, pole - eps));
        total += integrate_piece(density, pole, std::max(a, pole + eps), b);
    }
    return total;
}

double half_density(const SpectralDensity& density, double w) {
    if (std::holds_alternative<DiscreteModes>(density)) {
        return 0.0;
    }
    return 0.5 * evaluate_spectral_density(density, w);
}

} // namespace

double principal_value(const SpectralDensity& density, double pole) {
    if (const auto* dm = std::get_if<DiscreteModes>(&density)) {
        double sum = 0.0;
        for (const auto& m : dm->modes) {
            if (m.frequency == pole) {
                throw RangeError("principal value taken exactly at a discrete mode frequency");
            }
            sum += std::norm(m.coupling) / (pole - m.frequency);
        }
        return sum;
    }
    const auto [lo, hi] = spectral_support(density);
    if (pole <= lo || pole >= hi) {
        return excised_integral(density, pole, 0.0) / TWO_PI;
    }
    // The excision error is 2 eps J'(pole) + O(eps^3); one Richardson step removes the linear term.
    const double eps = std::min(1e-3 * (hi - lo), 0.25 * std::min(pole - lo, hi - pole));
    const double coarse = excised_integral(density, pole, eps);
    const double fine = excised_integral(density, pole, 0.5 * eps);
    return (2.0 * fine - coarse) / TWO_PI;
}

std::vector<std::string> born_markov_warnings(const NetworkSpec& spec) {
    std::vector<std::string> out;
    for (const auto& wg : spec.waveguides) {
        if (const auto* sc = std::get_if<TightBindingSemicircle>(&wg.spectral)) {
            if (sc->coupling_ratio > 1.0) {
                out.push_back("waveguide '" + wg.label + "' has coupling ratio " + std::to_string(sc->coupling_ratio) +
                              " > 1; the Born-Markov approximation is outside its validity regime");
            }
        }
    }
    return out;
}

BMParameters born_markov_parameters(const NetworkSpec& spec) {
    if (spec.dim() != 1) {
        throw UnsupportedError("Born-Markov solutions are defined for a single resonator only");
    }
    if (spec.drives.size() > 1) {
        throw UnsupportedError("Born-Markov solutions support at most one drive");
    }
    if (spec.initial_field.size() > 0 && spec.initial_field.norm() != 0.0) {
        throw UnsupportedError("Born-Markov solutions assume an initially empty cavity (nonzero initial field)");
    }
    if (spec.initial_occupation.size() > 0 && spec.initial_occupation.norm() != 0.0) {
        throw UnsupportedError("Born-Markov solutions assume an initially empty cavity (nonzero occupation)");
    }
    BMParameters p;
    p.t0 = spec.grid.t0;
    p.cavity_frequency = spec.frequencies(0, 0).real();
    if (!spec.drives.empty()) {
        const auto* mono = std::get_if<Monochromatic>(&spec.drives.front().shape);
        if (!mono) {
            throw UnsupportedError("Born-Markov solutions require a monochromatic drive");
        }
        p.driven = true;
        p.drive_amplitude = mono->amplitude;
        p.drive_frequency = mono->frequency;
        p.drive_phase = mono->phase;
    }

    const double wc = p.cavity_frequency;
    double shift = 0.0;
    double drive_shift = 0.0;
    for (const auto& wg : spec.waveguides) {
        // Single resonator: the channel weight is |c|^2.
        const double weight = wg.coupling.squaredNorm();
        p.shift.push_back(weight * principal_value(wg.spectral, wc));
        p.kappa.push_back(weight * half_density(wg.spectral, wc));
        if (p.driven) {
            p.drive_shift.push_back(weight * principal_value(wg.spectral, p.drive_frequency));
            p.drive_kappa.push_back(weight * half_density(wg.spectral, p.drive_frequency));
        } else {
            p.drive_shift.push_back(0.0);
            p.drive_kappa.push_back(0.0);
        }
        shift += p.shift.back();
        drive_shift += p.drive_shift.back();
        p.kappa_total += p.kappa.back();
        p.drive_kappa_total += p.drive_kappa.back();
    }
    p.renormalized_frequency = wc + shift;
    p.drive_renormalized_frequency = wc + drive_shift;

    if (p.kappa_total > 0.0) {
        double weighted = 0.0;
        for (const auto& wg : spec.waveguides) {
            const double w = p.renormalized_frequency;
            weighted += wg.coupling.squaredNorm() * 2.0 * half_density(wg.spectral, w) *
                        bose_occupation(w, wg.temperature);
        }
        p.mean_occupation = weighted / (2.0 * p.kappa_total);
    }

    if (p.driven) {
        const double detuning = p.drive_frequency - p.drive_renormalized_frequency;
        p.phase = std::atan2(p.drive_kappa_total, detuning);
        const double denom = std::hypot(detuning, p.drive_kappa_total);
        p.amplified_amplitude = denom > 0.0 ? p.drive_amplitude / denom : 0.0;
        if (denom == 0.0 && p.drive_amplitude != 0.0) {
            throw UnsupportedError("Born-Markov drive response diverges: drive exactly on the lossless renormalized "
                                   "frequency");
        }
    }
    return p;
}

cplx bm_propagator(const BMParameters& p, double t) {
    const double tau = t - p.t0;
    return std::exp(-(I_UNIT * p.renormalized_frequency + p.kappa_total) * tau);
}

BMObservables bm_observables(const BMParameters& p, double t) {
    const double tau = t - p.t0;
    const double x = std::exp(-p.kappa_total * tau);
    BMObservables obs;
    obs.correlation = p.mean_occupation * (1.0 - x * x);
    obs.number = obs.correlation;
    if (p.driven) {
        const cplx amp = p.amplified_amplitude * std::exp(I_UNIT * (p.drive_phase - p.phase));
        obs.field = amp * (std::exp(-I_UNIT * (p.drive_frequency * tau)) - bm_propagator(p, t));
        const double delta = p.drive_frequency - p.renormalized_frequency;
        const double a2 = p.amplified_amplitude * p.amplified_amplitude;
        obs.number += a2 * (1.0 + x * x - 2.0 * x * std::cos(delta * tau));
    }
    return obs;
}

std::vector<double> bm_photocurrents(const BMParameters& p, double t) {
    const double tau = t - p.t0;
    const double x = std::exp(-p.kappa_total * tau);
    const double delta = p.drive_frequency - p.renormalized_frequency;
    const double c = std::cos(delta * tau);
    const double s = std::sin(delta * tau);
    const double a2 = p.amplified_amplitude * p.amplified_amplitude;
    std::vector<double> out;
    for (std::size_t a = 0; a < p.channels(); ++a) {
        double current = -2.0 * p.kappa[a] * p.mean_occupation * x * x;
        if (p.driven) {
            current += 2.0 * a2 *
                       (p.drive_kappa[a] + p.kappa[a] * x * x - (p.kappa[a] + p.drive_kappa[a]) * x * c +
                        (p.shift[a] - p.drive_shift[a]) * x * s);
        }
        out.push_back(current);
    }
    return out;
}

double bm_source(const BMParameters& p, double t) {
    if (!p.driven) {
        return 0.0;
    }
    const double tau = t - p.t0;
    const double x = std::exp(-p.kappa_total * tau);
    const double delta = p.drive_frequency - p.renormalized_frequency;
    const double detuning = p.drive_frequency - p.drive_renormalized_frequency;
    const double a2 = p.amplified_amplitude * p.amplified_amplitude;
    return 2.0 * a2 *
           (p.drive_kappa_total * (1.0 - x * std::cos(delta * tau)) + detuning * x * std::sin(delta * tau));
}

double bm_number_rate(const BMParameters& p, double t) {
    const double tau = t - p.t0;
    const double k = p.kappa_total;
    const double x = std::exp(-k * tau);
    double rate = 2.0 * k * p.mean_occupation * x * x;
    if (p.driven) {
        const double delta = p.drive_frequency - p.renormalized_frequency;
        const double a2 = p.amplified_amplitude * p.amplified_amplitude;
        rate += a2 * (-2.0 * k * x * x + 2.0 * k * x * std::cos(delta * tau) + 2.0 * delta * x * std::sin(delta * tau));
    }
    return rate;
}

TransportTrace bm_trace(const NetworkSpec& spec) {
    return bm_trace(spec, born_markov_parameters(spec));
}

TransportTrace bm_trace(const NetworkSpec& spec, const BMParameters& p) {
    TransportTrace tr;
    for (Index k : spec.grid.output_steps()) {
        const double t = spec.grid.time(k);
        const auto obs = bm_observables(p, t);
        const auto currents = bm_photocurrents(p, t);
        Eigen::VectorXd cur(static_cast<Index>(currents.size()));
        std::vector<Eigen::MatrixXcd> mats;
        for (std::size_t a = 0; a < currents.size(); ++a) {
            cur(static_cast<Index>(a)) = currents[a];
            mats.push_back(Eigen::MatrixXcd::Constant(1, 1, currents[a]));
        }
        const double source = bm_source(p, t);
        tr.times.push_back(t);
        tr.field.push_back(Eigen::VectorXcd::Constant(1, obs.field));
        tr.occupation.push_back(Eigen::MatrixXcd::Constant(1, 1, obs.number));
        tr.photon_numbers.push_back(Eigen::VectorXd::Constant(1, obs.number));
        tr.thermal_numbers.push_back(Eigen::VectorXd::Constant(1, obs.correlation));
        tr.currents.push_back(cur);
        tr.current_matrices.push_back(std::move(mats));
        tr.source.push_back(source);
        tr.total_number.push_back(obs.number);
        tr.residual.push_back(std::abs(bm_number_rate(p, t) - source + cur.sum()));
        tr.edge.push_back(false);
    }
    return tr;
}

} // namespace photonet
