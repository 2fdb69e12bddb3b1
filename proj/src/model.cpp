#include "photonet/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace photonet {

std::vector<Index> TimeGrid::output_steps() const {
    std::vector<Index> steps;
    for (Index k = 0; k <= n_steps; k += output_every) {
        steps.push_back(k);
    }
    return steps;
}

std::string ValidationReport::describe() const {
    std::ostringstream out;
    for (const auto& e : errors) {
        out << "error: " << e.location << ": " << e.message << "\n";
    }
    for (const auto& w : warnings) {
        out << "warning: " << w.location << ": " << w.message << "\n";
    }
    return out.str();
}

namespace {

bool is_hermitian(const Eigen::MatrixXcd& m, double rel_tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double min_eigenvalue(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool strictly_increasing(const std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            return false;
        }
    }
    return true;
}

std::string at(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

void validate_density(const SpectralDensity& density, const std::string& where, double temperature,
                      ValidationReport& report) {
    auto error = [&](const std::string& msg) { report.errors.push_back({where, msg}); };
    if (const auto* sc = std::get_if<TightBindingSemicircle>(&density)) {
        if (!(sc->hopping > 0.0) || !std::isfinite(sc->hopping)) {
            error("hopping must be positive");
        }
        if (!(sc->coupling_ratio >= 0.0) || !std::isfinite(sc->coupling_ratio)) {
            error("couplingRatio must be non-negative");
        }
        if (!std::isfinite(sc->center)) {
            error("center must be finite");
        }
    } else if (const auto* dm = std::get_if<DiscreteModes>(&density)) {
        for (std::size_t k = 0; k < dm->modes.size(); ++k) {
            const auto& m = dm->modes[k];
            if (!std::isfinite(m.frequency) || !std::isfinite(std::abs(m.coupling))) {
                report.errors.push_back({at(where + ".modes", k), "non-finite mode"});
            }
        }
    } else {
        const auto& tab = std::get<TabulatedDensity>(density);
        if (tab.frequencies.size() != tab.values.size() || tab.frequencies.size() < 2) {
            error("tabulated density needs matching frequencies/values with at least two points");
            return;
        }
        if (!strictly_increasing(tab.frequencies)) {
            error("tabulated frequencies must be strictly increasing");
        }
        for (double v : tab.values) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                error("tabulated density values must be finite and non-negative");
                break;
            }
        }
    }
    if (temperature > 0.0 && report.errors.empty()) {
        const auto [lo, hi] = spectral_support(density);
        (void)hi;
        if (!(lo > 0.0)) {
            error("thermal channel requires spectral support at positive frequencies");
        }
    }
}

} // namespace

ValidationReport validate(const NetworkSpec& spec) {
    ValidationReport report;
    auto error = [&](std::string where, std::string msg) {
        report.errors.push_back({std::move(where), std::move(msg)});
    };

    const Index n = spec.frequencies.rows();
    if (n == 0 || spec.frequencies.cols() != n) {
        error("frequencies", "frequency matrix must be square and non-empty");
        return report;
    }
    if (!spec.frequencies.allFinite()) {
        error("frequencies", "non-finite entries");
    } else {
        if (!is_hermitian(spec.frequencies, 1e-12)) {
            error("frequencies", "frequency matrix is not Hermitian");
        }
        for (Index i = 0; i < n; ++i) {
            if (!(spec.frequencies(i, i).real() > 0.0)) {
                error("frequencies[" + std::to_string(i) + "][" + std::to_string(i) + "]",
                      "diagonal frequency must be positive");
            }
        }
    }

    const auto& grid = spec.grid;
    if (!(grid.t_end > grid.t0) || !std::isfinite(grid.t0) || !std::isfinite(grid.t_end)) {
        error("grid", "tEnd must exceed t0");
    }
    if (grid.n_steps < 1) {
        error("grid.nSteps", "must be positive");
    }
    if (grid.output_every < 1) {
        error("grid.outputEvery", "must be positive");
    }

    for (std::size_t d = 0; d < spec.drives.size(); ++d) {
        const auto& drive = spec.drives[d];
        const std::string where = at("drives", d);
        if (drive.target < 0 || drive.target >= n) {
            error(where + ".target", "resonator index out of range");
        }
        if (const auto* mono = std::get_if<Monochromatic>(&drive.shape)) {
            if (!(mono->amplitude >= 0.0) || !std::isfinite(mono->amplitude)) {
                error(where + ".amplitude", "must be finite and non-negative");
            }
            if (!std::isfinite(mono->frequency) || !std::isfinite(mono->phase)) {
                error(where, "non-finite frequency or phase");
            }
        } else {
            const auto& tab = std::get<TabulatedDrive>(drive.shape);
            if (tab.times.size() != tab.values.size() || tab.times.size() < 2) {
                error(where, "tabulated drive needs matching times/values with at least two points");
            } else {
                if (!strictly_increasing(tab.times)) {
                    error(where + ".times", "must be strictly increasing");
                }
                if (tab.times.front() > grid.t0 || tab.times.back() < grid.t_end) {
                    error(where + ".times", "must cover the simulation window");
                }
            }
        }
    }

    for (std::size_t a = 0; a < spec.waveguides.size(); ++a) {
        const auto& wg = spec.waveguides[a];
        const std::string where = at("waveguides", a);
        if (!(wg.temperature >= 0.0) || !std::isfinite(wg.temperature)) {
            error(where + ".temperature", "temperature must be non-negative");
        }
        if (wg.coupling.size() != n) {
            error(where + ".coupling", "coupling vector length must equal the number of resonators");
        } else if (!wg.coupling.allFinite()) {
            error(where + ".coupling", "non-finite entries");
        }
        validate_density(wg.spectral, where + ".spectral", std::max(wg.temperature, 0.0), report);
    }

    if (spec.initial_field.size() != n) {
        error("initialField", "length must equal the number of resonators");
    }
    if (spec.initial_occupation.rows() != n || spec.initial_occupation.cols() != n) {
        error("initialOccupation", "must be an N x N matrix");
    } else if (report.errors.empty()) {
        const auto& rho = spec.initial_occupation;
        const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
        if (!is_hermitian(rho, 1e-12)) {
            error("initialOccupation", "not Hermitian");
        } else if (min_eigenvalue(rho) < -1e-10 * scale) {
            error("initialOccupation", "not positive semidefinite");
        } else {
            const Eigen::MatrixXcd fluct = rho - spec.initial_field * spec.initial_field.adjoint();
            const Eigen::MatrixXcd sym = 0.5 * (fluct + fluct.adjoint());
            if (min_eigenvalue(sym) < -1e-10 * scale) {
                error("initialOccupation",
                      "initialOccupation - initialField initialField^dagger is not positive semidefinite");
            }
        }
    }

    if (report.errors.empty()) {
        const double h = grid.step();
        const double wmax = max_frequency(spec);
        if (h * wmax > 0.15) {
            report.warnings.push_back(
                {"grid", "step resolves the fastest carrier with fewer than ~40 points per period (h*wmax = " +
                             std::to_string(h * wmax) + ")"});
        }
    }
    return report;
}

void require_valid(const NetworkSpec& spec) {
    const auto report = validate(spec);
    if (!report.ok()) {
        throw Error("invalid network specification:\n" + report.describe());
    }
}

cplx evaluate_drive(const DrivingSignal& drive, double t, double t0) {
    if (const auto* mono = std::get_if<Monochromatic>(&drive.shape)) {
        return mono->amplitude * std::exp(I_UNIT * (mono->phase - mono->frequency * (t - t0)));
    }
    const auto& tab = std::get<TabulatedDrive>(drive.shape);
    if (tab.times.empty() || t < tab.times.front() || t > tab.times.back()) {
        throw RangeError("tabulated drive queried outside its window at t = " + std::to_string(t));
    }
    auto it = std::upper_bound(tab.times.begin(), tab.times.end(), t);
    if (it == tab.times.end()) {
        return tab.values.back();
    }
    const auto hi = static_cast<std::size_t>(it - tab.times.begin());
    const auto lo = hi - 1;
    const double w = (t - tab.times[lo]) / (tab.times[hi] - tab.times[lo]);
    return (1.0 - w) * tab.values[lo] + w * tab.values[hi];
}

Eigen::VectorXcd drive_vector(const NetworkSpec& spec, double t) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(spec.dim());
    for (const auto& d : spec.drives) {
        f(d.target) += evaluate_drive(d, t, spec.grid.t0);
    }
    return f;
}

double evaluate_spectral_density(const SpectralDensity& density, double omega) {
    if (const auto* sc = std::get_if<TightBindingSemicircle>(&density)) {
        const double x = omega - sc->center;
        const double a2 = 4.0 * sc->hopping * sc->hopping;
        if (x * x >= a2) {
            return 0.0;
        }
        return sc->coupling_ratio * sc->coupling_ratio * std::sqrt(a2 - x * x);
    }
    if (std::holds_alternative<DiscreteModes>(density)) {
        throw VariantError("a discrete mode set has no pointwise spectral density");
    }
    const auto& tab = std::get<TabulatedDensity>(density);
    if (tab.frequencies.empty() || omega <= tab.frequencies.front() || omega >= tab.frequencies.back()) {
        return 0.0;
    }
    auto it = std::upper_bound(tab.frequencies.begin(), tab.frequencies.end(), omega);
    const auto hi = static_cast<std::size_t>(it - tab.frequencies.begin());
    const auto lo = hi - 1;
    const double w = (omega - tab.frequencies[lo]) / (tab.frequencies[hi] - tab.frequencies[lo]);
    return (1.0 - w) * tab.values[lo] + w * tab.values[hi];
}

std::pair<double, double> spectral_support(const SpectralDensity& density) {
    if (const auto* sc = std::get_if<TightBindingSemicircle>(&density)) {
        return {sc->lower_edge(), sc->upper_edge()};
    }
    if (const auto* dm = std::get_if<DiscreteModes>(&density)) {
        if (dm->modes.empty()) {
            return {0.0, 0.0};
        }
        auto [lo, hi] = std::minmax_element(dm->modes.begin(), dm->modes.end(),
                                            [](const auto& a, const auto& b) { return a.frequency < b.frequency; });
        return {lo->frequency, hi->frequency};
    }
    const auto& tab = std::get<TabulatedDensity>(density);
    if (tab.frequencies.empty()) {
        return {0.0, 0.0};
    }
    return {tab.frequencies.front(), tab.frequencies.back()};
}

double bose_occupation(double omega, double temperature) {
    if (temperature <= 0.0) {
        return 0.0;
    }
    return 1.0 / std::expm1(omega / (KB_OVER_HBAR * temperature));
}

double max_frequency(const NetworkSpec& spec) {
    double wmax = 0.0;
    if (spec.dim() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(spec.frequencies, Eigen::EigenvaluesOnly);
        wmax = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    for (const auto& wg : spec.waveguides) {
        const auto [lo, hi] = spectral_support(wg.spectral);
        wmax = std::max({wmax, std::abs(lo), std::abs(hi)});
    }
    return wmax;
}

} // namespace photonet
