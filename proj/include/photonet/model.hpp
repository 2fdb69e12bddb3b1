// model.hpp — Declarative description of a driven resonator network coupled to waveguides

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace photonet {

using cplx = std::complex<double>;
using Index = Eigen::Index;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Frequencies and rates are angular frequencies in rad/ns, hbar = 1.
// k_B / hbar from the exact SI k_B and CODATA 2018 hbar, expressed in rad/ns per kelvin.
inline constexpr double BOLTZMANN_J_PER_K = 1.380649e-23;
inline constexpr double HBAR_J_S = 1.054571817e-34;
inline constexpr double KB_OVER_HBAR = BOLTZMANN_J_PER_K / HBAR_J_S * 1e-9;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Query outside a tabulated window or band.
class RangeError : public Error {
public:
    using Error::Error;
};

// Operation not defined for the given variant.
class VariantError : public Error {
public:
    using Error::Error;
};

// Configuration outside what an operation supports (e.g. Born-Markov with N > 1).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

// NaN or overflow while integrating; carries the failing step.
class SolverError : public Error {
public:
    SolverError(const std::string& what, Index step) : Error(what), step_(step) {}
    Index step() const { return step_; }
private:
    Index step_;
};

class SingularPropagatorError : public Error {
public:
    SingularPropagatorError(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const { return time_; }
private:
    double time_;
};

struct TimeGrid {
    double t0{0.0};
    double t_end{1.0};
    Index n_steps{1};
    Index output_every{1};

    double step() const { return (t_end - t0) / static_cast<double>(n_steps); }
    double time(Index k) const { return t0 + static_cast<double>(k) * step(); }
    // Grid indices at which observables are reported: 0, e, 2e, ... <= n_steps.
    std::vector<Index> output_steps() const;
};

struct Monochromatic {
    double amplitude{0.0};
    double frequency{0.0};
    double phase{0.0};
};

// Piecewise-linear complex drive on a strictly increasing time grid.
struct TabulatedDrive {
    std::vector<double> times;
    std::vector<cplx> values;
};

struct DrivingSignal {
    std::variant<Monochromatic, TabulatedDrive> shape;
    Index target{0};
};

// J(w) = eta^2 sqrt(4 xi^2 - (w - center)^2) inside the band, zero outside.
struct TightBindingSemicircle {
    double center{0.0};
    double hopping{0.0};
    double coupling_ratio{0.0};

    double lower_edge() const { return center - 2.0 * hopping; }
    double upper_edge() const { return center + 2.0 * hopping; }
};

struct DiscreteMode {
    cplx coupling{0.0, 0.0};
    double frequency{0.0};
};

struct DiscreteModes {
    std::vector<DiscreteMode> modes;
};

// Piecewise-linear J(w); zero outside the tabulated range.
struct TabulatedDensity {
    std::vector<double> frequencies;
    std::vector<double> values;
};

using SpectralDensity = std::variant<TightBindingSemicircle, DiscreteModes, TabulatedDensity>;

// One waveguide channel. The matrix density is J_ij(w) = c_i conj(c_j) J(w).
struct WaveguideSpec {
    std::string label;
    SpectralDensity spectral;
    Eigen::VectorXcd coupling;
    double temperature{0.0};
};

struct NetworkSpec {
    Eigen::MatrixXcd frequencies;
    std::vector<DrivingSignal> drives;
    std::vector<WaveguideSpec> waveguides;
    Eigen::VectorXcd initial_field;
    Eigen::MatrixXcd initial_occupation;
    TimeGrid grid;

    Index dim() const { return frequencies.rows(); }
    Index channels() const { return static_cast<Index>(waveguides.size()); }
};

struct Issue {
    std::string location;
    std::string message;
};

struct ValidationReport {
    std::vector<Issue> errors;
    std::vector<Issue> warnings;

    bool ok() const { return errors.empty(); }
    std::string describe() const;
};

ValidationReport validate(const NetworkSpec& spec);

// Throws photonet::Error carrying the report text when validation fails.
void require_valid(const NetworkSpec& spec);

// f(t) for a single signal; t0 anchors the monochromatic phase.
cplx evaluate_drive(const DrivingSignal& drive, double t, double t0 = 0.0);

// Sum of all drives acting on each resonator at time t.
Eigen::VectorXcd drive_vector(const NetworkSpec& spec, double t);

double evaluate_spectral_density(const SpectralDensity& density, double omega);

// Frequency interval outside which J vanishes.
std::pair<double, double> spectral_support(const SpectralDensity& density);

// Bose-Einstein occupation 1/(exp(w/(k_B T)) - 1); exactly zero at T = 0.
double bose_occupation(double omega, double temperature);

// Largest eigenvalue magnitude of a Hermitian matrix's spectrum, used for step-size checks.
double max_frequency(const NetworkSpec& spec);

} // namespace photonet
