#include <cmath>

#include <doctest.h>

#include "photonet/dynamics.hpp"
#include "support.hpp"

using namespace photonet;

namespace {

// exp(A) by scaling and squaring of a truncated Taylor series.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
    int s = 0;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.05) {
        norm *= 0.5;
        ++s;
    }
    const Eigen::MatrixXcd b = a / std::pow(2.0, s);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k < 20; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < s; ++i) {
        sum = sum * sum;
    }
    return sum;
}

// One resonator at w0 coupled to a single discrete mode (c, W): the joint system is the
// 2x2 Hamiltonian [[w0, c], [c*, W]], and u(t) is the (0,0) entry of its propagator.
struct ModePair {
    double w0{10.0};
    cplx c{0.15, 0.05};
    double mode{9.8};

    Eigen::MatrixXcd hamiltonian() const {
        Eigen::MatrixXcd h(2, 2);
        h << w0, c, std::conj(c), mode;
        return h;
    }

    NetworkSpec spec(double temperature, double t_end, Index steps, double drive_amp = 0.0,
                     double drive_freq = 0.0) const {
        NetworkSpec s;
        s.frequencies = Eigen::MatrixXcd::Constant(1, 1, w0);
        if (drive_amp > 0.0) {
            s.drives.push_back(DrivingSignal{Monochromatic{drive_amp, drive_freq, 0.0}, 0});
        }
        s.waveguides.push_back(
            WaveguideSpec{"mode", DiscreteModes{{{c, mode}}}, Eigen::VectorXcd::Ones(1), temperature});
        s.initial_field = Eigen::VectorXcd::Zero(1);
        s.initial_occupation = Eigen::MatrixXcd::Zero(1, 1);
        s.grid = TimeGrid{0.0, t_end, steps, 1};
        return s;
    }
};

// Driven ModePair amplitude by classical RK4 on the joint 2x2 system.
cplx driven_pair_rk4(const ModePair& p, double amp, double wd, double t_end, int steps) {
    const Eigen::MatrixXcd h = p.hamiltonian();
    auto rhs = [&](double t, const Eigen::Vector2cd& x) {
        Eigen::Vector2cd f(amp * std::exp(cplx(0.0, -wd * t)), 0.0);
        return Eigen::Vector2cd(-I_UNIT * (h * x) - I_UNIT * f);
    };
    Eigen::Vector2cd x = Eigen::Vector2cd::Zero();
    const double dt = t_end / steps;
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        const Eigen::Vector2cd k1 = rhs(t, x);
        const Eigen::Vector2cd k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
        const Eigen::Vector2cd k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
        const Eigen::Vector2cd k4 = rhs(t + dt, x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x(0);
}

double rel_diff(const ComplexSeries& a, const ComplexSeries& b) {
    return (a.stacked() - b.stacked()).cwiseAbs().maxCoeff() / b.stacked().cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("free step matches the matrix exponential") {
    const auto spec = test::coupled_pair(0.0, 0.0, 1.0, 10);
    const Eigen::MatrixXcd e = free_step(spec.frequencies, 0.37);
    CHECK(test::max_abs(e - expm(-I_UNIT * 0.37 * spec.frequencies)) < 1e-13);
    const Eigen::MatrixXcd back = free_step(spec.frequencies, 0.37, +1.0);
    CHECK(test::max_abs(e * back - Eigen::MatrixXcd::Identity(2, 2)) < 1e-14);
}

TEST_CASE("uncoupled resonators evolve freely") {
    const auto spec = test::coupled_pair(0.0, 0.0, 5.0, 500);
    const auto ks = build_kernel_set(spec);
    const auto u = solve_u(ks, spec.frequencies).values;
    for (Index k : {0, 137, 500}) {
        const Eigen::MatrixXcd exact = expm(-I_UNIT * spec.grid.time(k) * spec.frequencies);
        CHECK(test::max_abs(u[k] - exact) < 1e-12);
    }
}

TEST_CASE("undriven resonator has y identically zero") {
    auto spec = test::short_two_crow(1.0, 10.0, 0.0, 2.0, 400);
    spec.drives.clear();
    const auto ks = build_kernel_set(spec);
    CHECK(solve_y(ks, spec).values.stacked().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("free driven resonator, off resonance and on resonance") {
    const double e0 = 10.0;
    const double w0 = 10.0;
    SUBCASE("off resonance") {
        const double wd = 9.5;
        auto spec = test::short_two_crow(0.0, wd, 0.0, 4.0, 4000);
        const auto ks = build_kernel_set(spec);
        const auto y = solve_y(ks, spec).values;
        for (Index k : {1000, 4000}) {
            const double t = spec.grid.time(k);
            const cplx exact = -e0 * (std::exp(cplx(0, -wd * t)) - std::exp(cplx(0, -w0 * t))) / (w0 - wd);
            CHECK(std::abs(y[k](0, 0) - exact) < 1e-4 * std::abs(exact) + 1e-6);
        }
    }
    SUBCASE("on resonance") {
        auto spec = test::short_two_crow(0.0, w0, 0.0, 4.0, 4000);
        const auto ks = build_kernel_set(spec);
        const auto y = solve_y(ks, spec).values;
        for (Index k : {1000, 4000}) {
            const double t = spec.grid.time(k);
            const cplx exact = -I_UNIT * e0 * t * std::exp(cplx(0, -w0 * t));
            CHECK(std::abs(y[k](0, 0) - exact) < 1e-4 * std::abs(exact));
        }
    }
}

TEST_CASE("single discrete mode: u equals the joint propagator element") {
    const ModePair p;
    const auto spec = p.spec(0.0, 20.0, 4000);
    const auto ks = build_kernel_set(spec);
    const auto u = solve_u(ks, spec.frequencies).values;
    double worst = 0.0;
    for (Index k = 0; k <= 4000; k += 400) {
        const cplx exact = expm(-I_UNIT * spec.grid.time(k) * p.hamiltonian())(0, 0);
        worst = std::max(worst, std::abs(u[k](0, 0) - exact));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("single discrete mode: driven amplitude against RK4 on the joint system") {
    const ModePair p;
    const auto spec = p.spec(0.0, 10.0, 4000, 2.0, 9.9);
    const auto ks = build_kernel_set(spec);
    const auto y = solve_y(ks, spec).values;
    const cplx exact = driven_pair_rk4(p, 2.0, 9.9, 10.0, 40000);
    CHECK(std::abs(y[4000](0, 0) - exact) < 1e-4 * std::abs(exact));
}

TEST_CASE("second-order convergence on the discrete-mode oracle") {
    const ModePair p;
    const double t_end = 10.0;
    const cplx exact = expm(-I_UNIT * t_end * p.hamiltonian())(0, 0);
    double errors[3];
    const Index steps[3] = {500, 1000, 2000};
    for (int i = 0; i < 3; ++i) {
        const auto spec = p.spec(0.0, t_end, steps[i]);
        const auto u = solve_u(build_kernel_set(spec), spec.frequencies).values;
        errors[i] = std::abs(u[steps[i]](0, 0) - exact);
    }
    CHECK(errors[0] / errors[1] > 3.5);
    CHECK(errors[1] / errors[2] > 3.5);
    CHECK(errors[0] / errors[1] < 4.5);
}

TEST_CASE("y from the Volterra solve agrees with the convolution of u and f") {
    const auto spec = test::coupled_pair(0.8, 0.0, 6.0, 1200);
    const auto ks = build_kernel_set(spec);
    const auto u = solve_u(ks, spec.frequencies).values;
    const auto y = solve_y(ks, spec).values;
    CHECK(y_by_convolution(u, spec, 0).norm() == 0.0);
    const Eigen::VectorXcd conv = y_by_convolution(u, spec, 1200);
    CHECK((conv - y[1200]).norm() < 1e-3 * y[1200].norm());
}

TEST_CASE("u is a contraction for a dissipative network") {
    const auto spec = test::coupled_pair(1.0, 0.0, 20.0, 2000);
    const auto u = solve_u(build_kernel_set(spec), spec.frequencies).values;
    double worst = 0.0;
    for (Index k = 0; k <= 2000; ++k) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u[k]);
        worst = std::max(worst, svd.singularValues()(0));
    }
    CHECK(worst <= 1.0 + 1e-6);
    CHECK(test::max_abs(u[2000]) < 0.9);
}

TEST_CASE("advanced propagator: backward integration matches time translation") {
    const auto spec = test::coupled_pair(0.9, 0.0, 5.0, 500);
    const auto ks = build_kernel_set(spec);
    const auto u = solve_u(ks, spec.frequencies).values;
    for (Index t : {0, 1, 250, 500}) {
        const auto translated = solve_ubar_column(u, t);
        const auto backward = solve_ubar_backward(ks, spec.frequencies, t);
        CHECK(translated.size() == t + 1);
        CHECK((translated.stacked() - backward.stacked()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(test::max_abs(translated[t] - Eigen::MatrixXcd::Identity(2, 2)) == 0.0);
    }
}

TEST_CASE("v vanishes at zero temperature") {
    const auto spec = test::coupled_pair(1.0, 0.0, 3.0, 300);
    const auto ks = build_kernel_set(spec);
    const auto u = solve_u(ks, spec.frequencies).values;
    CHECK(solve_v_column(ks, spec.frequencies, u, 300).stacked().cwiseAbs().maxCoeff() == 0.0);
    const auto props = solve_propagators(spec, ks);
    CHECK(props.v_diag.stacked().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single discrete mode: thermal occupation transferred from the mode") {
    // <a^dagger a>(t) = nbar |U_01(t)|^2 for a cavity starting empty.
    const ModePair p;
    const double temperature = 5.0;
    const double nbar = bose_occupation(p.mode, temperature);
    const auto spec = p.spec(temperature, 12.0, 2400);
    const auto props = solve_propagators(spec, build_kernel_set(spec));
    double worst = 0.0;
    for (Index o = 0; o < props.outputs(); o += 200) {
        const cplx u01 = expm(-I_UNIT * props.output_time(o) * p.hamiltonian())(0, 1);
        worst = std::max(worst, std::abs(props.v_diag[o](0, 0) - nbar * std::norm(u01)));
    }
    CHECK(worst < 1e-3 * nbar);
}

TEST_CASE("v(t,t) is Hermitian and positive semidefinite") {
    const auto spec = test::coupled_pair(0.8, 5.0, 8.0, 800, 40);
    const auto props = solve_propagators(spec, build_kernel_set(spec));
    for (Index o = 1; o < props.outputs(); ++o) {
        const Eigen::MatrixXcd v = props.v_diag[o];
        CHECK(test::max_abs(v - v.adjoint()) < 1e-10 * test::max_abs(v));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (v + v.adjoint()));
        CHECK(eig.eigenvalues().minCoeff() > -1e-8 * test::max_abs(v));
    }
}

TEST_CASE("v column: Volterra solve against the double integral") {
    const auto coarse = test::coupled_pair(0.8, 5.0, 4.0, 400);
    const auto fine = test::coupled_pair(0.8, 5.0, 4.0, 800);
    double dev[2];
    int i = 0;
    for (const auto* spec : {&coarse, &fine}) {
        const auto ks = build_kernel_set(*spec);
        const auto u = solve_u(ks, spec->frequencies).values;
        const Index t = spec->grid.n_steps;
        dev[i++] = rel_diff(solve_v_column(ks, spec->frequencies, u, t), v_column_double_integral(ks, u, t));
    }
    CHECK(dev[0] < 1e-4);
    CHECK(dev[0] / dev[1] > 3.5);
}

TEST_CASE("propagator set: rolling thermal sums match direct evaluation") {
    const auto spec = test::coupled_pair(0.8, 5.0, 3.0, 300, 50);
    const auto ks = build_kernel_set(spec);
    const auto props = solve_propagators(spec, ks);
    const double h = spec.grid.step();
    REQUIRE(props.outputs() == 7);
    for (Index o = 1; o < props.outputs(); ++o) {
        const Index t = props.output_steps[static_cast<std::size_t>(o)];
        const auto v = v_column_double_integral(ks, props.u, t);
        const double scale = test::max_abs(v[t]);
        CHECK(test::max_abs(props.v_diag[o] - v[t]) < 1e-12 * scale);
        for (Index a = 0; a < ks.channels(); ++a) {
            Eigen::MatrixXcd mem = Eigen::MatrixXcd::Zero(2, 2);
            Eigen::MatrixXcd noise = Eigen::MatrixXcd::Zero(2, 2);
            for (Index k = 0; k <= t; ++k) {
                const double w = (k == 0 || k == t) ? 0.5 * h : h;
                mem += w * ks.dissipation[a][t - k] * v[k];
                noise += w * ks.noise[a][t - k] * props.u[t - k].adjoint();
            }
            // The library nests the two trapezoid sums the other way round; they agree to O(h^2).
            CHECK(test::max_abs(props.channel_memory_v[a][o] - mem) < 1e-4 * test::max_abs(mem));
            CHECK(test::max_abs(props.channel_noise_ubar[a][o] - noise) < 1e-12 * test::max_abs(noise));
        }
    }
}

TEST_CASE("channel memory integrals sum to the total") {
    const auto spec = test::coupled_pair(0.8, 0.0, 3.0, 300);
    const auto props = solve_propagators(spec, build_kernel_set(spec));
    for (Index k : {1, 150, 300}) {
        const Eigen::MatrixXcd sum = props.channel_memory_u[0][k] + props.channel_memory_u[1][k];
        CHECK(test::max_abs(sum - props.memory_u[k]) < 1e-13);
    }
}

TEST_CASE("Dyson residual is second order small") {
    const auto spec = test::coupled_pair(1.0, 0.0, 10.0, 2000);
    const auto props = solve_propagators(spec, build_kernel_set(spec));
    const double h = spec.grid.step();
    CHECK(dyson_residual(props, spec.frequencies) < 10.0 * h * h);
}

TEST_CASE("non-finite kernel raises a solver error with the step") {
    ComplexSeries kernel(11, 1, 1);
    kernel[0](0, 0) = 0.1;
    kernel[4](0, 0) = std::nan("");
    const Eigen::MatrixXcd e = free_step(Eigen::MatrixXcd::Constant(1, 1, 1.0), 0.1);
    try {
        integrate_volterra(e, kernel, 0.1, Eigen::MatrixXcd::Identity(1, 1), 10);
        FAIL("expected SolverError");
    } catch (const SolverError& err) {
        CHECK(err.step() == 4);
    }
}

TEST_CASE("kernel shorter than the window is rejected") {
    ComplexSeries kernel(5, 1, 1);
    const Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(1, 1);
    CHECK_THROWS_AS(integrate_volterra(e, kernel, 0.1, Eigen::MatrixXcd::Identity(1, 1), 10), Error);
}
