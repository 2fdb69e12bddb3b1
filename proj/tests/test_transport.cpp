#include <cmath>

#include <doctest.h>

#include "photonet/transport.hpp"
#include "support.hpp"

using namespace photonet;

TEST_CASE("empty cavity at zero temperature: field is y and n is |y|^2") {
    const auto spec = test::short_two_crow(1.0, 9.5, 0.0, 5.0, 1000, 100);
    const auto ks = build_kernel_set(spec);
    const auto props = solve_propagators(spec, ks);
    const auto tr = compute_transport(spec, props);
    for (std::size_t o = 0; o < tr.size(); ++o) {
        const Index k = props.output_steps[o];
        CHECK(std::abs(tr.field[o](0) - props.y[k](0, 0)) == 0.0);
        CHECK(tr.photon_numbers[o](0) == doctest::Approx(std::norm(props.y[k](0, 0))).epsilon(1e-12));
    }
}

TEST_CASE("closed cavity keeps its photons") {
    auto spec = test::coupled_pair(0.0, 0.0, 4.0, 400, 40);
    spec.drives.clear();
    const auto props = solve_propagators(spec, build_kernel_set(spec));
    const auto tr = compute_transport(spec, props);
    const double n0 = spec.initial_occupation.trace().real();
    for (std::size_t o = 0; o < tr.size(); ++o) {
        CHECK(tr.total_number[o] == doctest::Approx(n0).epsilon(1e-12));
        CHECK(tr.currents[o].cwiseAbs().maxCoeff() < 1e-14);
        CHECK(tr.source[o] == 0.0);
    }
}

TEST_CASE("free resonant drive: N = E0^2 t^2 and S = 2 E0^2 t") {
    const auto spec = test::short_two_crow(0.0, 10.0, 0.0, 2.0, 2000, 100);
    const auto tr = compute_transport(spec, solve_propagators(spec, build_kernel_set(spec)));
    for (std::size_t o = 1; o < tr.size(); ++o) {
        const double t = tr.times[o];
        CHECK(tr.total_number[o] == doctest::Approx(100.0 * t * t).epsilon(1e-5));
        CHECK(tr.source[o] == doctest::Approx(200.0 * t).epsilon(1e-5));
        CHECK(tr.residual[o] < 1e-4 * tr.source[o]);
    }
}

TEST_CASE("undriven zero temperature currents equal the loss of the initial photons") {
    auto spec = test::coupled_pair(0.8, 0.0, 6.0, 1200, 1);
    spec.drives.clear();
    const auto tr = compute_transport(spec, solve_propagators(spec, build_kernel_set(spec)));
    for (std::size_t o = 0; o < tr.size(); ++o) {
        CHECK(tr.source[o] == 0.0);
    }
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t o = 1; o + 1 < tr.size(); ++o) {
        worst = std::max(worst, tr.residual[o]);
        scale = std::max(scale, tr.currents[o].sum());
    }
    CHECK(worst < 1e-4 * scale);
}

TEST_CASE("generalized correlation at equal times is the occupation") {
    const auto spec = test::coupled_pair(0.8, 5.0, 3.0, 300, 100);
    const auto ks = build_kernel_set(spec);
    const auto props = solve_propagators(spec, ks);
    for (Index o = 1; o < props.outputs(); ++o) {
        const Index t = props.output_steps[static_cast<std::size_t>(o)];
        const auto g = generalized_correlation(ks, props, spec, t);
        const Eigen::MatrixXcd rho = occupation(props, spec, o);
        CHECK(test::max_abs(g[t] - rho) < 1e-10 * test::max_abs(rho));
        // rho(tau, t) = rho(t, tau)^dagger is not checked here; tau = 0 gives the initial-time correlation.
        const Eigen::MatrixXcd at_zero = spec.initial_occupation * props.u[t].adjoint() +
                                         spec.initial_field * props.y[t].adjoint();
        CHECK(test::max_abs(g[0] - at_zero) < 1e-14);
    }
}

TEST_CASE("Green function views") {
    const auto spec = test::coupled_pair(0.8, 5.0, 2.0, 200, 50);
    const auto ks = build_kernel_set(spec);
    const auto props = solve_propagators(spec, ks);
    CHECK(test::max_abs(retarded_green(props, 120) + I_UNIT * props.u[120]) == 0.0);
    CHECK(test::max_abs(advanced_green(props, 30, 200) - I_UNIT * props.u[170].adjoint()) == 0.0);
    CHECK(test::max_abs(advanced_green(props, 200, 200) - I_UNIT * Eigen::MatrixXcd::Identity(2, 2)) == 0.0);
    CHECK_THROWS_AS(advanced_green(props, 201, 200), RangeError);
    const auto lesser = lesser_green(ks, props, spec, 200);
    CHECK(test::max_abs(lesser[200] - I_UNIT * occupation(props, spec, 4)) < 1e-10);
}

TEST_CASE("current matrices are Hermitian and their real traces are the currents") {
    const auto spec = test::coupled_pair(0.9, 5.0, 4.0, 400, 40);
    const auto tr = compute_transport(spec, solve_propagators(spec, build_kernel_set(spec)));
    for (std::size_t o = 0; o < tr.size(); ++o) {
        for (std::size_t a = 0; a < 2; ++a) {
            const auto& m = tr.current_matrices[o][a];
            CHECK(test::max_abs(m - m.adjoint()) == 0.0);
            CHECK(tr.currents[o](static_cast<Index>(a)) == m.trace().real());
        }
    }
}

TEST_CASE("continuity holds for a driven thermal pair") {
    const auto spec = test::coupled_pair(0.9, 5.0, 8.0, 1600, 2);
    const auto tr = compute_transport(spec, solve_propagators(spec, build_kernel_set(spec)));
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t o = 0; o < tr.size(); ++o) {
        scale = std::max({scale, std::abs(tr.source[o]), tr.currents[o].cwiseAbs().maxCoeff()});
        if (!tr.edge[o]) {
            worst = std::max(worst, tr.residual[o]);
        }
    }
    CHECK(tr.edge.front());
    CHECK(tr.edge.back());
    CHECK(worst < 1e-3 * scale);
}

TEST_CASE("time derivative is exact on a quadratic") {
    std::vector<double> v;
    for (int i = 0; i < 7; ++i) {
        const double t = 0.5 * i;
        v.push_back(3.0 * t * t - 2.0 * t + 1.0);
    }
    std::vector<bool> edge;
    const auto d = time_derivative(v, 0.5, edge);
    for (int i = 0; i < 7; ++i) {
        CHECK(d[static_cast<std::size_t>(i)] == doctest::Approx(6.0 * 0.5 * i - 2.0).epsilon(1e-13));
    }
    CHECK(edge == std::vector<bool>{true, false, false, false, false, false, true});
}

TEST_CASE("drive outside the upper band leaves no steady current into it") {
    // Band 2 spans 9.9..11.1; a drive at 9.2 only radiates into band 1 once the transient dies.
    const auto spec = test::short_two_crow(0.5, 9.2, 0.0, 80.0, 16000, 40);
    const auto tr = compute_transport(spec, solve_propagators(spec, build_kernel_set(spec)));
    double i1 = 0.0;
    double i2 = 0.0;
    const std::size_t start = 3 * tr.size() / 4;
    for (std::size_t o = start; o < tr.size(); ++o) {
        i1 += tr.currents[o](0);
        i2 += tr.currents[o](1);
    }
    CHECK(i1 > 0.0);
    CHECK(std::abs(i2) < 1e-2 * i1);
}
