#include <cmath>
#include <sstream>

#include <doctest.h>

#include "photonet/model.hpp"
#include "photonet/spec_json.hpp"
#include "support.hpp"

using namespace photonet;

namespace {

bool has_error(const ValidationReport& r, const std::string& location) {
    for (const auto& e : r.errors) {
        if (e.location.find(location) != std::string::npos) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("Boltzmann constant over hbar in rad/ns per kelvin") {
    // 1.380649e-23 / 1.054571817e-34 = 1.309203392...e11 rad/s/K
    CHECK(KB_OVER_HBAR == doctest::Approx(130.92033920720644).epsilon(1e-14));
}

TEST_CASE("Bose occupation at the two scenario temperatures") {
    // Reference values from an independent evaluation of 1/(exp(x)-1).
    CHECK(bose_occupation(10.0, 0.005) == doctest::Approx(2.3204e-7).epsilon(1e-3));
    CHECK(bose_occupation(10.0, 5.0) == doctest::Approx(64.961).epsilon(1e-4));
    CHECK(bose_occupation(10.0, 0.0) == 0.0);
}

TEST_CASE("two-CROW specification validates cleanly") {
    const auto spec = two_crow_spec(1.0, 10.0, 5.0);
    const auto report = validate(spec);
    CHECK(report.ok());
    CHECK(report.warnings.empty());
    CHECK(spec.dim() == 1);
    CHECK(spec.channels() == 2);
}

TEST_CASE("validation rejects malformed specifications") {
    SUBCASE("non-Hermitian frequencies") {
        auto s = test::coupled_pair(0.5, 0.0, 1.0, 10);
        s.frequencies(0, 1) = cplx(0.3, 0.0);
        CHECK(has_error(validate(s), "frequencies"));
    }
    SUBCASE("negative temperature") {
        auto s = two_crow_spec(1.0, 10.0, -1.0);
        CHECK(has_error(validate(s), "waveguides[0].temperature"));
    }
    SUBCASE("coupling length mismatch") {
        auto s = two_crow_spec(1.0, 10.0, 0.0);
        s.waveguides[1].coupling = Eigen::VectorXcd::Ones(2);
        CHECK(has_error(validate(s), "waveguides[1].coupling"));
    }
    SUBCASE("occupation below the coherent part") {
        auto s = two_crow_spec(1.0, 10.0, 0.0);
        s.initial_field(0) = 2.0;
        s.initial_occupation(0, 0) = 1.0;
        CHECK(has_error(validate(s), "initialOccupation"));
    }
    SUBCASE("drive target out of range") {
        auto s = two_crow_spec(1.0, 10.0, 0.0);
        s.drives[0].target = 3;
        CHECK(has_error(validate(s), "drives[0].target"));
    }
    SUBCASE("empty grid") {
        auto s = two_crow_spec(1.0, 10.0, 0.0);
        s.grid.t_end = 0.0;
        CHECK(has_error(validate(s), "grid"));
    }
    SUBCASE("require_valid throws with the report") {
        auto s = two_crow_spec(1.0, 10.0, 0.0);
        s.grid.n_steps = 0;
        CHECK_THROWS_AS(require_valid(s), Error);
    }
}

TEST_CASE("coarse step draws a warning, not an error") {
    auto s = two_crow_spec(1.0, 10.0, 0.0);
    s.grid.n_steps = 1000;  // h = 0.04, h * 10 = 0.4
    const auto r = validate(s);
    CHECK(r.ok());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].location == "grid");
}

TEST_CASE("monochromatic drive phase convention") {
    const DrivingSignal d{Monochromatic{2.0, 3.0, 0.5}, 0};
    const cplx f = evaluate_drive(d, 1.5, 0.5);
    CHECK(std::abs(f - 2.0 * std::exp(cplx(0.0, 0.5 - 3.0))) < 1e-15);
}

TEST_CASE("tabulated drive interpolates and refuses to extrapolate") {
    const DrivingSignal d{TabulatedDrive{{0.0, 1.0, 3.0}, {cplx(0, 0), cplx(2, 1), cplx(0, 5)}}, 0};
    CHECK(std::abs(evaluate_drive(d, 0.5) - cplx(1.0, 0.5)) < 1e-15);
    CHECK(std::abs(evaluate_drive(d, 2.0) - cplx(1.0, 3.0)) < 1e-15);
    CHECK(std::abs(evaluate_drive(d, 3.0) - cplx(0.0, 5.0)) < 1e-15);
    CHECK_THROWS_AS(evaluate_drive(d, 3.5), RangeError);
    CHECK_THROWS_AS(evaluate_drive(d, -0.1), RangeError);
}

TEST_CASE("semicircle density at the scenario cavity frequency") {
    const TightBindingSemicircle sc{9.5, 0.3, 0.5};
    // J(10) = eta^2 sqrt(4 xi^2 - 0.25) = 0.25 sqrt(0.11)
    CHECK(evaluate_spectral_density(sc, 10.0) == doctest::Approx(0.25 * std::sqrt(0.11)).epsilon(1e-14));
    CHECK(evaluate_spectral_density(sc, 10.2) == 0.0);
    CHECK(evaluate_spectral_density(sc, 8.8) == 0.0);
    const auto [lo, hi] = spectral_support(sc);
    CHECK(lo == doctest::Approx(8.9));
    CHECK(hi == doctest::Approx(10.1));
}

TEST_CASE("discrete modes have no pointwise density") {
    const DiscreteModes dm{{{cplx(0.1, 0.0), 9.0}}};
    CHECK_THROWS_AS(evaluate_spectral_density(dm, 9.0), VariantError);
}

TEST_CASE("spec JSON round trip") {
    const auto spec = test::coupled_pair(0.7, 2.0, 3.0, 300, 3);
    const auto j = spec_to_json(spec);
    const auto back = spec_from_json(j);
    CHECK(back.frequencies.isApprox(spec.frequencies));
    CHECK(back.waveguides.size() == 2);
    CHECK(back.waveguides[1].coupling.isApprox(spec.waveguides[1].coupling));
    CHECK(back.initial_occupation.isApprox(spec.initial_occupation));
    CHECK(back.grid.output_every == 3);
    CHECK(spec_to_json(back) == j);
}

TEST_CASE("spec JSON rejects unknown keys and accepts comments") {
    const std::string text = R"({
        // single cavity
        "frequencies": [[10.0]],
        "waveguides": [{"spectral": {"kind": "TightBindingSemicircle", "center": 9.5, "hopping": 0.3,
                                     "couplingRatio": 0.5}}],
        "grid": {"tEnd": 1.0, "nSteps": 100}
    })";
    const auto j = nlohmann::json::parse(text, nullptr, true, true);
    const auto spec = spec_from_json(j);
    CHECK(spec.waveguides[0].coupling.size() == 1);
    CHECK(spec.initial_field.size() == 1);

    auto bad = j;
    bad["grid"]["nstep"] = 3;
    CHECK_THROWS_AS(spec_from_json(bad), Error);
    auto bad_kind = j;
    bad_kind["waveguides"][0]["spectral"]["kind"] = "Lorentzian";
    CHECK_THROWS_AS(spec_from_json(bad_kind), Error);
}
