#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "coldjet/model.hpp"

using namespace coldjet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// fluid tuned so reynolds() lands on 5851, the reported value at 25 L/min
FluidSpec fluid_re5851() {
    FluidSpec f;
    f.kinematic_viscosity = 1.5111846321796401e-5;
    return f;
}

// benign random coefficient sets for property checks
ModelCoefficients random_coefficients(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelCoefficients c;
    c.alpha = std::exp(std::log(1e-4) + u(rng) * (std::log(10.0) - std::log(1e-4)));
    c.beta = 0.5 + u(rng);
    c.gamma = 1.0 + 19.0 * u(rng);
    c.n = 2.0 + 10.0 * u(rng);
    c.a = 0.5 + 7.5 * u(rng);
    c.b = 0.01 + 0.49 * u(rng);
    c.c = -1.0 + 11.0 * u(rng);
    c.f = std::exp(std::log(1e-10) + u(rng) * (std::log(1e3) - std::log(1e-10)));
    c.g = 0.5 + 4.5 * u(rng);
    return c;
}

}  // namespace

TEST_CASE("reynolds from flow rate, diameter and viscosity", "[model]") {
    SECTION("default fluid reproduces the reported 5851 at 25 L/min") {
        CHECK_THAT(reynolds(default_fluid()), WithinAbs(5851.0, 10.0));
        CHECK_THAT(reynolds(default_fluid()), WithinRel(5850.9404995255917, 1e-12));
    }
    SECTION("zero flow gives zero") {
        FluidSpec f;
        f.volume_flow_rate = 0.0;
        CHECK(reynolds(f) == 0.0);
    }
    SECTION("linear in flow rate, exactly") {
        FluidSpec f = default_fluid();
        const double re1 = reynolds(f);
        f.volume_flow_rate *= 2.0;
        CHECK(reynolds(f) == 2.0 * re1);
    }
    SECTION("invalid spec is rejected") {
        FluidSpec f;
        f.nozzle_diameter = 0.0;
        CHECK_THROWS_AS(reynolds(f), std::invalid_argument);
        f = FluidSpec{};
        f.kinematic_viscosity = -1.0;
        CHECK_THROWS_AS(reynolds(f), std::invalid_argument);
    }
    SECTION("boundary-unit factory matches defaults") {
        const FluidSpec f = FluidSpec::from_lpm_mm(25.0, 6.0);
        CHECK(f.volume_flow_rate == default_fluid().volume_flow_rate);
        CHECK(f.nozzle_diameter == default_fluid().nozzle_diameter);
    }
}

TEST_CASE("nu_center selects the near and far branch at n*d0", "[model]") {
    const FluidSpec fluid = fluid_re5851();
    const ModelCoefficients c = published_coefficients();

    SECTION("near branch below n*d0 = 24 mm") {
        CHECK_THAT(nu_center(c, fluid, 0.010), WithinRel(61.08209094109106, 1e-9));
    }
    SECTION("far branch above n*d0") {
        CHECK_THAT(nu_center(c, fluid, 0.048), WithinRel(1127.9586906498394, 1e-9));
    }
    SECTION("published set is discontinuous at the branch distance") {
        const double below = nu_center(c, fluid, std::nextafter(0.024, 0.0));
        const double above = nu_center(c, fluid, 0.024);
        CHECK_THAT(below, WithinRel(61.08209094109106, 1e-9));
        CHECK_THAT(above, WithinRel(2255.9173812996787, 1e-9));
    }
    SECTION("zero Reynolds gives zero in either branch") {
        FluidSpec still = fluid;
        still.volume_flow_rate = 0.0;
        CHECK(nu_center(c, still, 0.010) == 0.0);
        CHECK(nu_center(c, still, 0.048) == 0.0);
    }
    SECTION("H = 0 with n = 0 is a domain error") {
        ModelCoefficients degenerate = c;
        degenerate.n = 0.0;
        CHECK_THROWS_AS(nu_center(degenerate, fluid, 0.0), std::domain_error);
        CHECK_NOTHROW(nu_center(c, fluid, 0.0));  // n > 0 takes the near branch
    }
    SECTION("quadrupling Re doubles the near-branch value exactly") {
        FluidSpec f4 = fluid;
        f4.volume_flow_rate *= 4.0;
        CHECK(nu_center(c, f4, 0.010) == 2.0 * nu_center(c, fluid, 0.010));
    }
}

TEST_CASE("nu_radial blends linearly to the outer correlation", "[model]") {
    const FluidSpec fluid = fluid_re5851();

    SECTION("r = 0 returns the stagnation value exactly") {
        std::mt19937_64 rng(2024);
        for (int i = 0; i < 100; ++i) {
            const auto c = random_coefficients(rng);
            const double h = 0.005 + 0.055 * static_cast<double>(i) / 99.0;
            CHECK(nu_radial(c, fluid, 0.0, h) == nu_center(c, fluid, h));
        }
    }
    SECTION("branches meet at 2.5*d0") {
        std::mt19937_64 rng(77);
        const double blend = 2.5 * fluid.nozzle_diameter;
        for (int i = 0; i < 100; ++i) {
            const auto c = random_coefficients(rng);
            std::uniform_real_distribution<double> uh(0.005, 0.060);
            const double h = uh(rng);
            const double inner = nu_radial(c, fluid, std::nextafter(blend, 0.0), h);
            const double outer = nu_radial(c, fluid, blend, h);
            CHECK_THAT(inner, WithinAbs(outer, 1e-9 * std::max(1.0, std::abs(outer))));
        }
    }
    SECTION("published set at r = 65.7 mm, H = 30 mm") {
        // wildly large; the diagnose tool reports the inconsistency with the
        // near-unity threshold values this set is supposed to reproduce
        CHECK_THAT(nu_radial(published_coefficients(), fluid, 0.0657, 0.030),
                   WithinRel(2125599.1356372099, 1e-9));
    }
    SECTION("conventional set stays positive on the outer branch") {
        const auto c = conventional_coefficients();
        for (double r = 0.015; r <= 0.3; r += 0.005) {
            CHECK(nu_radial(c, fluid, r, 0.030) > 0.0);
        }
    }
    SECTION("singular denominator is a domain error naming the radius") {
        ModelCoefficients c = conventional_coefficients();
        c.b = 5.0;
        c.c = 2.0;
        // at H = d0 and r = 0.03: 1 + 5*(1-2)*(0.006/0.03) = 0
        CHECK_THROWS_AS(nu_radial(c, fluid, 0.03, 0.006), std::domain_error);
        CHECK_THROWS_WITH(nu_radial(c, fluid, 0.03, 0.006),
                          Catch::Matchers::ContainsSubstring("0.03"));
    }
    SECTION("negative r is rejected") {
        CHECK_THROWS_AS(nu_radial(conventional_coefficients(), fluid, -0.01, 0.03),
                        std::invalid_argument);
    }
}

TEST_CASE("airflow temperature decays toward ambient", "[model]") {
    const ThermalEnvironment env = default_environment();

    SECTION("endpoints") {
        CHECK(airflow_temperature(env, 1.72, 0.0) == 0.0);
        CHECK_THAT(airflow_temperature(env, 1.72, 0.05), WithinAbs(2.0601442194962254, 1e-9));
        CHECK_THAT(airflow_temperature(env, 1.72, 1e6), WithinAbs(25.0, 1e-12));
    }
    SECTION("strictly increasing in H and bounded by [T_a0, T_e)") {
        double previous = airflow_temperature(env, 1.72, 0.0);
        for (double h = 0.001; h <= 0.2; h += 0.001) {
            const double t = airflow_temperature(env, 1.72, h);
            CHECK(t > previous);
            CHECK(t >= env.airflow_initial);
            CHECK(t < env.ambient);
            previous = t;
        }
    }
    SECTION("non-positive g is rejected") {
        CHECK_THROWS_AS(airflow_temperature(env, 0.0, 0.01), std::invalid_argument);
    }
}

TEST_CASE("predicted cooling is linear in alpha and the driving difference", "[model]") {
    const FluidSpec fluid = fluid_re5851();
    const ThermalEnvironment env = default_environment();
    ModelCoefficients c = conventional_coefficients();
    c.alpha = 0.02;

    SECTION("zero driving difference gives zero") {
        ThermalEnvironment matched = env;
        matched.surface_initial = airflow_temperature(env, c.g, 0.03);
        CHECK(predict_delta_t(c, fluid, matched, 0.02, 0.03) == 0.0);
    }
    SECTION("doubling alpha doubles the prediction exactly") {
        ModelCoefficients doubled = c;
        doubled.alpha = 2.0 * c.alpha;
        for (double r : {0.0, 0.01, 0.02, 0.05}) {
            CHECK(predict_delta_t(doubled, fluid, env, r, 0.03) ==
                  2.0 * predict_delta_t(c, fluid, env, r, 0.03));
        }
    }
    SECTION("pure function: identical inputs, identical outputs") {
        CHECK(predict_delta_t(c, fluid, env, 0.0123, 0.034) ==
              predict_delta_t(c, fluid, env, 0.0123, 0.034));
    }
}

TEST_CASE("coefficient presets", "[model]") {
    SECTION("conventional literature constants") {
        const auto c = conventional_coefficients();
        CHECK(c.beta == 0.94);
        CHECK(c.gamma == 11.6);
        CHECK(c.a == 1.1);
        CHECK(c.b == 0.1);
        CHECK(c.c == 6.0);
        CHECK(c.f == 200.0);
        CHECK(c.n == 10.0);
        CHECK(c.alpha == 1.0);
        CHECK(c.g == 1.72);
        CHECK_NOTHROW(c.validate());
    }
    SECTION("conventional near-branch applies at H = 2*d0") {
        const FluidSpec fluid = fluid_re5851();
        const auto c = conventional_coefficients();
        const double expected = 0.94 * std::pow(0.7, 0.4) * std::sqrt(reynolds(fluid));
        CHECK(nu_center(c, fluid, 2.0 * fluid.nozzle_diameter) == expected);
    }
    SECTION("published airflow fit") {
        const auto c = published_coefficients();
        CHECK(c.alpha == 7.41);
        CHECK(c.beta == 0.921);
        CHECK(c.gamma == 141.0);
        CHECK(c.a == 7.87);
        CHECK(c.b == 0.145);
        CHECK(c.c == 9.33e-4);
        CHECK(c.f == 2.63e-10);
        CHECK(c.g == 1.72);
        CHECK(c.n == 4.00);
        CHECK_NOTHROW(c.validate());
    }
}

TEST_CASE("validity window metadata", "[model]") {
    const auto w = validity_windows(0.006);
    CHECK_THAT(w.r_min, WithinRel(0.015, 1e-12));
    CHECK_THAT(w.r_max, WithinRel(0.045, 1e-12));
    CHECK_THAT(w.h_min, WithinRel(0.012, 1e-12));
    CHECK_THAT(w.h_max, WithinRel(0.072, 1e-12));
    CHECK(w.re_min == 2.0e3);
    CHECK(w.re_max == 4.0e5);
    CHECK_THROWS_AS(validity_windows(0.0), std::invalid_argument);
}

TEST_CASE("monotone tail detection", "[model]") {
    const FluidSpec fluid = fluid_re5851();

    SECTION("conventional set decays from the blend radius onward") {
        const auto report = check_monotone_tail(conventional_coefficients(), fluid, 0.030, 0.3);
        REQUIRE(report.found);
        CHECK(report.r_lo <= 0.0151);
        CHECK(report.r_hi == 0.3);
        CHECK(report.grid_points >= 512);
    }
    SECTION("published set (a = 7.87) only decays past the interior peak") {
        const auto report = check_monotone_tail(published_coefficients(), fluid, 0.030, 0.3);
        REQUIRE(report.found);
        // peak of the outer correlation sits near 2*a*d0 = 94.4 mm
        CHECK(report.r_lo >= 0.0944);
        CHECK(report.r_lo <= 0.105);
    }
    SECTION("zero-flow field has no decreasing tail") {
        FluidSpec still = fluid;
        still.volume_flow_rate = 0.0;
        const auto report = check_monotone_tail(conventional_coefficients(), still, 0.030, 0.3);
        CHECK_FALSE(report.found);
    }
    SECTION("r_max must exceed the blend radius") {
        CHECK_THROWS_AS(check_monotone_tail(conventional_coefficients(), fluid, 0.030, 0.01),
                        std::invalid_argument);
    }
}
