#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmt/analytic.hpp"
#include "cmt/units.hpp"

using namespace cmt;
using Catch::Approx;

namespace {

TwoPortWorkingPoint equal_coop_point(double coop, double delta, double gamma1, double gamma2) {
    TwoPortWorkingPoint wp;
    wp.c11 = wp.c12 = wp.c21 = wp.c22 = coop;
    wp.delta = delta;
    wp.gamma1 = gamma1;
    wp.gamma2 = gamma2;
    return wp;
}

}  // namespace

TEST_CASE("lambda is one for reciprocal settings") {
    auto wp = equal_coop_point(10.0, 0.0, hz_to_rad(4.0), hz_to_rad(8.0));

    SECTION("zero detuning at resonance is bidirectional") {
        wp.phi = 1.3;
        CHECK(std::abs(lambda_ratio(wp, 0.0)) == Approx(1.0).epsilon(1e-12));
        wp.phi = 0.0;
        CHECK(std::abs(lambda_ratio(wp, 0.0) - 1.0) < 1e-12);
    }
    SECTION("zero phase at any probe frequency") {
        wp.delta = hz_to_rad(6.0);
        wp.phi = 0.0;
        for (double omega_hz : {-30.0, -5.0, 0.0, 2.0, 18.0})
            CHECK(std::abs(lambda_ratio(wp, hz_to_rad(omega_hz)) - 1.0) < 1e-12);
    }
}

TEST_CASE("optimal phase cancels lambda") {
    const double gamma = hz_to_rad(6.0);

    SECTION("delta = 1.5 Gamma at resonance") {
        const double delta = 1.5 * gamma;
        auto wp = equal_coop_point(20.0, delta, gamma, gamma);
        wp.phi = optimal_phase(delta, gamma, gamma, 0.0);
        CHECK(std::abs(lambda_ratio(wp, 0.0)) < 1e-12);
    }

    SECTION("unequal linewidths: the phase is still the |lambda| minimizer") {
        // With gamma1 != gamma2 the modulus condition |Sigma_1| = |Sigma_2|
        // fails at equal cooperativities, so |lambda| cannot reach zero;
        // the returned phase must still be the minimizer over phi.
        const double gamma2 = hz_to_rad(11.0);
        const double delta = hz_to_rad(4.5);
        const double omega = hz_to_rad(2.0);
        auto wp = equal_coop_point(7.0, delta, gamma, gamma2);
        wp.phi = optimal_phase(delta, gamma, gamma2, omega);
        const double at_optimum = std::abs(lambda_ratio(wp, omega));
        for (int k = 0; k < 720; ++k) {
            wp.phi = -pi + two_pi * k / 720.0;
            CHECK(std::abs(lambda_ratio(wp, omega)) >= at_optimum - 1e-9);
        }
    }

    SECTION("delta = gamma/2 pins the quadrature") {
        // tan(phi) diverges there: principal value +pi/2, lambda zero at -pi/2.
        const double delta = gamma / 2.0;
        CHECK(isolation_phase_principal(delta, gamma, gamma, 0.0) == Approx(pi / 2.0));
        const double phi = optimal_phase(delta, gamma, gamma, 0.0);
        CHECK(phi == Approx(-pi / 2.0).epsilon(1e-12));
        auto wp = equal_coop_point(5.0, delta, gamma, gamma);
        wp.phi = phi;
        CHECK(std::abs(lambda_ratio(wp, 0.0)) < 1e-12);
    }

    SECTION("principal value tends to zero with delta") {
        const double gamma2 = hz_to_rad(8.0);
        double previous = pi;
        for (double scale : {1e-2, 1e-3, 1e-4}) {
            const double phi = isolation_phase_principal(scale * gamma, gamma, gamma2, 0.0);
            CHECK(phi > 0.0);
            CHECK(phi < previous);
            previous = phi;
        }
        CHECK(previous < 1e-3);
        CHECK_THROWS_AS(optimal_phase(0.0, gamma, gamma2, 0.0), std::domain_error);
    }
}

TEST_CASE("lambda mirror property at equal cooperativities") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma1 = hz_to_rad(2.0 + 10.0 * unit(rng));
        const double gamma2 = hz_to_rad(2.0 + 10.0 * unit(rng));
        auto wp = equal_coop_point(0.5 + 30.0 * unit(rng),
                                   hz_to_rad(20.0 * (unit(rng) - 0.5)), gamma1, gamma2);
        const double omega = hz_to_rad(30.0 * (unit(rng) - 0.5));
        wp.phi = two_pi * unit(rng) - pi;
        const complexd forward = lambda_ratio(wp, omega);
        wp.phi = -wp.phi;
        const complexd mirrored = lambda_ratio(wp, omega);
        CHECK(std::abs(forward * mirrored - 1.0) < 1e-9);
    }
}

TEST_CASE("forward transmission closed form") {
    const double gamma = hz_to_rad(6.0);

    SECTION("vanishes at zero detuning") {
        CHECK(std::abs(forward_transmission(10.0, 0.0, gamma, 0.74, 0.86).s21) == 0.0);
    }

    SECTION("peak value at the matched cooperativity") {
        // eta1 eta2 = 0.64, C = 4.95: |S21|^2 = 0.64 (1 - 1/9.9) = 0.575354.
        const double coop = 4.95;
        const double delta = std::sqrt((2.0 * coop - 1.0)) * gamma / 2.0;
        const auto out = forward_transmission(coop, delta, gamma, 0.8, 0.8);
        CHECK(out.power == Approx(0.64 * (1.0 - 1.0 / 9.9)).epsilon(1e-12));
        CHECK(out.power == Approx(0.575354).epsilon(1e-5));
        CHECK(forward_transmission_peak(coop, 0.8, 0.8) == Approx(out.power).epsilon(1e-12));
    }

    SECTION("peak condition found by grid search") {
        const double delta = 2.0 * gamma;
        const double expected_coop = 0.5 * (1.0 + 4.0 * delta * delta / (gamma * gamma));
        double best_coop = 0.0, best_power = 0.0;
        for (double coop = 0.5; coop < 40.0; coop += 1e-3) {
            const double power = forward_transmission(coop, delta, gamma, 0.9, 0.9).power;
            if (power > best_power) {
                best_power = power;
                best_coop = coop;
            }
        }
        CHECK(best_coop == Approx(expected_coop).epsilon(1e-3));
    }
}

TEST_CASE("conversion efficiency formulas") {
    CHECK(conversion_efficiency(95.0, 95.0, 0.8, 0.8) == Approx(0.633316).epsilon(1e-5));
    CHECK(std::abs(conversion_efficiency(95.0, 95.0, 0.8, 0.8) - 0.64) < 0.01);
    CHECK(conversion_efficiency(95.0, 0.0, 0.8, 0.8) == 0.0);
    CHECK(conversion_efficiency(1e8, 1e8, 0.8, 0.8) == Approx(0.64).epsilon(1e-7));

    SECTION("maximum over C2 sits at C2 = 1 + C1") {
        const double c1 = 95.0;
        double best_c2 = 0.0, best = 0.0;
        for (double c2 = 50.0; c2 < 150.0; c2 += 1e-3) {
            const double t2 = conversion_efficiency(c1, c2, 0.74, 0.86);
            if (t2 > best) {
                best = t2;
                best_c2 = c2;
            }
        }
        CHECK(best_c2 == Approx(1.0 + c1).epsilon(1e-4));
    }
}

TEST_CASE("reflection coefficients") {
    SECTION("empty-cavity limit") {
        const auto refl = reflection_coefficients(0.0, 0.0, 0.74, 0.86);
        CHECK(refl.port1 == Approx((1.0 - 2.0 * 0.74) * (1.0 - 2.0 * 0.74)).epsilon(1e-12));
        CHECK(refl.port2 == Approx((1.0 - 2.0 * 0.86) * (1.0 - 2.0 * 0.86)).epsilon(1e-12));
    }
    SECTION("matched lossless limit") {
        const auto refl = reflection_coefficients(1e6, 1e6, 1.0, 1.0);
        CHECK(refl.port1 < 1e-10);
        CHECK(refl.port2 < 1e-10);
    }
    SECTION("paper working point") {
        const auto refl = reflection_coefficients(95.0, 95.0, 0.74, 0.86);
        const double expected = std::pow((191.0 - 2.0 * 0.74 * 96.0) / 191.0, 2.0);
        CHECK(refl.port1 == Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("conversion bandwidth") {
    const double gamma = hz_to_rad(4.0);
    CHECK(conversion_bandwidth(gamma, 0.0, 0.0) == gamma);
    const double coop = 95.0;
    const double total = conversion_bandwidth(gamma, coop * gamma, coop * gamma);
    CHECK(total == Approx((1.0 + 2.0 * coop) * gamma).epsilon(1e-12));
    CHECK(rad_to_hz(total) == Approx(764.0).epsilon(1e-12));
    CHECK(optomechanical_damping(hz_to_rad(15163.0), hz_to_rad(2.42e6)) ==
          Approx(hz_to_rad(4.0 * 15163.0 * 15163.0 / 2.42e6)).epsilon(1e-12));
}
