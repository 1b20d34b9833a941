#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmt/device.hpp"
#include "cmt/units.hpp"
#include "test_helpers.hpp"

using namespace cmt;
using Catch::Approx;

TEST_CASE("lc_frequency reproduces the circuit table") {
    // Cavity 1: L = 48.2 nH, C = Cs + Cm = 5.3 + 0.45 fF.
    const double f1 = rad_to_hz(lc_frequency(48.2e-9, 5.75e-15));
    CHECK(std::abs(f1 - 9.55e9) / 9.55e9 < 0.01);
    // Cavity 3: L = 34.4 nH, C = 5.29 + 0.45 fF.
    const double f3 = rad_to_hz(lc_frequency(34.4e-9, 5.74e-15));
    CHECK(std::abs(f3 - 11.32e9) / 11.32e9 < 0.01);
}

TEST_CASE("lc_frequency scaling and domain") {
    const double base = lc_frequency(50e-9, 5e-15);
    CHECK(lc_frequency(200e-9, 5e-15) == Approx(base / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(lc_frequency(0.0, 1e-15), std::domain_error);
    CHECK_THROWS_AS(lc_frequency(1e-9, -1e-15), std::domain_error);

    // Monotone decreasing in both arguments.
    double previous = lc_frequency(10e-9, 5e-15);
    for (double l = 20e-9; l < 100e-9; l += 10e-9) {
        const double current = lc_frequency(l, 5e-15);
        CHECK(current < previous);
        previous = current;
    }
    previous = lc_frequency(50e-9, 1e-15);
    for (double c = 2e-15; c < 10e-15; c += 1e-15) {
        const double current = lc_frequency(50e-9, c);
        CHECK(current < previous);
        previous = current;
    }
}

TEST_CASE("participation_ratio") {
    CHECK(participation_ratio(0.45e-15, 0.0) == 1.0);
    CHECK(participation_ratio(0.45e-15, 5.3e-15) == Approx(0.45 / 5.75).epsilon(1e-12));
    CHECK(participation_ratio(1e-15, 1e-15) == 0.5);
    CHECK_THROWS_AS(participation_ratio(0.0, 1e-15), std::domain_error);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> cap(1e-16, 1e-14);
    for (int k = 0; k < 200; ++k) {
        const double zeta = participation_ratio(cap(rng), cap(rng));
        CHECK(zeta > 0.0);
        CHECK(zeta <= 1.0);
    }
}

TEST_CASE("vacuum_coupling matches the calibrated g0 when dC/dv is solved back") {
    const double omega = hz_to_rad(9.55e9);
    const double zeta = participation_ratio(0.45e-15, 5.3e-15);
    const double x_zpf = 22e-15;
    const double cm = 0.45e-15;
    const double g0_target = hz_to_rad(33.0);

    // The capacitance gradient is never quoted; invert the coupling formula
    // for the value consistent with g0/2pi = 33 Hz (about 1.8 nF/m, i.e. a
    // sensible fraction of Cm / gap for a 60 nm vacuum gap).
    const double dc_dv = g0_target * 2.0 * cm / (x_zpf * zeta * omega);
    CHECK(dc_dv == Approx(1.806e-9).epsilon(5e-3));
    CHECK(vacuum_coupling(x_zpf, zeta, omega, cm, dc_dv) == Approx(g0_target).epsilon(1e-12));

    CHECK(vacuum_coupling(x_zpf, zeta, omega, cm, 0.0) == 0.0);
    CHECK(vacuum_coupling(2.0 * x_zpf, zeta, omega, cm, dc_dv) ==
          Approx(2.0 * g0_target).epsilon(1e-12));
    CHECK_THROWS_AS(vacuum_coupling(x_zpf, zeta, omega, 0.0, dc_dv), std::domain_error);
}

TEST_CASE("photons_from_drive") {
    CHECK(photons_from_drive(0.0, 1e6, 0.0) == 0.0);
    const double kappa = hz_to_rad(2.42e6);
    const double amp = hz_to_rad(1.0e6);
    CHECK(photons_from_drive(amp, kappa, 0.0) == Approx(4.0 * amp * amp / (kappa * kappa)));
    // E = kappa, Delta = kappa/2 -> n = 4 kappa^2 / (2 kappa^2) = 2.
    CHECK(photons_from_drive(kappa, kappa, kappa / 2.0) == Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(photons_from_drive(1.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("cooperativity and its inverse") {
    const double g0 = hz_to_rad(33.0);
    const double kappa = hz_to_rad(2.42e6);
    const double gamma = hz_to_rad(4.0);
    CHECK(cooperativity(g0, 0.0, kappa, gamma) == 0.0);

    const double n95 = photons_for_cooperativity(95.0, g0, kappa, gamma);
    CHECK(cooperativity(g0, n95, kappa, gamma) == Approx(95.0).epsilon(1e-12));

    const double c1 = cooperativity(g0, 1000.0, kappa, gamma);
    const double c4 = cooperativity(g0, 4000.0, kappa, gamma);
    CHECK(std::sqrt(c4) == Approx(2.0 * std::sqrt(c1)).epsilon(1e-12));
}

TEST_CASE("voltage_tuning_fit recovers exact coefficients") {
    const double a1 = hz_to_rad(0.53e6);
    const double a2 = hz_to_rad(0.05e6);
    std::vector<double> volts, shifts;
    for (double v = 0.0; v <= 4.5; v += 0.25) {
        volts.push_back(v);
        shifts.push_back(a1 * v * v + a2 * v * v * v * v);
    }
    const TuningFit fit = voltage_tuning_fit(volts, shifts);
    CHECK(fit.alpha1 == Approx(a1).epsilon(1e-6));
    CHECK(fit.alpha2 == Approx(a2).epsilon(1e-6));
    CHECK(fit.residual_norm < 1e-6 * a1);  // machine-precision residual on model data

    SECTION("all-zero shifts give zero coefficients") {
        std::vector<double> zeros(volts.size(), 0.0);
        const TuningFit zero_fit = voltage_tuning_fit(volts, zeros);
        CHECK(zero_fit.alpha1 == 0.0);
        CHECK(zero_fit.alpha2 == 0.0);
    }

    SECTION("rank-deficient design is rejected") {
        std::vector<double> same{2.0, 2.0, -2.0};
        std::vector<double> y{1.0, 1.0, 1.0};
        CHECK_THROWS_AS(voltage_tuning_fit(same, y), numerical_error);
    }
}

TEST_CASE("voltage_tuning_fit with noise stays within three standard errors") {
    const double a1 = hz_to_rad(0.53e6);
    const double a2 = hz_to_rad(0.05e6);
    const double sigma = hz_to_rad(1e3);  // 1 kHz RMS additive noise

    std::mt19937 rng(1234);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> volts, shifts;
    Eigen::MatrixXd design(37, 2);
    int row = 0;
    for (double v = 0.5; row < 37; v += 0.125, ++row) {
        volts.push_back(v);
        shifts.push_back(a1 * v * v + a2 * v * v * v * v + noise(rng));
        design(row, 0) = v * v;
        design(row, 1) = v * v * v * v;
    }
    const TuningFit fit = voltage_tuning_fit(volts, shifts);

    // Independent error propagation: Cov = sigma^2 (X^T X)^{-1}.
    const Eigen::Matrix2d covariance =
        sigma * sigma * (design.transpose() * design).inverse();
    CHECK(std::abs(fit.alpha1 - a1) < 3.0 * std::sqrt(covariance(0, 0)));
    CHECK(std::abs(fit.alpha2 - a2) < 3.0 * std::sqrt(covariance(1, 1)));
}

TEST_CASE("paper device passes validation and matches the eta column") {
    const DeviceModel device = test::paper_device();
    const auto warnings = device.validate();
    CHECK(warnings.empty());

    // One unit in the last quoted digit (the table rounds inconsistently:
    // 1.58/3 = 0.527 is printed as 0.52).
    const double eta_table[3] = {0.74, 0.86, 0.52};
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(device.cavities[i].eta() - eta_table[i]) <= 0.01);
}

TEST_CASE("device validation rejects bad input") {
    DeviceModel device = test::paper_device();
    device.couplings.g0.resize(2, 2);
    CHECK_THROWS_AS(device.validate(), config_error);

    device = test::paper_device();
    device.cavities[1].omega = device.cavities[0].omega;
    CHECK_THROWS_AS(device.validate(), config_error);

    device = test::paper_device();
    device.mechanics[0].gamma_m = hz_to_rad(5e3);  // Q drops below 1e3
    const auto warnings = device.validate();
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("omega_m/gamma_m") != std::string::npos);
}

TEST_CASE("tuning curve vanishes at zero volts and spans 30 MHz") {
    TuningCurve curve;
    curve.alpha1 = hz_to_rad(0.53e6);
    curve.alpha2 = hz_to_rad(0.05e6);
    curve.sign = -1;  // resonator 2 tunes down
    CHECK(curve.shift(0.0) == 0.0);

    // Solve alpha1 V^2 + alpha2 V^4 = 30 MHz for the fixture voltage span:
    // 0.05 u^2 + 0.53 u - 30 = 0 (u = V^2, MHz units) -> u = 19.7611...
    const double u = (-0.53 + std::sqrt(0.53 * 0.53 + 4.0 * 0.05 * 30.0)) / (2.0 * 0.05);
    const double v_max = std::sqrt(u);
    CHECK(v_max == Approx(4.4454).epsilon(1e-3));
    CHECK(std::abs(curve.shift(v_max)) == Approx(hz_to_rad(30e6)).epsilon(1e-9));
}
