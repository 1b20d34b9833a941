#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "cmt/calibrate.hpp"
#include "cmt/timedomain.hpp"
#include "cmt/units.hpp"
#include "test_helpers.hpp"

using namespace cmt;
using Catch::Approx;

namespace {

PumpConfiguration equal_coop_pumps(const DeviceModel& device, double coop) {
    PumpConfiguration pumps = PumpConfiguration::off(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            pumps.photon_number(i, j) =
                photons_for_cooperativity(coop, device.couplings(i, j),
                                          device.cavities[i].kappa(),
                                          device.mechanics[j].gamma_m);
    return pumps;
}

/// Narrow-linewidth variant of the synthetic device, far inside the
/// weak-coupling hierarchy (gamma, delta0, G, F << kappa << dwm).
DeviceModel hierarchy_device() {
    DeviceModel device;
    device.cavities = {
        {1, hz_to_rad(5.0e9), hz_to_rad(5e3), hz_to_rad(15e3)},
        {2, hz_to_rad(6.0e9), hz_to_rad(4e3), hz_to_rad(16e3)},
    };
    device.mechanics = {
        {1, hz_to_rad(3.0e6), hz_to_rad(300.0)},
        {2, hz_to_rad(3.8e6), hz_to_rad(450.0)},
    };
    device.couplings.g0.resize(2, 2);
    device.couplings.g0 << hz_to_rad(30.0), hz_to_rad(25.0),
                           hz_to_rad(20.0), hz_to_rad(35.0);
    return device;
}

}  // namespace

TEST_CASE("probe on an uncoupled cavity reproduces the static reflection") {
    const DeviceModel device = test::fast_device();
    const PumpConfiguration pumps = PumpConfiguration::off(2, 2);
    const EffectiveModel eff = build_effective(device, pumps);

    ProbeDrive probe;
    probe.port = 0;
    probe.omega = 0.0;
    const auto ss = integrate_mean_field(device, eff, pumps.sideband_detuning, probe);
    CHECK(ss.s_column(0).real() ==
          Approx(2.0 * device.cavities[0].eta() - 1.0).epsilon(1e-8));
    CHECK(std::abs(ss.s_column(1)) < 1e-10);
}

TEST_CASE("with F forced to zero the integrated S column matches the engine") {
    const DeviceModel device = test::fast_device();
    PumpConfiguration pumps = equal_coop_pumps(device, 3.0);
    pumps.sideband_detuning << hz_to_rad(1500.0), hz_to_rad(-2500.0);
    pumps.phase(1, 1) = 0.9;
    const EffectiveModel eff = build_effective_rwa(device, pumps);  // F = 0 exactly

    for (double omega_hz : {0.0, 2e3}) {
        ProbeDrive probe;
        probe.port = 0;
        probe.omega = hz_to_rad(omega_hz);
        IntegrationOptions opt;
        opt.rel_tol = 1e-9;
        const auto ss = integrate_mean_field(device, eff, pumps.sideband_detuning, probe, opt);
        const auto fd = scattering_matrix(eff, device, probe.omega);
        const double deviation = (ss.s_column - fd.s.col(0)).norm() / fd.s.col(0).norm();
        CHECK(deviation < 1e-6);
    }
}

TEST_CASE("extended-system integration agrees with the extended direct solve") {
    const DeviceModel device = test::fast_device();
    PumpConfiguration pumps = equal_coop_pumps(device, 3.0);
    pumps.sideband_detuning << hz_to_rad(1500.0), hz_to_rad(-2500.0);
    const EffectiveModel eff = build_effective(device, pumps);

    ProbeDrive probe;
    probe.port = 1;
    probe.omega = hz_to_rad(-1200.0);
    IntegrationOptions opt;
    opt.extended = true;
    opt.rel_tol = 1e-9;
    const auto ss = integrate_mean_field(device, eff, pumps.sideband_detuning, probe, opt);
    const auto solve = steady_state_extended(device, eff, pumps.sideband_detuning, probe);
    CHECK((ss.s_column - solve.s_column).norm() / solve.s_column.norm() < 1e-6);
    CHECK(ss.state.aux_mech.size() == 2);
}

TEST_CASE("steady state is independent of the initial condition") {
    const DeviceModel device = test::fast_device();
    PumpConfiguration pumps = equal_coop_pumps(device, 2.0);
    pumps.sideband_detuning << hz_to_rad(800.0), hz_to_rad(-900.0);
    const EffectiveModel eff = build_effective(device, pumps);

    ProbeDrive probe;
    probe.port = 0;
    probe.omega = hz_to_rad(500.0);

    std::mt19937 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd columns[2];
    for (int trial = 0; trial < 2; ++trial) {
        IntegrationOptions opt;
        opt.rel_tol = 1e-11;
        opt.initial.cavity_amps = Eigen::VectorXcd::Zero(2);
        for (int i = 0; i < 2; ++i)
            opt.initial.cavity_amps(i) = complexd(gauss(rng), gauss(rng)) * 5.0;
        for (int j = 0; j < 2; ++j)
            opt.initial.mech_amps(j) = complexd(gauss(rng), gauss(rng)) * 5.0;
        const auto ss = integrate_mean_field(device, eff, pumps.sideband_detuning, probe, opt);
        columns[trial] = ss.s_column;
    }
    CHECK((columns[0] - columns[1]).norm() / columns[0].norm() < 1e-8);
}

TEST_CASE("red-detuned extended system is stable") {
    const DeviceModel device = test::fast_device();
    PumpConfiguration pumps = equal_coop_pumps(device, 5.0);
    pumps.sideband_detuning << hz_to_rad(300.0), hz_to_rad(-700.0);
    const EffectiveModel eff = build_effective(device, pumps);
    const auto blocks = detail::make_blocks(device, eff, pumps.sideband_detuning, true);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eigen(blocks.a_matrix);
    for (Eigen::Index k = 0; k < eigen.eigenvalues().size(); ++k)
        CHECK(eigen.eigenvalues()(k).real() < 0.0);
}

TEST_CASE("integrator is globally fourth order on the free decay") {
    const DeviceModel device = hierarchy_device();
    PumpConfiguration pumps = PumpConfiguration::off(2, 2);
    pumps.photon_number.setConstant(500.0);
    const EffectiveModel eff = build_effective(device, pumps);
    const auto blocks = detail::make_blocks(device, eff, pumps.sideband_detuning, true);
    const int n = static_cast<int>(blocks.a_matrix.rows());

    Eigen::VectorXcd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = complexd(std::cos(1.7 * i), std::sin(0.9 * i));
    const double t_total = 64.0 * 0.1 / hz_to_rad(0.8e6);
    const Eigen::VectorXcd exact = (blocks.a_matrix * t_total).exp() * x0;

    ProbeDrive off;
    off.amplitude = 0.0;
    double errors[2];
    int idx = 0;
    for (const int steps : {64, 128}) {
        const double dt = t_total / steps;
        Eigen::VectorXcd x = x0, k1(n), k2(n), k3(n), k4(n), tmp(n);
        double t = 0.0;
        for (int s = 0; s < steps; ++s) {
            detail::extended_derivative(blocks, t, x, off, k1);
            tmp = x + 0.5 * dt * k1;
            detail::extended_derivative(blocks, t + dt / 2.0, tmp, off, k2);
            tmp = x + 0.5 * dt * k2;
            detail::extended_derivative(blocks, t + dt / 2.0, tmp, off, k3);
            tmp = x + dt * k3;
            detail::extended_derivative(blocks, t + dt, tmp, off, k4);
            x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += dt;
        }
        errors[idx++] = (x - exact).norm() / exact.norm();
    }
    const double ratio = errors[0] / errors[1];
    CHECK(ratio > 12.0);
    CHECK(ratio < 22.0);
}

TEST_CASE("step size must resolve the fastest scale") {
    const DeviceModel device = test::fast_device();
    const PumpConfiguration pumps = PumpConfiguration::off(2, 2);
    const EffectiveModel eff = build_effective(device, pumps);
    ProbeDrive probe;
    IntegrationOptions opt;
    opt.dt = 1.0;  // grossly above 0.1 / max rate
    CHECK_THROWS_AS(integrate_mean_field(device, eff, pumps.sideband_detuning, probe, opt),
                    std::invalid_argument);
}

TEST_CASE("adiabatic elimination accuracy follows the scale hierarchy") {
    SECTION("pumps off: both routes coincide") {
        const DeviceModel device = test::fast_device();
        const auto report =
            compare_adiabatic(device, PumpConfiguration::off(2, 2), {0.0, hz_to_rad(1e3)});
        CHECK(report.max_deviation < 1e-12);
    }

    SECTION("weak coupling inside the hierarchy stays below 1e-3") {
        const DeviceModel device = hierarchy_device();
        for (double coop : {0.5, 1.0}) {
            PumpConfiguration pumps = equal_coop_pumps(device, coop);
            pumps.sideband_detuning << hz_to_rad(50.0), hz_to_rad(-80.0);
            const auto report = compare_adiabatic(
                device, pumps, {0.0, hz_to_rad(300.0), hz_to_rad(-500.0)});
            CHECK(report.max_deviation < 1e-3);
        }
    }

    SECTION("kappa comparable to the splitting is marginal") {
        DeviceModel device = test::fast_device();
        for (auto& c : device.cavities) {
            c.kappa_int *= 8.0;  // kappa ~ dwm
            c.kappa_ext *= 8.0;
        }
        PumpConfiguration pumps = equal_coop_pumps(device, 20.0);
        pumps.sideband_detuning << hz_to_rad(2000.0), hz_to_rad(-3000.0);
        const auto report =
            compare_adiabatic(device, pumps, {0.0, hz_to_rad(5e3), hz_to_rad(-7e3)});
        CHECK(report.max_deviation > 1e-2);
    }
}

TEST_CASE("paper isolator: elimination error grows as the splitting shrinks") {
    const DeviceModel device = test::isolator_device();
    const auto fit = fit_offresonant_targets(
        device, {hz_to_rad(190.0), hz_to_rad(407.0)}, {hz_to_rad(-84.0), hz_to_rad(233.0)});

    double previous = 0.0;
    for (const double scale : {1.0, 0.5, 0.25, 0.125}) {
        DeviceModel scaled = device;
        scaled.mechanics[1].omega_m =
            device.mechanics[0].omega_m +
            scale * (device.mechanics[1].omega_m - device.mechanics[0].omega_m);
        const auto report = compare_adiabatic(scaled, fit.pumps, {0.0});
        CHECK(report.max_deviation > previous);
        previous = report.max_deviation;
    }
    // At the device's actual splitting the two routes agree to well below 1%.
    const auto report = compare_adiabatic(device, fit.pumps, {0.0});
    CHECK(report.max_deviation < 0.01);
}
