// cmtsim: coupled-mode simulator for multi-port electromechanical microwave
// devices. Subcommands: spectrum | phase-sweep | convert | noise | optimize
// | verify. All file I/O is plain-Hz / dB / degrees; see README for the
// config schema.

#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmt/analytic.hpp"
#include "cmt/calibrate.hpp"
#include "cmt/config.hpp"
#include "cmt/csv.hpp"
#include "cmt/device.hpp"
#include "cmt/effective.hpp"
#include "cmt/noise.hpp"
#include "cmt/optimize.hpp"
#include "cmt/scattering.hpp"
#include "cmt/timedomain.hpp"
#include "cmt/units.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_target = 4;

std::string sij_name(int i, int j) {
    return "s" + std::to_string(i + 1) + std::to_string(j + 1);
}

cmt::PumpConfiguration require_pumps(const cmt::LoadedConfig& loaded) {
    if (!loaded.pumps)
        throw cmt::config_error("this command needs [pump.I.J] sections in the config");
    return *loaded.pumps;
}

void print_warnings(const cmt::LoadedConfig& loaded) {
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
}

struct SpectrumArgs {
    std::string config, out;
    double omega_min_hz = -3000.0, omega_max_hz = 3000.0;
    int points = 401;
    unsigned seed = 0;
};

int run_spectrum(const SpectrumArgs& args) {
    const auto loaded = cmt::load_device_config(args.config);
    print_warnings(loaded);
    const auto pumps = require_pumps(loaded);
    const auto eff = cmt::build_effective(loaded.device, pumps);
    const auto sweep = cmt::spectrum_sweep(eff, loaded.device,
                                           cmt::hz_to_rad(args.omega_min_hz),
                                           cmt::hz_to_rad(args.omega_max_hz), args.points);

    cmt::RunManifest manifest;
    manifest.command = "spectrum";
    manifest.config_path = args.config;
    manifest.output_path = args.out;
    manifest.seed = args.seed;
    manifest.overrides = "omega_min_hz=" + cmt::format_number(args.omega_min_hz) +
                         " omega_max_hz=" + cmt::format_number(args.omega_max_hz) +
                         " points=" + std::to_string(args.points);

    cmt::CsvWriter csv(args.out, manifest);
    const int nc = loaded.device.num_cavities();
    std::vector<std::string> columns{"omega_hz"};
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            columns.push_back(sij_name(i, j) + "_re");
            columns.push_back(sij_name(i, j) + "_im");
            columns.push_back(sij_name(i, j) + "_db");
        }
    csv.header(columns);
    for (std::size_t k = 0; k < sweep.omega_grid.size(); ++k) {
        std::vector<double> row{cmt::rad_to_hz(sweep.omega_grid[k])};
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j) {
                const auto s = sweep.s_matrices[k](i, j);
                row.push_back(s.real());
                row.push_back(s.imag());
                row.push_back(cmt::power_db(std::abs(s)));
            }
        csv.row(row);
    }
    return exit_ok;
}

struct PhaseSweepArgs {
    std::string config, out;
    int phase_cavity = 2, phase_mode = 2;
    int phi_points = 73, omega_points = 101;
    double omega_min_hz = -3000.0, omega_max_hz = 3000.0;
    unsigned seed = 0;
};

int run_phase_sweep(const PhaseSweepArgs& args) {
    const auto loaded = cmt::load_device_config(args.config);
    print_warnings(loaded);
    const auto pumps = require_pumps(loaded);

    std::vector<double> phi_grid, omega_grid;
    for (int p = 0; p < args.phi_points; ++p)
        phi_grid.push_back(-cmt::pi + cmt::two_pi * p / (args.phi_points - 1));
    for (int w = 0; w < args.omega_points; ++w)
        omega_grid.push_back(cmt::hz_to_rad(args.omega_min_hz) +
                             (cmt::hz_to_rad(args.omega_max_hz) -
                              cmt::hz_to_rad(args.omega_min_hz)) *
                                 w / (args.omega_points - 1));

    const auto grid = cmt::phase_sweep(loaded.device, pumps, args.phase_cavity - 1,
                                       args.phase_mode - 1, phi_grid, omega_grid);

    cmt::RunManifest manifest;
    manifest.command = "phase-sweep";
    manifest.config_path = args.config;
    manifest.output_path = args.out;
    manifest.seed = args.seed;
    manifest.overrides = "phase_index=" + std::to_string(args.phase_cavity) + "." +
                         std::to_string(args.phase_mode) +
                         " phi_points=" + std::to_string(args.phi_points) +
                         " omega_points=" + std::to_string(args.omega_points) +
                         " omega_min_hz=" + cmt::format_number(args.omega_min_hz) +
                         " omega_max_hz=" + cmt::format_number(args.omega_max_hz);

    cmt::CsvWriter csv(args.out, manifest);
    const int nc = loaded.device.num_cavities();
    std::vector<std::string> columns{"phi_deg", "omega_hz"};
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            if (i != j) columns.push_back(sij_name(i, j) + "_db");
    csv.header(columns);
    for (std::size_t p = 0; p < phi_grid.size(); ++p)
        for (std::size_t w = 0; w < omega_grid.size(); ++w) {
            const auto& s = grid.s_matrices[p * omega_grid.size() + w];
            std::vector<double> row{cmt::rad_to_deg(phi_grid[p]),
                                    cmt::rad_to_hz(omega_grid[w])};
            for (int i = 0; i < nc; ++i)
                for (int j = 0; j < nc; ++j)
                    if (i != j) row.push_back(cmt::power_db(std::abs(s(i, j))));
            csv.row(row);
        }
    return exit_ok;
}

struct ConvertArgs {
    std::string config, out;
    int mech = 1, port_a = 1, port_b = 2;
    double c1 = 95.0, c2_min = 1.0, c2_max = 300.0;
    int points = 150;
    unsigned seed = 0;
};

int run_convert(const ConvertArgs& args) {
    const auto loaded = cmt::load_device_config(args.config);
    print_warnings(loaded);
    const auto& device = loaded.device;
    const int a = args.port_a - 1, b = args.port_b - 1, j = args.mech - 1;
    const double eta_a = device.cavities[a].eta();
    const double eta_b = device.cavities[b].eta();
    const double gamma = device.mechanics[j].gamma_m;

    cmt::RunManifest manifest;
    manifest.command = "convert";
    manifest.config_path = args.config;
    manifest.output_path = args.out;
    manifest.seed = args.seed;
    manifest.overrides = "mech=" + std::to_string(args.mech) +
                         " ports=" + std::to_string(args.port_a) + "." +
                         std::to_string(args.port_b) + " c1=" + cmt::format_number(args.c1) +
                         " c2=" + cmt::format_number(args.c2_min) + ".." +
                         cmt::format_number(args.c2_max) +
                         " points=" + std::to_string(args.points);

    cmt::CsvWriter csv(args.out, manifest);
    csv.header({"c2", "t2", "s11_sq", "s22_sq", "t2_engine", "s11_sq_engine", "s22_sq_engine",
                "bandwidth_hz"});
    for (int k = 0; k < args.points; ++k) {
        const double c2 = args.c2_min + (args.c2_max - args.c2_min) * k /
                                            std::max(1, args.points - 1);
        const double t2 = cmt::conversion_efficiency(args.c1, c2, eta_a, eta_b);
        const auto refl = cmt::reflection_coefficients(args.c1, c2, eta_a, eta_b);

        cmt::PumpConfiguration pumps = cmt::PumpConfiguration::off(device.num_cavities(), 2);
        pumps.photon_number(a, j) = cmt::photons_for_cooperativity(
            args.c1, device.couplings(a, j), device.cavities[a].kappa(), gamma);
        pumps.photon_number(b, j) = cmt::photons_for_cooperativity(
            c2, device.couplings(b, j), device.cavities[b].kappa(), gamma);
        const auto eff = cmt::build_effective(device, pumps);
        const auto ps = cmt::scattering_matrix(eff, device, 0.0);

        const double bandwidth = cmt::conversion_bandwidth(gamma, args.c1 * gamma, c2 * gamma);
        csv.row({c2, t2, refl.port1, refl.port2, std::abs(ps.s(b, a)) * std::abs(ps.s(a, b)),
                 std::norm(ps.s(a, a)), std::norm(ps.s(b, b)), cmt::rad_to_hz(bandwidth)});
    }
    return exit_ok;
}

struct NoiseArgs {
    std::string config, env, out, psd_in;
    double omega_min_hz = -2000.0, omega_max_hz = 2000.0;
    int points = 201;
    unsigned seed = 0;
};

int run_noise(const NoiseArgs& args) {
    const auto loaded = cmt::load_device_config(args.config);
    print_warnings(loaded);
    const auto env = cmt::load_environment_config(args.env, loaded.device);
    const auto pumps = require_pumps(loaded);
    const auto eff = cmt::build_effective(loaded.device, pumps);
    const auto sweep = cmt::spectrum_sweep(eff, loaded.device,
                                           cmt::hz_to_rad(args.omega_min_hz),
                                           cmt::hz_to_rad(args.omega_max_hz), args.points);
    const bool pumps_on = pumps.photon_number.maxCoeff() > 0.0;

    cmt::RunManifest manifest;
    manifest.command = "noise";
    manifest.config_path = args.config;
    manifest.output_path = args.out;
    manifest.seed = args.seed;
    manifest.overrides = "env=" + args.env + " omega_min_hz=" +
                         cmt::format_number(args.omega_min_hz) + " omega_max_hz=" +
                         cmt::format_number(args.omega_max_hz) +
                         " points=" + std::to_string(args.points);

    cmt::CsvWriter csv(args.out, manifest);
    if (!args.psd_in.empty()) {
        // Amplifier calibration from a pumps-off measured trace.
        const auto samples = cmt::read_psd_csv(args.psd_in);
        csv.comment("inferred amplifier quanta from " + args.psd_in);
        for (int port = 0; port < loaded.device.num_cavities() &&
                           port < static_cast<int>(samples.size());
             ++port) {
            const double n_amp = cmt::infer_amp_noise(
                samples[port].psd_w_per_hz, cmt::hz_to_rad(samples[port].freq_hz),
                env.amplifiers.gain_db(port));
            csv.comment("n_amp_port" + std::to_string(port + 1) + ": " +
                        cmt::format_number(n_amp));
        }
    }

    const int nc = loaded.device.num_cavities();
    std::vector<std::string> columns{"omega_hz"};
    for (int i = 0; i < nc; ++i) columns.push_back("psd_w_per_hz_port" + std::to_string(i + 1));
    const auto budget = pumps_on
                            ? cmt::noise_budget(sweep, loaded.device, env.environment,
                                                env.amplifiers)
                            : cmt::NoiseBudget{};
    if (pumps_on)
        for (const auto& [to, from] : budget.paths)
            columns.push_back("n_add_" + std::to_string(to + 1) + std::to_string(from + 1));
    csv.header(columns);

    for (std::size_t k = 0; k < sweep.omega_grid.size(); ++k) {
        std::vector<double> row{cmt::rad_to_hz(sweep.omega_grid[k])};
        for (int i = 0; i < nc; ++i) {
            const auto psd = cmt::output_noise_psd(sweep, loaded.device, env.environment,
                                                   env.amplifiers, i);
            row.push_back(psd[k]);
        }
        if (pumps_on)
            for (std::size_t p = 0; p < budget.paths.size(); ++p)
                row.push_back(budget.n_add_per_path[p][k]);
        csv.row(row);
    }
    return exit_ok;
}

struct OptimizeArgs {
    std::string config, target, out, history;
    unsigned seed = 0;
};

int run_optimize(const OptimizeArgs& args) {
    const auto loaded = cmt::load_device_config(args.config);
    print_warnings(loaded);
    const auto target = cmt::load_target_config(args.target);
    const auto& device = loaded.device;

    cmt::OptimizationResult result;
    if (target.kind == cmt::OptimizationTarget::Kind::isolate) {
        cmt::PumpConfiguration seed_pumps;
        if (loaded.pumps) {
            seed_pumps = *loaded.pumps;
        } else {
            const auto point = cmt::matched_two_port_point(device, 2.4);
            seed_pumps = cmt::PumpConfiguration::off(device.num_cavities(), 2);
            for (int i = 0; i < device.num_cavities(); ++i)
                for (int j = 0; j < 2; ++j)
                    seed_pumps.photon_number(i, j) = cmt::photons_for_cooperativity(
                        point.coop, device.couplings(i, j), device.cavities[i].kappa(),
                        device.mechanics[j].gamma_m);
            seed_pumps.phase(1, 1) = point.phi_isolate;
            seed_pumps.sideband_detuning = point.delta_eff;
        }
        result = cmt::optimize_isolation(device, target, seed_pumps);
    } else {
        const auto seed_pumps = loaded.pumps.value_or(cmt::circulator_seed(device, 40.0, 3.0));
        result = cmt::optimize_circulation(device, target, seed_pumps);
    }

    cmt::RunManifest manifest;
    manifest.command = "optimize";
    manifest.config_path = args.config;
    manifest.output_path = args.out;
    manifest.seed = args.seed;
    manifest.overrides = "target=" + args.target;

    cmt::CsvWriter csv(args.out, manifest);
    csv.comment("objective: " + cmt::format_number(result.objective));
    csv.comment("isolation_db: " + cmt::format_number(result.achieved.isolation_db));
    csv.comment("insertion_loss_db: " + cmt::format_number(result.achieved.insertion_loss_db));
    csv.comment("bandwidth_hz: " + cmt::format_number(result.achieved.bandwidth_hz));
    csv.comment(std::string("feasible: ") + (result.feasible ? "yes" : "no"));
    csv.header({"cavity", "mode", "photons", "phi_deg"});
    for (int i = 0; i < result.pumps.photon_number.rows(); ++i)
        for (int j = 0; j < 2; ++j)
            csv.row({static_cast<double>(i + 1), static_cast<double>(j + 1),
                     result.pumps.photon_number(i, j),
                     cmt::rad_to_deg(result.pumps.phase(i, j))});
    csv.row({0.0, 1.0, 0.0, cmt::rad_to_hz(result.pumps.sideband_detuning(0))});
    csv.row({0.0, 2.0, 0.0, cmt::rad_to_hz(result.pumps.sideband_detuning(1))});

    if (!args.history.empty()) {
        cmt::RunManifest hist_manifest = manifest;
        hist_manifest.output_path = args.history;
        cmt::CsvWriter hist(args.history, hist_manifest);
        hist.header({"evaluation", "objective"});
        for (const auto& [k, value] : result.history)
            hist.row({static_cast<double>(k), value});
    }
    return result.feasible ? exit_ok : exit_target;
}

struct VerifyArgs {
    std::string config;
    std::string mode = "oracle";
    unsigned seed = 0;
};

bool verify_oracle(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        cmt::DeviceModel device;
        const double kappa1 = cmt::hz_to_rad(1e6 * (1.0 + 2.0 * unit(rng)));
        const double kappa2 = cmt::hz_to_rad(1e6 * (1.0 + 2.0 * unit(rng)));
        const double eta1 = 0.5 + 0.49 * unit(rng);
        const double eta2 = 0.5 + 0.49 * unit(rng);
        device.cavities.push_back({1, cmt::hz_to_rad(9.55e9), (1 - eta1) * kappa1,
                                   eta1 * kappa1});
        device.cavities.push_back({2, cmt::hz_to_rad(9.82e9), (1 - eta2) * kappa2,
                                   eta2 * kappa2});
        device.mechanics.push_back({1, cmt::hz_to_rad(4.34e6), cmt::hz_to_rad(4.0 + 6.0 * unit(rng))});
        device.mechanics.push_back({2, cmt::hz_to_rad(5.64e6), cmt::hz_to_rad(4.0 + 6.0 * unit(rng))});
        device.couplings.g0 = Eigen::MatrixXd::Constant(2, 2, cmt::hz_to_rad(30.0));

        cmt::TwoPortWorkingPoint wp;
        wp.c11 = 1.0 + 20.0 * unit(rng);
        wp.c12 = 1.0 + 20.0 * unit(rng);
        wp.c21 = 1.0 + 20.0 * unit(rng);
        wp.c22 = 1.0 + 20.0 * unit(rng);
        wp.gamma1 = device.mechanics[0].gamma_m;
        wp.gamma2 = device.mechanics[1].gamma_m;
        wp.delta = wp.gamma1 * (2.0 * unit(rng) - 1.0) * 3.0;
        wp.phi = cmt::two_pi * unit(rng) - cmt::pi;
        wp.eta1 = eta1;
        wp.eta2 = eta2;

        Eigen::MatrixXd coop(2, 2), phase = Eigen::MatrixXd::Zero(2, 2);
        coop << wp.c11, wp.c12, wp.c21, wp.c22;
        phase(1, 1) = wp.phi;
        const auto eff = cmt::make_direct_effective(
            device, coop, phase, Eigen::Vector2d{wp.delta, -wp.delta},
            Eigen::Vector2d{wp.gamma1, wp.gamma2});

        for (int k = 0; k < 11; ++k) {
            const double omega = (k - 5) * wp.gamma1;
            const auto ps = cmt::scattering_matrix(eff, device, omega);
            const auto lambda_engine = ps.s(0, 1) / ps.s(1, 0);
            const auto lambda_formula = cmt::lambda_ratio(wp, omega);
            if (std::abs(lambda_engine - lambda_formula) >
                1e-9 * std::abs(lambda_formula)) {
                ok = false;
            }
        }
    }
    std::cout << (ok ? "PASS" : "FAIL") << " oracle: engine vs closed-form lambda\n";
    return ok;
}

bool verify_invariants(const cmt::LoadedConfig& loaded) {
    const auto pumps = require_pumps(loaded);
    const auto eff = cmt::build_effective(loaded.device, pumps);
    const double span = std::max(eff.gamma_eff(0), eff.gamma_eff(1)) * 20.0;
    bool passive = true, low_rank = true;
    for (int k = 0; k < 101; ++k) {
        const double omega = -span + 2.0 * span * k / 100.0;
        const auto ps = cmt::scattering_matrix(eff, loaded.device, omega);
        if (cmt::max_singular_value(ps.s) > 1.0 + 1e-9) passive = false;
        const auto drift = cmt::assemble_drift_matrix(eff, loaded.device, omega);
        const auto [largest, third] = drift.coupling_rank_check(loaded.device);
        if (largest > 0.0 && third > 1e-10 * largest) low_rank = false;
    }
    std::cout << (passive ? "PASS" : "FAIL") << " invariants: passivity over sweep\n";
    std::cout << (low_rank ? "PASS" : "FAIL") << " invariants: drift-matrix low rank\n";
    return passive && low_rank;
}

bool verify_timedomain(const cmt::LoadedConfig& loaded) {
    const auto pumps = require_pumps(loaded);
    const auto eff = cmt::build_effective(loaded.device, pumps);
    std::vector<double> omegas;
    for (int k = -2; k <= 2; ++k)
        omegas.push_back(k * std::max(eff.gamma_eff(0), eff.gamma_eff(1)));
    const auto report = cmt::compare_adiabatic(loaded.device, pumps, omegas);
    const bool ok = report.max_deviation < 0.01;
    std::cout << (ok ? "PASS" : "FAIL")
              << " timedomain: extended-system deviation " << report.max_deviation
              << " (threshold 0.01)\n";
    return ok;
}

int run_verify(const VerifyArgs& args) {
    const auto loaded = cmt::load_device_config(args.config);
    print_warnings(loaded);
    std::mt19937 rng(args.seed);
    bool ok = false;
    if (args.mode == "oracle") {
        ok = verify_oracle(rng);
    } else if (args.mode == "invariants") {
        ok = verify_invariants(loaded);
    } else if (args.mode == "timedomain") {
        ok = verify_timedomain(loaded);
    } else {
        throw cmt::config_error("verify: unknown mode '" + args.mode + "'");
    }
    return ok ? exit_ok : exit_target;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled-mode electromechanical device simulator"};
    app.require_subcommand(1);

    SpectrumArgs spectrum;
    auto* cmd_spectrum = app.add_subcommand("spectrum", "port S-parameters over a probe grid");
    cmd_spectrum->add_option("--config", spectrum.config)->required();
    cmd_spectrum->add_option("--omega-min-hz", spectrum.omega_min_hz);
    cmd_spectrum->add_option("--omega-max-hz", spectrum.omega_max_hz);
    cmd_spectrum->add_option("--points", spectrum.points);
    cmd_spectrum->add_option("--out", spectrum.out)->required();
    cmd_spectrum->add_option("--seed", spectrum.seed);

    PhaseSweepArgs phase;
    auto* cmd_phase = app.add_subcommand("phase-sweep", "S-parameters vs pump phase and probe");
    cmd_phase->add_option("--config", phase.config)->required();
    cmd_phase->add_option("--phase-cavity", phase.phase_cavity);
    cmd_phase->add_option("--phase-mode", phase.phase_mode);
    cmd_phase->add_option("--phi-points", phase.phi_points);
    cmd_phase->add_option("--omega-points", phase.omega_points);
    cmd_phase->add_option("--omega-min-hz", phase.omega_min_hz);
    cmd_phase->add_option("--omega-max-hz", phase.omega_max_hz);
    cmd_phase->add_option("--out", phase.out)->required();
    cmd_phase->add_option("--seed", phase.seed);

    ConvertArgs convert;
    auto* cmd_convert = app.add_subcommand("convert", "bidirectional conversion metrics");
    cmd_convert->add_option("--config", convert.config)->required();
    cmd_convert->add_option("--mech", convert.mech);
    cmd_convert->add_option("--port-a", convert.port_a);
    cmd_convert->add_option("--port-b", convert.port_b);
    cmd_convert->add_option("--c1", convert.c1);
    cmd_convert->add_option("--c2-min", convert.c2_min);
    cmd_convert->add_option("--c2-max", convert.c2_max);
    cmd_convert->add_option("--points", convert.points);
    cmd_convert->add_option("--out", convert.out)->required();
    cmd_convert->add_option("--seed", convert.seed);

    NoiseArgs noise;
    auto* cmd_noise = app.add_subcommand("noise", "output PSD and added noise per path");
    cmd_noise->add_option("--config", noise.config)->required();
    cmd_noise->add_option("--env", noise.env)->required();
    cmd_noise->add_option("--psd-in", noise.psd_in);
    cmd_noise->add_option("--omega-min-hz", noise.omega_min_hz);
    cmd_noise->add_option("--omega-max-hz", noise.omega_max_hz);
    cmd_noise->add_option("--points", noise.points);
    cmd_noise->add_option("--out", noise.out)->required();
    cmd_noise->add_option("--seed", noise.seed);

    OptimizeArgs optimize;
    auto* cmd_optimize = app.add_subcommand("optimize", "search pump settings for a target");
    cmd_optimize->add_option("--config", optimize.config)->required();
    cmd_optimize->add_option("--target", optimize.target)->required();
    cmd_optimize->add_option("--out", optimize.out)->required();
    cmd_optimize->add_option("--history", optimize.history);
    cmd_optimize->add_option("--seed", optimize.seed);

    VerifyArgs verify;
    auto* cmd_verify = app.add_subcommand("verify", "run oracle/invariant/timedomain checks");
    cmd_verify->add_option("--config", verify.config)->required();
    cmd_verify->add_option("--mode", verify.mode)
        ->check(CLI::IsMember({"oracle", "invariants", "timedomain"}));
    cmd_verify->add_option("--seed", verify.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_spectrum->parsed()) return run_spectrum(spectrum);
        if (cmd_phase->parsed()) return run_phase_sweep(phase);
        if (cmd_convert->parsed()) return run_convert(convert);
        if (cmd_noise->parsed()) return run_noise(noise);
        if (cmd_optimize->parsed()) return run_optimize(optimize);
        if (cmd_verify->parsed()) return run_verify(verify);
    } catch (const cmt::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const cmt::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const cmt::model_error& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
