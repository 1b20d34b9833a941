#pragma once

// Output-noise budget: thermal occupancies, amplifier chain, measured power
// spectral density, amplifier-noise inference, and input-referred added
// noise per conversion path.
//
// Under the white-noise correlators the excess (above-vacuum) output noise
// at port i is
//   n_excess,i(omega) = sum_k |S_ik|^2 Nbar_cav,k + sum_j |T_ij|^2 Nbar_m,j,
// and the spectrum-analyzer PSD reads
//   S_noise,i = hbar omega_i 10^{Gain_i/10} (1 + n_amp,i + n_excess,i),
// adopting the amplifier approximation G ~ G - 1 = 10^{Gain/10}.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "cmt/device.hpp"
#include "cmt/errors.hpp"
#include "cmt/nelder_mead.hpp"
#include "cmt/scattering.hpp"
#include "cmt/units.hpp"

namespace cmt {

/// Bose-Einstein occupancy; extended by definition to 0 at T = 0.
inline double bose_occupancy(double omega, double temperature) {
    if (!(omega > 0.0)) throw std::domain_error("bose_occupancy: omega must be positive");
    if (temperature < 0.0)
        throw std::domain_error("bose_occupancy: temperature must be nonnegative");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(hbar * omega / (k_boltzmann * temperature));
}

struct ThermalEnvironment {
    Eigen::VectorXd cavity_occupancy;  // Nbar per cavity input line
    Eigen::Vector2d mech_occupancy;    // Nbar per mechanical bath

    static ThermalEnvironment from_temperatures(const DeviceModel& device,
                                                const Eigen::VectorXd& cavity_temps,
                                                const Eigen::Vector2d& mech_temps) {
        ThermalEnvironment env;
        env.cavity_occupancy.resize(device.num_cavities());
        for (int i = 0; i < device.num_cavities(); ++i)
            env.cavity_occupancy(i) = bose_occupancy(device.cavities[i].omega, cavity_temps(i));
        for (int j = 0; j < 2; ++j)
            env.mech_occupancy(j) = bose_occupancy(device.mechanics[j].omega_m, mech_temps(j));
        return env;
    }

    static ThermalEnvironment from_occupancies(const Eigen::VectorXd& cavity,
                                               const Eigen::Vector2d& mech) {
        if (cavity.minCoeff() < 0.0 || mech.minCoeff() < 0.0)
            throw config_error("occupancies must be nonnegative");
        return ThermalEnvironment{cavity, mech};
    }
};

struct AmplifierChain {
    Eigen::VectorXd gain_db;       // per port
    Eigen::VectorXd added_quanta;  // n_amp per port

    void validate(int num_ports) const {
        if (gain_db.size() != num_ports || added_quanta.size() != num_ports)
            throw config_error("amplifier chain needs gain and added quanta per port");
        if (added_quanta.minCoeff() < 0.0)
            throw config_error("amplifier added quanta must be nonnegative");
    }
};

/// Excess output noise quanta at one port for one solved frequency point.
inline double excess_output_noise(const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& mech,
                                  const ThermalEnvironment& env, int port) {
    if (s.rows() != env.cavity_occupancy.size())
        throw std::invalid_argument("excess_output_noise: grid/occupancy dimension mismatch");
    double n = 0.0;
    for (Eigen::Index k = 0; k < s.cols(); ++k)
        n += std::norm(s(port, k)) * env.cavity_occupancy(k);
    for (int j = 0; j < 2; ++j) n += std::norm(mech(port, j)) * env.mech_occupancy(j);
    return n;
}

/// Single-sided PSD (W/Hz) at the analyzer behind the port-i amplifier chain.
inline std::vector<double> output_noise_psd(const ScatteringResult& sweep,
                                            const DeviceModel& device,
                                            const ThermalEnvironment& env,
                                            const AmplifierChain& chain, int port) {
    chain.validate(device.num_cavities());
    if (env.cavity_occupancy.size() != device.num_cavities())
        throw std::invalid_argument("output_noise_psd: environment/device mismatch");
    std::vector<double> psd;
    psd.reserve(sweep.omega_grid.size());
    const double gain = std::pow(10.0, chain.gain_db(port) / 10.0);
    for (std::size_t k = 0; k < sweep.omega_grid.size(); ++k) {
        const double omega_abs = device.cavities[port].omega + sweep.omega_grid[k];
        const double n_excess =
            excess_output_noise(sweep.s_matrices[k], sweep.mech_transfer[k], env, port);
        psd.push_back(hbar * omega_abs * gain * (1.0 + chain.added_quanta(port) + n_excess));
    }
    return psd;
}

/// Amplifier added quanta from a pumps-off PSD measurement:
/// n_amp = PSD / (hbar omega 10^{Gain/10}) - 1.
inline double infer_amp_noise(double measured_psd, double omega_abs, double gain_db) {
    if (!(omega_abs > 0.0)) throw std::domain_error("infer_amp_noise: omega must be positive");
    const double n = measured_psd / (hbar * omega_abs * std::pow(10.0, gain_db / 10.0)) - 1.0;
    if (n < -1e-6)
        throw numerical_error("infer_amp_noise: negative added quanta; gain calibration off");
    return std::max(n, 0.0);
}

/// Input-referred added noise on conversion path j -> i over the sweep grid.
inline std::vector<double> added_noise_per_path(const ScatteringResult& sweep,
                                                const ThermalEnvironment& env, int to_port,
                                                int from_port) {
    std::vector<double> n_add;
    n_add.reserve(sweep.omega_grid.size());
    for (std::size_t k = 0; k < sweep.omega_grid.size(); ++k) {
        const double transmission = std::norm(sweep.s_matrices[k](to_port, from_port));
        if (transmission < 1e-12)
            throw numerical_error("added_noise_per_path: |S_ij| below 1e-6, "
                                  "referred noise overflows");
        n_add.push_back(
            excess_output_noise(sweep.s_matrices[k], sweep.mech_transfer[k], env, to_port) /
            transmission);
    }
    return n_add;
}

struct NoiseBudget {
    std::vector<double> omega_grid;                  // rad/s
    std::vector<std::vector<double>> psd_per_port;   // [port][grid]
    std::vector<std::vector<double>> n_add_per_path; // [path][grid]
    std::vector<std::pair<int, int>> paths;          // (to, from), 0-based
};

inline NoiseBudget noise_budget(const ScatteringResult& sweep, const DeviceModel& device,
                                const ThermalEnvironment& env, const AmplifierChain& chain) {
    NoiseBudget budget;
    budget.omega_grid = sweep.omega_grid;
    const int nc = device.num_cavities();
    for (int i = 0; i < nc; ++i)
        budget.psd_per_port.push_back(output_noise_psd(sweep, device, env, chain, i));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            if (i == j) continue;
            budget.paths.emplace_back(i, j);
            budget.n_add_per_path.push_back(added_noise_per_path(sweep, env, i, j));
        }
    return budget;
}

struct OccupancyFitTarget {
    int to_port = 0;    // 0-based
    int from_port = 0;  // 0-based
    double n_add = 0.0; // input-referred quanta at the fit frequency
};

struct OccupancyFit {
    ThermalEnvironment environment;
    double worst_relative_error = 0.0;
};

/// Calibration helper: adjust bath occupancies (two mechanical, one per
/// cavity line) so the added-noise pipeline reproduces measured per-path
/// values at one frequency point. The occupancies are free parameters of
/// the model; this is a fit, not a prediction.
inline OccupancyFit fit_bath_occupancies(const PortScattering& point,
                                         const std::vector<OccupancyFitTarget>& targets,
                                         const DeviceModel& device) {
    const int nc = device.num_cavities();
    const int dim = 2 + nc;

    auto environment_from = [&](const Eigen::VectorXd& u) {
        // Squared parameterization keeps occupancies nonnegative.
        Eigen::VectorXd cav(nc);
        for (int i = 0; i < nc; ++i) cav(i) = u(2 + i) * u(2 + i);
        return ThermalEnvironment{cav, Eigen::Vector2d{u(0) * u(0), u(1) * u(1)}};
    };
    auto predicted = [&](const ThermalEnvironment& env, const OccupancyFitTarget& t) {
        return excess_output_noise(point.s, point.mech_transfer, env, t.to_port) /
               std::norm(point.s(t.to_port, t.from_port));
    };

    auto objective = [&](const Eigen::VectorXd& u) {
        const ThermalEnvironment env = environment_from(u);
        double sum = 0.0;
        for (const auto& t : targets) {
            const double rel = predicted(env, t) / t.n_add - 1.0;
            sum += rel * rel;
        }
        return sum;
    };

    Eigen::VectorXd start(dim);
    start(0) = start(1) = 7.0;  // ~50 phonons
    for (int i = 0; i < nc; ++i) start(2 + i) = 0.3;
    Eigen::VectorXd spread = Eigen::VectorXd::Constant(dim, 2.0);

    const SimplexResult best = multi_start_nelder_mead(objective, start, spread, 8);
    OccupancyFit fit;
    fit.environment = environment_from(best.x);
    for (const auto& t : targets)
        fit.worst_relative_error = std::max(
            fit.worst_relative_error, std::abs(predicted(fit.environment, t) / t.n_add - 1.0));
    return fit;
}

}  // namespace cmt
