#pragma once

// Frequency-domain solution of the reduced Langevin equations.
//
// The mechanical modes are eliminated through their susceptibilities,
// leaving an N x N cavity-sector system ("drift matrix"). Its resolvent
// against the external-coupling weights yields the port scattering matrix
//   S(omega) = T (M - i omega I)^{-1} T - I,   T = diag(sqrt(kappa_ext)),
// plus the transfer columns from the intrinsic mechanical noise inputs.
// The probe frequency omega is the detuning from cavity resonance in the
// rotating frame.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "cmt/device.hpp"
#include "cmt/effective.hpp"
#include "cmt/errors.hpp"

namespace cmt {

/// chi_j(omega) = 1 / (Gamma_j/2 - i (omega + delta_j)).
inline complexd mechanical_susceptibility(double omega, double delta_eff, double gamma_eff) {
    if (!(gamma_eff > 0.0))
        throw std::domain_error("mechanical_susceptibility: gamma must be positive");
    return 1.0 / complexd(gamma_eff / 2.0, -(omega + delta_eff));
}

struct DriftMatrix {
    Eigen::MatrixXcd entries;  // N x N, rad/s
    double omega = 0.0;        // probe frequency it was built at (rad/s)

    /// Largest and third singular values of (M - diag(kappa/2)); the
    /// coupling part is a sum over two mechanical dyads, so sigma_3
    /// must vanish up to roundoff.
    std::pair<double, double> coupling_rank_check(const DeviceModel& device) const {
        Eigen::MatrixXcd coupling = entries;
        for (int i = 0; i < device.num_cavities(); ++i)
            coupling(i, i) -= device.cavities[i].kappa() / 2.0;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coupling);
        const auto& sv = svd.singularValues();
        const double third = sv.size() > 2 ? sv(2) : 0.0;
        return {sv(0), third};
    }
};

/// M_kk = kappa_k/2 + sum_j chi_j |G_kj|^2,  M_kl = sum_j chi_j G_kj conj(G_lj).
inline DriftMatrix assemble_drift_matrix(const EffectiveModel& eff, const DeviceModel& device,
                                         double omega) {
    const int nc = device.num_cavities();
    DriftMatrix drift;
    drift.omega = omega;
    drift.entries = Eigen::MatrixXcd::Zero(nc, nc);

    complexd chi[2];
    for (int j = 0; j < 2; ++j)
        chi[j] = mechanical_susceptibility(omega, eff.delta_eff(j), eff.gamma_eff(j));

    for (int k = 0; k < nc; ++k) {
        drift.entries(k, k) = device.cavities[k].kappa() / 2.0;
        for (int l = 0; l < nc; ++l)
            for (int j = 0; j < 2; ++j)
                drift.entries(k, l) +=
                    chi[j] * eff.g_resonant(k, j) * std::conj(eff.g_resonant(l, j));
    }
    return drift;
}

struct PortScattering {
    Eigen::MatrixXcd s;              // N x N port scattering matrix
    Eigen::MatrixXcd mech_transfer;  // N x 2: port output per mechanical noise input
    Eigen::MatrixXcd mech_response;  // 2 x N: mechanical amplitude per unit port input
    double condition_number = 0.0;
};

/// Full input-output solve at one probe frequency.
inline PortScattering scattering_matrix(const EffectiveModel& eff, const DeviceModel& device,
                                        double omega) {
    const int nc = device.num_cavities();
    const DriftMatrix drift = assemble_drift_matrix(eff, device, omega);

    Eigen::MatrixXcd system = drift.entries;
    for (int i = 0; i < nc; ++i) system(i, i) -= complexd(0.0, omega);

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
    const double det_mag = std::abs(lu.determinant());
    if (!(det_mag > 0.0) || !std::isfinite(det_mag)) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(system);
        const double cond = svd.singularValues()(0) / svd.singularValues()(nc - 1);
        throw numerical_error("scattering_matrix: singular system at omega = " +
                              std::to_string(omega) + " rad/s, condition number " +
                              std::to_string(cond));
    }
    const Eigen::MatrixXcd resolvent = lu.solve(Eigen::MatrixXcd::Identity(nc, nc));

    Eigen::VectorXd t_ext(nc);
    for (int i = 0; i < nc; ++i) t_ext(i) = std::sqrt(device.cavities[i].kappa_ext);

    PortScattering out;
    out.s = t_ext.asDiagonal() * resolvent * t_ext.asDiagonal();
    out.s -= Eigen::MatrixXcd::Identity(nc, nc);

    // Mechanical noise enters the cavity equations as -i G_kj chi_j sqrt(gamma_j) b_in,j.
    Eigen::MatrixXcd mech_in(nc, 2);
    complexd chi[2];
    for (int j = 0; j < 2; ++j) {
        chi[j] = mechanical_susceptibility(omega, eff.delta_eff(j), eff.gamma_eff(j));
        const double root_gamma = std::sqrt(device.mechanics[j].gamma_m);
        for (int k = 0; k < nc; ++k)
            mech_in(k, j) = complexd(0.0, -1.0) * eff.g_resonant(k, j) * chi[j] * root_gamma;
    }
    out.mech_transfer = t_ext.asDiagonal() * resolvent * mech_in;

    // Mechanical amplitude response b_j per unit coherent input at port i:
    // b_j = chi_j (-i) sum_k conj(G_kj) a_k with a = resolvent * T a_in.
    out.mech_response.resize(2, nc);
    const Eigen::MatrixXcd cavity_response = resolvent * t_ext.asDiagonal();
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < nc; ++i) {
            complexd acc = 0.0;
            for (int k = 0; k < nc; ++k)
                acc += std::conj(eff.g_resonant(k, j)) * cavity_response(k, i);
            out.mech_response(j, i) = complexd(0.0, -1.0) * chi[j] * acc;
        }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(system);
    out.condition_number = svd.singularValues()(0) / svd.singularValues()(nc - 1);
    return out;
}

/// Power absorbed by the mechanical modes per unit input power at `port`:
/// Gamma_j |b_j|^2 summed over modes (the full damped linewidth, of which
/// the intrinsic bath receives the gamma_j/Gamma_j share).
inline double mechanical_absorption(const PortScattering& ps, const EffectiveModel& eff,
                                    int port) {
    double total = 0.0;
    for (int j = 0; j < 2; ++j)
        total += eff.gamma_eff(j) * std::norm(ps.mech_response(j, port));
    return total;
}

struct ScatteringResult {
    std::vector<double> omega_grid;            // rad/s
    std::vector<Eigen::MatrixXcd> s_matrices;  // per grid point
    std::vector<Eigen::MatrixXcd> mech_transfer;
};

inline ScatteringResult spectrum_sweep(const EffectiveModel& eff, const DeviceModel& device,
                                       double omega_min, double omega_max, int n_points) {
    if (n_points < 2) throw std::invalid_argument("spectrum_sweep: need at least two points");
    if (!(omega_min < omega_max))
        throw std::invalid_argument("spectrum_sweep: omega_min must be below omega_max");

    ScatteringResult result;
    result.omega_grid.reserve(n_points);
    result.s_matrices.reserve(n_points);
    result.mech_transfer.reserve(n_points);
    const double step = (omega_max - omega_min) / (n_points - 1);
    for (int k = 0; k < n_points; ++k) {
        const double omega = omega_min + k * step;
        auto ps = scattering_matrix(eff, device, omega);
        result.omega_grid.push_back(omega);
        result.s_matrices.push_back(std::move(ps.s));
        result.mech_transfer.push_back(std::move(ps.mech_transfer));
    }
    return result;
}

struct PhaseSweepResult {
    std::vector<double> phi_grid;    // rad
    std::vector<double> omega_grid;  // rad/s
    // Row-major over (phi, omega): entry(p * omega_grid.size() + w).
    std::vector<Eigen::MatrixXcd> s_matrices;
};

/// Sweep one pump phase: for each phi the effective couplings are rebuilt
/// with phase(i,j) = phi, then the omega grid is evaluated.
inline PhaseSweepResult phase_sweep(const DeviceModel& device, const PumpConfiguration& pumps,
                                    int cavity_index, int mode_index,
                                    const std::vector<double>& phi_grid,
                                    const std::vector<double>& omega_grid) {
    if (cavity_index < 0 || cavity_index >= device.num_cavities() || mode_index < 0 ||
        mode_index >= device.num_mechanics())
        throw std::invalid_argument("phase_sweep: phase index out of range");

    PhaseSweepResult result;
    result.phi_grid = phi_grid;
    result.omega_grid = omega_grid;
    result.s_matrices.reserve(phi_grid.size() * omega_grid.size());
    for (const double phi : phi_grid) {
        PumpConfiguration varied = pumps;
        varied.phase(cavity_index, mode_index) = phi;
        const EffectiveModel eff = build_effective(device, varied);
        for (const double omega : omega_grid)
            result.s_matrices.push_back(scattering_matrix(eff, device, omega).s);
    }
    return result;
}

/// Largest singular value of S; passivity demands <= 1 for red-detuned pumps.
inline double max_singular_value(const Eigen::MatrixXcd& s) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
    return svd.singularValues()(0);
}

}  // namespace cmt
