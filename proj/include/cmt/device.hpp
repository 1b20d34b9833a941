#pragma once

// Static physical description of the electromechanical device: microwave
// cavities, mechanical modes, vacuum coupling rates and DC tuning curves,
// plus the circuit-level calibration helpers (LC frequency, participation
// ratio, vacuum coupling, intracavity photon number, cooperativity,
// voltage tuning fit).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cmt/errors.hpp"
#include "cmt/units.hpp"

namespace cmt {

struct CavityMode {
    int index = 0;              // 1-based port/cavity label
    double omega = 0.0;         // resonance (rad/s)
    double kappa_int = 0.0;     // internal loss rate (rad/s)
    double kappa_ext = 0.0;     // external coupling rate (rad/s)
    std::optional<double> inductance;            // H
    std::optional<double> stray_capacitance;     // F
    std::optional<double> motional_capacitance;  // F

    double kappa() const { return kappa_int + kappa_ext; }
    double eta() const { return kappa_ext / kappa(); }
};

struct MechanicalMode {
    int index = 0;          // 1-based mode label
    double omega_m = 0.0;   // resonance (rad/s)
    double gamma_m = 0.0;   // intrinsic damping (rad/s)
    std::optional<double> effective_mass;  // kg
    std::optional<double> x_zpf;           // m
};

/// Vacuum electromechanical rates g0(cavity, mode), all nonnegative;
/// drive phases live on the pumps, not here.
struct CouplingMatrix {
    Eigen::MatrixXd g0;  // (num cavities) x (num mechanical modes), rad/s

    double operator()(int cavity, int mode) const { return g0(cavity, mode); }
};

/// DC-voltage frequency tuning of one cavity: shift = sign * (a1 V^2 + a2 V^4).
struct TuningCurve {
    double alpha1 = 0.0;  // rad/s per V^2
    double alpha2 = 0.0;  // rad/s per V^4
    int sign = +1;        // +1 tunes up, -1 tunes down

    double shift(double volts) const {
        const double v2 = volts * volts;
        return sign * (alpha1 * v2 + alpha2 * v2 * v2);
    }
};

struct DeviceModel {
    std::vector<CavityMode> cavities;
    std::vector<MechanicalMode> mechanics;
    CouplingMatrix couplings;
    std::vector<std::optional<TuningCurve>> tuning;  // per cavity, may be empty

    int num_cavities() const { return static_cast<int>(cavities.size()); }
    int num_mechanics() const { return static_cast<int>(mechanics.size()); }

    /// Hard invariants throw; soft ones are returned as warnings.
    std::vector<std::string> validate() const;
};

inline std::vector<std::string> DeviceModel::validate() const {
    std::vector<std::string> warnings;
    if (cavities.empty() || mechanics.empty())
        throw config_error("device needs at least one cavity and one mechanical mode");
    if (couplings.g0.rows() != num_cavities() || couplings.g0.cols() != num_mechanics())
        throw config_error("g0 matrix must be (num cavities) x (num mechanical modes)");
    if (!tuning.empty() && static_cast<int>(tuning.size()) != num_cavities())
        throw config_error("tuning list must have one entry per cavity");

    for (const auto& c : cavities) {
        if (!(c.omega > 0.0)) throw config_error("cavity omega must be positive");
        if (c.kappa_int < 0.0) throw config_error("cavity kappa_int must be nonnegative");
        if (!(c.kappa_ext > 0.0)) throw config_error("cavity kappa_ext must be positive");
    }
    for (std::size_t i = 0; i < cavities.size(); ++i)
        for (std::size_t k = i + 1; k < cavities.size(); ++k)
            if (cavities[i].omega == cavities[k].omega)
                throw config_error("cavity frequencies must be pairwise distinct");

    for (const auto& m : mechanics) {
        if (!(m.omega_m > 0.0)) throw config_error("mechanical omega_m must be positive");
        if (!(m.gamma_m > 0.0)) throw config_error("mechanical gamma_m must be positive");
        if (m.omega_m / m.gamma_m < 1e3)
            warnings.push_back("mechanical mode " + std::to_string(m.index) +
                               ": omega_m/gamma_m < 1e3, sideband resolution marginal");
    }
    if (couplings.g0.minCoeff() < 0.0)
        throw config_error("g0 entries must be nonnegative");
    return warnings;
}

/// LC resonance 1/sqrt(L C).
inline double lc_frequency(double inductance, double capacitance) {
    if (!(inductance > 0.0) || !(capacitance > 0.0))
        throw std::domain_error("lc_frequency: inductance and capacitance must be positive");
    return 1.0 / std::sqrt(inductance * capacitance);
}

/// Fraction of the circuit capacitance that is mechanically compliant,
/// zeta = Cm / (Cm + Cs).
inline double participation_ratio(double c_motional, double c_stray) {
    if (!(c_motional > 0.0))
        throw std::domain_error("participation_ratio: motional capacitance must be positive");
    if (c_stray < 0.0)
        throw std::domain_error("participation_ratio: stray capacitance must be nonnegative");
    return c_motional / (c_motional + c_stray);
}

/// Vacuum electromechanical rate |g0| = x_zpf * zeta * omega/(2 Cm) * dC/dv.
/// Magnitude only: direction conventions are carried by pump phases.
inline double vacuum_coupling(double x_zpf, double zeta, double omega, double c_motional,
                              double dc_dv) {
    if (!(c_motional > 0.0))
        throw std::domain_error("vacuum_coupling: motional capacitance must be positive");
    if (!(x_zpf > 0.0) || !(zeta > 0.0) || !(omega > 0.0))
        throw std::domain_error("vacuum_coupling: x_zpf, zeta and omega must be positive");
    return std::abs(x_zpf * zeta * omega / (2.0 * c_motional) * dc_dv);
}

/// Intracavity photon number from a drive of amplitude E (rad/s) at
/// detuning Delta from the cavity: n = 4 E^2 / (kappa^2 + 4 Delta^2).
inline double photons_from_drive(double amplitude, double kappa, double detuning) {
    if (!(kappa > 0.0))
        throw std::domain_error("photons_from_drive: kappa must be positive");
    return 4.0 * amplitude * amplitude / (kappa * kappa + 4.0 * detuning * detuning);
}

/// C = 4 g0^2 n / (kappa gamma_m).
inline double cooperativity(double g0, double photons, double kappa, double gamma_m) {
    if (!(kappa > 0.0) || !(gamma_m > 0.0))
        throw std::domain_error("cooperativity: kappa and gamma_m must be positive");
    if (photons < 0.0)
        throw std::domain_error("cooperativity: photon number must be nonnegative");
    return 4.0 * g0 * g0 * photons / (kappa * gamma_m);
}

/// Photon number realizing a target cooperativity (inverse of the above).
inline double photons_for_cooperativity(double coop, double g0, double kappa, double gamma_m) {
    if (!(g0 > 0.0))
        throw std::domain_error("photons_for_cooperativity: g0 must be positive");
    return coop * kappa * gamma_m / (4.0 * g0 * g0);
}

struct TuningFit {
    double alpha1 = 0.0;        // rad/s per V^2
    double alpha2 = 0.0;        // rad/s per V^4
    double residual_norm = 0.0; // rad/s
};

/// Ordinary least squares for shift = a1 V^2 + a2 V^4 (no intercept:
/// the model vanishes at V = 0 by construction).
inline TuningFit voltage_tuning_fit(const std::vector<double>& volts,
                                    const std::vector<double>& shifts) {
    if (volts.size() != shifts.size())
        throw std::invalid_argument("voltage_tuning_fit: size mismatch");
    const auto n = static_cast<Eigen::Index>(volts.size());
    if (n < 2) throw std::invalid_argument("voltage_tuning_fit: need at least two points");

    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v2 = volts[i] * volts[i];
        design(i, 0) = v2;
        design(i, 1) = v2 * v2;
        rhs(i) = shifts[i];
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.rank() < 2)
        throw numerical_error("voltage_tuning_fit: rank-deficient design "
                              "(need at least two distinct |V| values)");
    const Eigen::Vector2d coeff = svd.solve(rhs);
    TuningFit fit;
    fit.alpha1 = coeff(0);
    fit.alpha2 = coeff(1);
    fit.residual_norm = (design * coeff - rhs).norm();
    return fit;
}

}  // namespace cmt
