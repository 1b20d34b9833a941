#pragma once

// Linearized, frame-rotated model: resonant couplings G(i,j), off-resonant
// couplings F(i,j), and the mechanical detunings/damping rates renormalized
// by the off-resonant drive tones.
//
// Every drive addressing mechanical mode j sits at detuning
// Delta(i,j) = omega_m,j + delta0,j below nothing -- i.e. on the lower
// motional sideband shifted by the shared delta0,j -- so a pump is fully
// specified by its intracavity photon number and phase.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cmt/device.hpp"
#include "cmt/errors.hpp"

namespace cmt {

using complexd = std::complex<double>;

struct PumpConfiguration {
    Eigen::MatrixXd photon_number;       // n(i,j) >= 0, (cavities x modes)
    Eigen::MatrixXd phase;               // phi(i,j), rad
    Eigen::Vector2d sideband_detuning{0.0, 0.0};  // delta0_j (rad/s), per mode

    static PumpConfiguration off(int num_cavities, int num_modes) {
        PumpConfiguration p;
        p.photon_number = Eigen::MatrixXd::Zero(num_cavities, num_modes);
        p.phase = Eigen::MatrixXd::Zero(num_cavities, num_modes);
        return p;
    }

    void validate(const DeviceModel& device) const {
        const auto nc = device.num_cavities();
        const auto nm = device.num_mechanics();
        if (photon_number.rows() != nc || photon_number.cols() != nm ||
            phase.rows() != nc || phase.cols() != nm)
            throw config_error("pump arrays must be (num cavities) x (num mechanical modes)");
        if (photon_number.minCoeff() < 0.0)
            throw config_error("pump photon numbers must be nonnegative");
        if (nm != 2)
            throw config_error("the two-mechanical-mode model requires exactly two modes");
    }
};

struct EffectiveModel {
    Eigen::MatrixXcd g_resonant;     // G(i,j), rad/s
    Eigen::MatrixXcd f_offresonant;  // F(i,j), rad/s
    Eigen::Vector2d delta_eff{0.0, 0.0};  // effective mechanical detunings (rad/s)
    Eigen::Vector2d gamma_eff{0.0, 0.0};  // effective mechanical damping (rad/s)
    double delta_omega_m = 0.0;           // frame splitting (rad/s)

    int num_cavities() const { return static_cast<int>(g_resonant.rows()); }
};

struct MechanicsRenormalization {
    Eigen::Vector2d delta_eff;
    Eigen::Vector2d gamma_eff;
};

/// Closed-form off-resonant corrections:
///   delta_1 = delta0_1 + dwm * sum_i 4|F_i1|^2 / (4 dwm^2 + kappa_i^2)
///   delta_2 = delta0_2 - dwm * sum_i 4|F_i2|^2 / (4 dwm^2 + kappa_i^2)
///   Gamma_j = gamma_j  + sum_i 4 kappa_i |F_ij|^2 / (4 dwm^2 + kappa_i^2)
inline MechanicsRenormalization renormalize_mechanics(const Eigen::MatrixXcd& f_offresonant,
                                                      const Eigen::VectorXd& kappas,
                                                      const Eigen::Vector2d& gamma_m,
                                                      const Eigen::Vector2d& delta0,
                                                      double delta_omega_m) {
    if (kappas.minCoeff() <= 0.0)
        throw std::domain_error("renormalize_mechanics: kappas must be positive");
    if (delta_omega_m == 0.0)
        throw std::domain_error("renormalize_mechanics: delta_omega_m must be nonzero");

    MechanicsRenormalization out;
    for (int j = 0; j < 2; ++j) {
        double shift_sum = 0.0;
        double damp_sum = 0.0;
        for (Eigen::Index i = 0; i < kappas.size(); ++i) {
            const double f2 = std::norm(f_offresonant(i, j));
            const double denom = 4.0 * delta_omega_m * delta_omega_m + kappas(i) * kappas(i);
            shift_sum += 4.0 * f2 / denom;
            damp_sum += 4.0 * kappas(i) * f2 / denom;
        }
        const double sign = (j == 0) ? +1.0 : -1.0;  // modes shift in opposite directions
        out.delta_eff(j) = delta0(j) + sign * delta_omega_m * shift_sum;
        out.gamma_eff(j) = gamma_m(j) + damp_sum;
    }
    return out;
}

/// Build the linearized model from device parameters and a pump setting.
///
/// G(i,j) = g0(i,j) sqrt(n(i,j)) e^{-i phi(i,j)}.  Each tone also drives the
/// *other* mechanical mode off-resonantly: F(i,1) takes the amplitude and
/// phase of drive (i,2) and vice versa.
inline EffectiveModel build_effective(const DeviceModel& device,
                                      const PumpConfiguration& pumps) {
    pumps.validate(device);
    const int nc = device.num_cavities();

    EffectiveModel eff;
    eff.g_resonant.resize(nc, 2);
    eff.f_offresonant.resize(nc, 2);

    const double dwm = device.mechanics[1].omega_m - device.mechanics[0].omega_m +
                       pumps.sideband_detuning(1) - pumps.sideband_detuning(0);
    if (!(dwm > 0.0))
        throw model_error("build_effective: rotating frames degenerate; "
                          "omega_m2 + delta0_2 must exceed omega_m1 + delta0_1");
    eff.delta_omega_m = dwm;

    for (int i = 0; i < nc; ++i) {
        for (int j = 0; j < 2; ++j) {
            const int other = 1 - j;
            const complexd res_phase = std::polar(1.0, -pumps.phase(i, j));
            const complexd off_phase = std::polar(1.0, -pumps.phase(i, other));
            eff.g_resonant(i, j) =
                device.couplings(i, j) * std::sqrt(pumps.photon_number(i, j)) * res_phase;
            eff.f_offresonant(i, j) =
                device.couplings(i, j) * std::sqrt(pumps.photon_number(i, other)) * off_phase;
        }
    }

    Eigen::VectorXd kappas(nc);
    for (int i = 0; i < nc; ++i) kappas(i) = device.cavities[i].kappa();
    const Eigen::Vector2d gammas{device.mechanics[0].gamma_m, device.mechanics[1].gamma_m};

    const auto renorm = renormalize_mechanics(eff.f_offresonant, kappas, gammas,
                                              pumps.sideband_detuning, dwm);
    eff.delta_eff = renorm.delta_eff;
    eff.gamma_eff = renorm.gamma_eff;
    return eff;
}

/// Resonant-only variant: the off-resonant sector is dropped entirely
/// (F = 0, delta_eff = delta0, gamma_eff = gamma_m). This is the model
/// behind the closed-form two-port expressions; pump searches run on it
/// and treat measured effective parameters as given.
inline EffectiveModel build_effective_rwa(const DeviceModel& device,
                                          const PumpConfiguration& pumps) {
    EffectiveModel eff = build_effective(device, pumps);
    eff.f_offresonant.setZero();
    eff.delta_eff = pumps.sideband_detuning;
    eff.gamma_eff =
        Eigen::Vector2d{device.mechanics[0].gamma_m, device.mechanics[1].gamma_m};
    return eff;
}

struct RwaValidity {
    double coupling_over_splitting = 0.0;  // max |F| / |delta_omega_m|
    double kappa_over_mech = 0.0;          // max kappa_i / omega_m,j over driven pairs
    double kappa_over_splitting = 0.0;     // max kappa_i / |delta_omega_m| over driven cavities
    enum class Flag { pass, warn, fail } flag = Flag::pass;

    std::string flag_name() const {
        switch (flag) {
            case Flag::warn: return "warn";
            case Flag::fail: return "fail";
            default: return "pass";
        }
    }
};

/// Weak-coupling / frame-separation diagnostics. Ratios are taken over
/// pump-driven pairs only (an undriven cavity contributes no off-resonant
/// term, so its linewidth is irrelevant). The flag thresholds compare the
/// half linewidth kappa/2 against the scales -- that is the width actually
/// entering the elimination denominators 4 dwm^2 + kappa^2 -- at 0.1 (warn)
/// and 1.0 (fail).
inline RwaValidity rwa_validity(const EffectiveModel& eff, const DeviceModel& device) {
    RwaValidity report;
    const double dwm = std::abs(eff.delta_omega_m);
    double worst = 0.0;
    for (int i = 0; i < device.num_cavities(); ++i) {
        const double kappa = device.cavities[i].kappa();
        bool cavity_driven = false;
        for (int j = 0; j < 2; ++j) {
            const double f = std::abs(eff.f_offresonant(i, j));
            const double g = std::abs(eff.g_resonant(i, j));
            if (f == 0.0 && g == 0.0) continue;
            cavity_driven = true;
            report.coupling_over_splitting =
                std::max(report.coupling_over_splitting, f / dwm);
            report.kappa_over_mech =
                std::max(report.kappa_over_mech, kappa / device.mechanics[j].omega_m);
        }
        if (cavity_driven) {
            report.kappa_over_splitting = std::max(report.kappa_over_splitting, kappa / dwm);
            worst = std::max(worst, 0.5 * kappa / dwm);
            worst = std::max(worst, 0.5 * kappa / device.mechanics[0].omega_m);
            worst = std::max(worst, 0.5 * kappa / device.mechanics[1].omega_m);
        }
    }
    worst = std::max(worst, report.coupling_over_splitting);

    if (worst >= 1.0)
        report.flag = RwaValidity::Flag::fail;
    else if (worst >= 0.1)
        report.flag = RwaValidity::Flag::warn;
    return report;
}

}  // namespace cmt
