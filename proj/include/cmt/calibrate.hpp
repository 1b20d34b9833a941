#pragma once

// Working-point construction: matched two-port isolator points, sideband
// detunings realizing prescribed effective mechanical detunings, and
// reconstruction of pump photon numbers from measured effective
// linewidths/shifts.

#include <array>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "cmt/analytic.hpp"
#include "cmt/device.hpp"
#include "cmt/effective.hpp"
#include "cmt/scattering.hpp"

namespace cmt {

/// Build an effective model directly from target cooperativities (defined
/// against the supplied gamma_eff), phases, and effective mechanical
/// parameters, with the off-resonant sector switched off. Used for pure
/// two-port working points where the renormalization is treated as given.
inline EffectiveModel make_direct_effective(const DeviceModel& device,
                                            const Eigen::MatrixXd& coop,
                                            const Eigen::MatrixXd& phase,
                                            const Eigen::Vector2d& delta_eff,
                                            const Eigen::Vector2d& gamma_eff) {
    const int nc = device.num_cavities();
    if (coop.rows() != nc || coop.cols() != 2 || phase.rows() != nc || phase.cols() != 2)
        throw std::invalid_argument("make_direct_effective: array shapes must be (cavities x 2)");
    EffectiveModel eff;
    eff.g_resonant.resize(nc, 2);
    eff.f_offresonant = Eigen::MatrixXcd::Zero(nc, 2);
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < 2; ++j) {
            const double mag =
                std::sqrt(coop(i, j) * device.cavities[i].kappa() * gamma_eff(j)) / 2.0;
            eff.g_resonant(i, j) = std::polar(mag, -phase(i, j));
        }
    eff.delta_eff = delta_eff;
    eff.gamma_eff = gamma_eff;
    eff.delta_omega_m = device.mechanics[1].omega_m - device.mechanics[0].omega_m;
    return eff;
}

/// Matched two-port isolator point: equal cooperativities C fixed by the
/// insertion-loss target through |S21|^2 = eta1 eta2 (1 - 1/(2C)), and
/// per-mode detunings delta_j = +-x Gamma_j/2 with the common ratio
/// x = sqrt(2C - 1) from the peak condition 2C = 1 + x^2. Proportional
/// detunings keep Sigma_2 = conj(Sigma_1), so perfect isolation survives
/// unequal mechanical linewidths.
struct TwoPortMatchedPoint {
    double coop = 0.0;          // common cooperativity
    double x = 0.0;             // 2 delta_j / Gamma_j, common to both modes
    Eigen::Vector2d delta_eff;  // rad/s
    double phi_isolate = 0.0;   // pump phase (2,2) cancelling S12 (rad)
    EffectiveModel effective;   // F = 0 model at the working point
};

inline TwoPortMatchedPoint matched_two_port_point(const DeviceModel& device,
                                                  double insertion_loss_db_target,
                                                  std::optional<Eigen::Vector2d> gamma_eff_opt =
                                                      std::nullopt) {
    if (device.num_cavities() != 2)
        throw std::invalid_argument("matched_two_port_point: needs a two-cavity device");
    const double eta12 = device.cavities[0].eta() * device.cavities[1].eta();
    const double target_power = std::pow(10.0, -insertion_loss_db_target / 10.0);
    if (!(target_power < eta12))
        throw model_error("matched_two_port_point: insertion loss below the eta1*eta2 floor");

    TwoPortMatchedPoint point;
    point.coop = 0.5 / (1.0 - target_power / eta12);
    point.x = std::sqrt(2.0 * point.coop - 1.0);

    const Eigen::Vector2d gamma_eff = gamma_eff_opt.value_or(
        Eigen::Vector2d{device.mechanics[0].gamma_m, device.mechanics[1].gamma_m});
    point.delta_eff(0) = +point.x * gamma_eff(0) / 2.0;
    point.delta_eff(1) = -point.x * gamma_eff(1) / 2.0;

    // e^{i phi} = -Sigma_2/Sigma_1 = -(1 + ix)/(1 - ix).
    point.phi_isolate = 2.0 * std::atan(point.x) - pi;

    const Eigen::MatrixXd coop = Eigen::MatrixXd::Constant(2, 2, point.coop);
    Eigen::MatrixXd phase = Eigen::MatrixXd::Zero(2, 2);
    phase(1, 1) = point.phi_isolate;
    point.effective = make_direct_effective(device, coop, phase, point.delta_eff, gamma_eff);
    return point;
}

/// Solve for sideband detunings delta0 such that the *effective* detunings
/// land on the requested values; fixed-point iteration since the
/// off-resonant shift depends weakly on delta0 through delta_omega_m.
inline Eigen::Vector2d solve_sideband_detunings(const DeviceModel& device,
                                                const PumpConfiguration& pumps,
                                                const Eigen::Vector2d& delta_eff_target,
                                                int max_iter = 60, double tol = 1e-12) {
    PumpConfiguration trial = pumps;
    for (int iter = 0; iter < max_iter; ++iter) {
        const EffectiveModel eff = build_effective(device, trial);
        const Eigen::Vector2d shift = eff.delta_eff - trial.sideband_detuning;
        const Eigen::Vector2d next = delta_eff_target - shift;
        const double change = (next - trial.sideband_detuning).norm();
        trial.sideband_detuning = next;
        const double scale = std::max(1.0, delta_eff_target.norm());
        if (change < tol * scale) return trial.sideband_detuning;
    }
    throw numerical_error("solve_sideband_detunings: fixed point did not converge");
}

/// Pump photon numbers reconstructed from measured effective mechanical
/// parameters (Gamma_m,j and the off-resonant frequency-shift magnitudes).
///
/// For each mode j the two targets determine the per-cavity weights
/// X_ij = 4|F_ij|^2/(4 dwm^2 + kappa_i^2) through
///   Gamma_j - gamma_j = sum_i kappa_i X_ij,   |shift_j| = dwm sum_i X_ij.
/// With two cavities that is a 2x2 linear solve; targets whose ratio
/// (Gamma_j - gamma_j)/|shift_j| falls outside [kappa_min, kappa_max]/dwm
/// admit no nonnegative solution, in which case the mode is fitted in
/// least squares with its cavity split locked to the feasible mode's.
struct OffresonantFit {
    PumpConfiguration pumps;       // delta0 = 0
    Eigen::Vector2d gamma_eff;     // predicted effective linewidths (rad/s)
    Eigen::Vector2d freq_shift;    // predicted mechanical frequency shifts (rad/s)
    bool exact = true;             // false if any mode needed the least-squares fallback
};

inline OffresonantFit fit_offresonant_targets(const DeviceModel& device,
                                              const Eigen::Vector2d& gamma_targets,
                                              const Eigen::Vector2d& freq_shift_targets) {
    if (device.num_cavities() != 2)
        throw std::invalid_argument("fit_offresonant_targets: needs a two-cavity device");
    const double dwm = device.mechanics[1].omega_m - device.mechanics[0].omega_m;
    if (!(dwm > 0.0)) throw model_error("fit_offresonant_targets: modes must be ascending");

    const double kappa1 = device.cavities[0].kappa();
    const double kappa2 = device.cavities[1].kappa();

    Eigen::Matrix2d weights;  // X(i,j)
    std::array<bool, 2> feasible{true, true};
    std::array<double, 2> excess{}, shift_mag{};
    for (int j = 0; j < 2; ++j) {
        excess[j] = gamma_targets(j) - device.mechanics[j].gamma_m;
        shift_mag[j] = std::abs(freq_shift_targets(j));
        if (!(excess[j] > 0.0) || !(shift_mag[j] > 0.0))
            throw std::invalid_argument("fit_offresonant_targets: targets must exceed the "
                                        "intrinsic values");
        // kappa1 X1 + kappa2 X2 = excess, dwm (X1 + X2) = shift.
        const double total = shift_mag[j] / dwm;
        double x1, x2;
        if (std::abs(kappa1 - kappa2) < 1e-9 * std::max(kappa1, kappa2)) {
            x1 = x2 = total / 2.0;  // rank-1 case: equal split, fitted below if inconsistent
            if (std::abs(kappa1 * total - excess[j]) > 1e-6 * excess[j]) feasible[j] = false;
        } else {
            x1 = (excess[j] - kappa2 * total) / (kappa1 - kappa2);
            x2 = total - x1;
        }
        weights(0, j) = x1;
        weights(1, j) = x2;
        if (!(x1 >= 0.0) || !(x2 >= 0.0)) feasible[j] = false;
    }

    bool exact = feasible[0] && feasible[1];
    if (!exact) {
        const int bad = feasible[0] ? 1 : 0;
        const int good = 1 - bad;
        if (!feasible[good])
            throw model_error("fit_offresonant_targets: both modes infeasible for this device");
        // Lock the cavity split to the feasible mode's ratio and fit the
        // overall strength in relative least squares.
        const double ratio = weights(0, good) / weights(1, good);
        const double a = kappa1 * ratio + kappa2;   // dGamma per unit X2
        const double b = dwm * (ratio + 1.0);       // shift per unit X2
        const double ge = excess[bad];
        const double sh = shift_mag[bad];
        const double scale = (a * ge / (ge * ge) + b / sh) /
                             (a * a / (ge * ge) + b * b / (sh * sh));
        weights(0, bad) = ratio * scale;
        weights(1, bad) = scale;
    }

    // X(i,j) -> F(i,j) -> photon number of the cross drive (i, other(j)).
    OffresonantFit fit;
    fit.exact = exact;
    fit.pumps = PumpConfiguration::off(2, 2);
    for (int j = 0; j < 2; ++j) {
        const int other = 1 - j;
        for (int i = 0; i < 2; ++i) {
            const double denom = 4.0 * dwm * dwm + device.cavities[i].kappa() *
                                                       device.cavities[i].kappa();
            const double f2 = weights(i, j) * denom / 4.0;
            const double g0 = device.couplings(i, j);
            if (!(g0 > 0.0))
                throw model_error("fit_offresonant_targets: zero g0 on a required pump");
            fit.pumps.photon_number(i, other) = f2 / (g0 * g0);
        }
    }

    const EffectiveModel eff = build_effective(device, fit.pumps);
    fit.gamma_eff = eff.gamma_eff;
    fit.freq_shift = -eff.delta_eff;  // pole of chi_j sits at omega = -delta_j
    return fit;
}

/// Calibrate a deep-isolation working point of the *full* model (off-
/// resonant renormalization active). Starting from base photon numbers,
/// iterates three coupled adjustments until self-consistent:
///   - sideband detunings place the effective detunings proportionally,
///     delta_j = (-1)^(j+1) x Gamma_j / 2, so |Sigma_1| = |Sigma_2|;
///   - the mode-1 pump pair is rescaled to balance the effective
///     cooperativity products (modulus condition);
///   - the (2,2) pump phase lands on the exact arg condition M12 = 0.
struct FullIsolatorPoint {
    PumpConfiguration pumps;
    double modulus_mismatch = 0.0;  // | |G11 G21| chi1 / (|G12 G22| chi2) | - 1 at omega = 0
};

inline FullIsolatorPoint calibrate_full_isolator(const DeviceModel& device,
                                                 const PumpConfiguration& base,
                                                 double detuning_ratio, int max_iter = 200,
                                                 double tol = 1e-10) {
    if (device.num_cavities() != 2)
        throw std::invalid_argument("calibrate_full_isolator: needs a two-cavity device");

    // Mismatch ratio at a given log-scale of the two mode-1 photon numbers.
    // |ratio| grows monotonically with the scale (directly through
    // |G11 G21| and again through the mode-2 heating), so a bisection in
    // log-scale is safe.
    auto evaluate = [&](double log_scale) {
        PumpConfiguration pumps = base;
        pumps.photon_number(0, 0) *= std::exp(log_scale);
        pumps.photon_number(1, 0) *= std::exp(log_scale);
        for (int pass = 0; pass < 3; ++pass) {
            const EffectiveModel eff = build_effective(device, pumps);
            const Eigen::Vector2d delta_target{+detuning_ratio * eff.gamma_eff(0) / 2.0,
                                               -detuning_ratio * eff.gamma_eff(1) / 2.0};
            pumps.sideband_detuning = solve_sideband_detunings(device, pumps, delta_target);
        }
        const EffectiveModel eff = build_effective(device, pumps);
        const complexd chi1 =
            mechanical_susceptibility(0.0, eff.delta_eff(0), eff.gamma_eff(0));
        const complexd chi2 =
            mechanical_susceptibility(0.0, eff.delta_eff(1), eff.gamma_eff(1));
        const complexd ratio = chi1 * std::abs(eff.g_resonant(0, 0) * eff.g_resonant(1, 0)) /
                               (chi2 * std::abs(eff.g_resonant(0, 1) * eff.g_resonant(1, 1)));
        pumps.phase(1, 1) = std::arg(-ratio);
        return std::make_pair(pumps, ratio);
    };

    // Upper bracket stays modest: far stronger mode-1 pumps heat mode 2
    // past the frame splitting and leave the model's validity region.
    double lo = -8.0, hi = 3.0;
    auto [lo_pumps, lo_ratio] = evaluate(lo);
    auto [hi_pumps, hi_ratio] = evaluate(hi);
    if (std::abs(lo_ratio) > 1.0 || std::abs(hi_ratio) < 1.0)
        throw numerical_error("calibrate_full_isolator: matching condition not bracketed");

    FullIsolatorPoint point;
    for (int iter = 0; iter < max_iter; ++iter) {
        const double mid = 0.5 * (lo + hi);
        auto [pumps, ratio] = evaluate(mid);
        point.pumps = pumps;
        point.modulus_mismatch = std::abs(ratio) - 1.0;
        if (std::abs(point.modulus_mismatch) < tol) return point;
        (std::abs(ratio) > 1.0 ? hi : lo) = mid;
    }
    throw numerical_error("calibrate_full_isolator: matching bisection did not converge");
}

}  // namespace cmt
