#pragma once

// Closed-form two-port expressions: transmission ratio lambda, the
// isolating pump phase, forward transmission at the optimum, and the
// bidirectional-conversion formulas. These double as independent oracles
// for the scattering engine.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "cmt/errors.hpp"
#include "cmt/units.hpp"

namespace cmt {

using complexd = std::complex<double>;

/// Two-port working point: cooperativities C(i,j), control phase phi on
/// drive (2,2), common detuning delta (delta_1 = +delta, delta_2 = -delta),
/// mechanical linewidths and coupling ratios.
struct TwoPortWorkingPoint {
    double c11 = 0.0, c12 = 0.0, c21 = 0.0, c22 = 0.0;
    double phi = 0.0;      // rad
    double delta = 0.0;    // rad/s
    double gamma1 = 0.0;   // rad/s
    double gamma2 = 0.0;   // rad/s
    double eta1 = 1.0;
    double eta2 = 1.0;

    /// Sigma_m,j(omega) = 1 + 2i[(-1)^j delta - omega] / gamma_j.
    complexd sigma(int mode, double omega) const {
        const double gamma = (mode == 1) ? gamma1 : gamma2;
        const double sign = (mode == 1) ? -1.0 : +1.0;
        return complexd(1.0, 2.0 * (sign * delta - omega) / gamma);
    }
};

/// Ratio of backward to forward transmission, lambda = S12/S21.
inline complexd lambda_ratio(const TwoPortWorkingPoint& wp, double omega) {
    const complexd s1 = wp.sigma(1, omega);
    const complexd s2 = wp.sigma(2, omega);
    const double a = std::sqrt(wp.c11 * wp.c21);
    const double b = std::sqrt(wp.c12 * wp.c22);
    const complexd num = a * s2 + b * s1 * std::polar(1.0, wp.phi);
    const complexd den = a * s2 + b * s1 * std::polar(1.0, -wp.phi);
    if (std::abs(den) == 0.0)
        throw numerical_error("lambda_ratio: forward transmission vanishes exactly");
    return num / den;
}

/// Principal-branch evaluation of the isolation-phase formula
///   tan(phi) = [delta (g1+g2) + omega (g2-g1)] / [g1 g2 / 2 - 2 (delta^2 - omega^2)]
/// as printed, via atan2 of numerator and denominator. This is the
/// convention behind quoted phases like +-102.6 deg; the branch that
/// actually cancels lambda may differ from it by pi (see optimal_phase).
inline double isolation_phase_principal(double delta, double gamma1, double gamma2,
                                        double omega) {
    const double num = delta * (gamma1 + gamma2) + omega * (gamma2 - gamma1);
    const double den = gamma1 * gamma2 / 2.0 - 2.0 * (delta * delta - omega * omega);
    if (num == 0.0 && den == 0.0)
        throw std::domain_error("isolation phase undefined: numerator and denominator vanish");
    return std::atan2(num, den);
}

/// Pump phase for perfect isolation (lambda = 0) at equal cooperativities.
/// The arctangent fixes phi only mod pi; the branch is resolved by direct
/// minimization of |lambda| between the two candidates.
inline double optimal_phase(double delta, double gamma1, double gamma2, double omega) {
    if (delta == 0.0 && omega == 0.0)
        throw std::domain_error("optimal_phase: no isolating phase exists at delta = omega = 0");
    const double principal = isolation_phase_principal(delta, gamma1, gamma2, omega);

    TwoPortWorkingPoint wp;
    wp.c11 = wp.c12 = wp.c21 = wp.c22 = 1.0;
    wp.delta = delta;
    wp.gamma1 = gamma1;
    wp.gamma2 = gamma2;

    double best_phi = principal;
    double best_mag = std::numeric_limits<double>::infinity();
    for (const double candidate : {principal, principal - pi, principal + pi}) {
        if (candidate < -pi || candidate > pi) continue;
        wp.phi = candidate;
        const double mag = std::abs(lambda_ratio(wp, omega));
        if (mag < best_mag) {
            best_mag = mag;
            best_phi = candidate;
        }
    }
    return best_phi;
}

/// Forward transmission at the optimal phase and cavity resonance for
/// equal cooperativities C and equal mechanical linewidths gamma:
///   S21 = -sqrt(eta1 eta2) 4 i delta (1 - 2 i delta/gamma)
///         / [C gamma (1 + (1 + 4 delta^2/gamma^2)/(2C))^2].
struct ForwardTransmission {
    complexd s21;
    double power;  // |S21|^2
};

inline ForwardTransmission forward_transmission(double coop, double delta, double gamma,
                                                double eta1, double eta2) {
    if (!(coop > 0.0) || !(gamma > 0.0))
        throw std::domain_error("forward_transmission: C and gamma must be positive");
    const double x2 = 4.0 * delta * delta / (gamma * gamma);
    const complexd num = 4.0 * complexd(0.0, 1.0) * delta * (1.0 - complexd(0.0, 2.0) * delta / gamma);
    const double den = coop * gamma * std::pow(1.0 + (1.0 + x2) / (2.0 * coop), 2);
    ForwardTransmission out;
    out.s21 = -std::sqrt(eta1 * eta2) * num / den;
    out.power = std::norm(out.s21);
    return out;
}

/// Peak forward power eta1 eta2 (1 - 1/(2C)), attained when 2C = 1 + 4 delta^2/gamma^2.
inline double forward_transmission_peak(double coop, double eta1, double eta2) {
    return eta1 * eta2 * (1.0 - 1.0 / (2.0 * coop));
}

/// Bidirectional conversion efficiency |T|^2 = 4 eta1 eta2 C1 C2 / (1 + C1 + C2)^2.
inline double conversion_efficiency(double c1, double c2, double eta1, double eta2) {
    if (c1 < 0.0 || c2 < 0.0)
        throw std::domain_error("conversion_efficiency: cooperativities must be nonnegative");
    if (!(eta1 > 0.0 && eta1 <= 1.0 && eta2 > 0.0 && eta2 <= 1.0))
        throw std::domain_error("conversion_efficiency: eta must lie in (0, 1]");
    const double s = 1.0 + c1 + c2;
    return 4.0 * eta1 * eta2 * c1 * c2 / (s * s);
}

/// On-resonance reflections of the single-mode converter.
struct Reflections {
    double port1;  // |S11|^2
    double port2;  // |S22|^2
};

inline Reflections reflection_coefficients(double c1, double c2, double eta1, double eta2) {
    if (c1 < 0.0 || c2 < 0.0)
        throw std::domain_error("reflection_coefficients: cooperativities must be nonnegative");
    const double s = 1.0 + c1 + c2;
    const double r1 = (s - 2.0 * eta1 * (1.0 + c2)) / s;
    const double r2 = (s - 2.0 * eta2 * (1.0 + c1)) / s;
    return {r1 * r1, r2 * r2};
}

/// Total conversion bandwidth Gamma_T = gamma_m + Gamma_1 + Gamma_2 with
/// the per-cavity damping rates Gamma_i = 4 G_i^2 / kappa_i.
inline double conversion_bandwidth(double gamma_m, double damping1, double damping2) {
    if (gamma_m < 0.0 || damping1 < 0.0 || damping2 < 0.0)
        throw std::domain_error("conversion_bandwidth: rates must be nonnegative");
    return gamma_m + damping1 + damping2;
}

/// Optomechanical damping rate Gamma = 4 G^2 / kappa of one drive.
inline double optomechanical_damping(double g_effective, double kappa) {
    if (!(kappa > 0.0)) throw std::domain_error("optomechanical_damping: kappa must be positive");
    return 4.0 * g_effective * g_effective / kappa;
}

}  // namespace cmt
