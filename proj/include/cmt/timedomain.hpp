#pragma once

// Time-domain validation of the adiabatic elimination: integrates the
// mean-field Langevin equations with the explicit e^{+-i dwm t} off-resonant
// terms (full mode), or the autonomous auxiliary-mode closure (extended
// mode), drives one port with a coherent probe, and reads the scattering
// column out of the demodulated steady state.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cmt/device.hpp"
#include "cmt/effective.hpp"
#include "cmt/errors.hpp"
#include "cmt/scattering.hpp"

namespace cmt {

struct ProbeDrive {
    int port = 0;            // 0-based
    double amplitude = 1.0;  // coherent input amplitude (per sqrt(rad/s))
    double omega = 0.0;      // rotating-frame detuning (rad/s)
};

struct MeanFieldState {
    Eigen::VectorXcd cavity_amps;
    Eigen::Vector2cd mech_amps;
    Eigen::VectorXcd aux_cavity_plus;   // extended mode only
    Eigen::VectorXcd aux_cavity_minus;  // extended mode only
    Eigen::Vector2cd aux_mech;          // extended mode only
    double time = 0.0;
};

struct SteadyState {
    MeanFieldState state;
    Eigen::VectorXcd s_column;  // S(i, probe port) inferred from outputs
    double residual = 0.0;      // last relative change of the demodulated column
    int windows = 0;
};

namespace detail {

// State layout: [a (nc), b (2)] plus, in extended mode, [A+ (nc), A- (nc), B (2)].
inline int state_size(int nc, bool extended) { return extended ? 3 * nc + 4 : nc + 2; }

struct SystemBlocks {
    int nc = 0;
    bool extended = false;
    Eigen::MatrixXcd a_matrix;  // autonomous part (extended) or G-only part (full)
    Eigen::VectorXd kappa, kappa_ext;
    Eigen::Vector2d gamma, delta0;
    Eigen::MatrixXcd g, f;
    double dwm = 0.0;
};

inline SystemBlocks make_blocks(const DeviceModel& device, const EffectiveModel& eff,
                                const Eigen::Vector2d& delta0, bool extended) {
    SystemBlocks blk;
    blk.nc = device.num_cavities();
    blk.extended = extended;
    blk.g = eff.g_resonant;
    blk.f = eff.f_offresonant;
    blk.dwm = eff.delta_omega_m;
    blk.delta0 = delta0;
    blk.kappa.resize(blk.nc);
    blk.kappa_ext.resize(blk.nc);
    for (int i = 0; i < blk.nc; ++i) {
        blk.kappa(i) = device.cavities[i].kappa();
        blk.kappa_ext(i) = device.cavities[i].kappa_ext;
    }
    blk.gamma = Eigen::Vector2d{device.mechanics[0].gamma_m, device.mechanics[1].gamma_m};

    const int n = state_size(blk.nc, extended);
    const complexd im(0.0, 1.0);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    const int nc = blk.nc;
    const int ib = nc, iap = nc + 2, iam = 2 * nc + 2, ibb = 3 * nc + 2;

    for (int i = 0; i < nc; ++i) {
        m(i, i) = -blk.kappa(i) / 2.0;
        for (int j = 0; j < 2; ++j) {
            m(i, ib + j) -= im * blk.g(i, j);
            m(ib + j, i) -= im * std::conj(blk.g(i, j));
        }
    }
    for (int j = 0; j < 2; ++j)
        m(ib + j, ib + j) = complexd(-blk.gamma(j) / 2.0, blk.delta0(j));

    if (extended) {
        for (int i = 0; i < nc; ++i) {
            for (int j = 0; j < 2; ++j) {
                // Off-resonant drive of the main modes through the toys.
                m(i, ibb + j) -= im * blk.f(i, j);
            }
            m(ib + 0, iam + i) -= im * std::conj(blk.f(i, 0));
            m(ib + 1, iap + i) -= im * std::conj(blk.f(i, 1));

            m(iap + i, iap + i) = complexd(-blk.kappa(i) / 2.0, blk.dwm);
            m(iap + i, ib + 1) -= im * blk.f(i, 1);
            m(iap + i, ibb + 0) -= im * blk.g(i, 0);

            m(iam + i, iam + i) = complexd(-blk.kappa(i) / 2.0, -blk.dwm);
            m(iam + i, ib + 0) -= im * blk.f(i, 0);
            m(iam + i, ibb + 1) -= im * blk.g(i, 1);

            m(ibb + 0, i) -= im * std::conj(blk.f(i, 0));
            m(ibb + 0, iap + i) -= im * std::conj(blk.g(i, 0));
            m(ibb + 1, i) -= im * std::conj(blk.f(i, 1));
            m(ibb + 1, iam + i) -= im * std::conj(blk.g(i, 1));
        }
        m(ibb + 0, ibb + 0) = complexd(-blk.gamma(0) / 2.0, blk.dwm + blk.delta0(0));
        m(ibb + 1, ibb + 1) = complexd(-blk.gamma(1) / 2.0, -(blk.dwm - blk.delta0(1)));
    }
    blk.a_matrix = m;
    return blk;
}

// Derivative of the full (explicitly time-dependent) system.
inline void full_derivative(const SystemBlocks& blk, double t, const Eigen::VectorXcd& x,
                            const ProbeDrive& probe, Eigen::VectorXcd& dx) {
    dx.noalias() = blk.a_matrix * x;
    const complexd im(0.0, 1.0);
    const int nc = blk.nc;
    // j = 0 rotates as e^{+i dwm t} in the cavity equations, j = 1 as e^{-i dwm t}.
    const complexd rot_plus = std::polar(1.0, blk.dwm * t);
    const complexd rot[2] = {rot_plus, std::conj(rot_plus)};
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < 2; ++j) {
            dx(i) -= im * blk.f(i, j) * rot[j] * x(nc + j);
            dx(nc + j) -= im * std::conj(blk.f(i, j) * rot[j]) * x(i);
        }
    dx(probe.port) += std::sqrt(blk.kappa_ext(probe.port)) * probe.amplitude *
                      std::polar(1.0, -probe.omega * t);
}

inline void extended_derivative(const SystemBlocks& blk, double t, const Eigen::VectorXcd& x,
                                const ProbeDrive& probe, Eigen::VectorXcd& dx) {
    dx.noalias() = blk.a_matrix * x;
    dx(probe.port) += std::sqrt(blk.kappa_ext(probe.port)) * probe.amplitude *
                      std::polar(1.0, -probe.omega * t);
}

}  // namespace detail

/// Steady state of the extended (auxiliary-mode) system by direct solve:
/// x(t) = X e^{-i omega t} with (-i omega I - A) X = f.
inline SteadyState steady_state_extended(const DeviceModel& device, const EffectiveModel& eff,
                                         const Eigen::Vector2d& delta0,
                                         const ProbeDrive& probe) {
    const auto blk = detail::make_blocks(device, eff, delta0, true);
    const int n = detail::state_size(blk.nc, true);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs(probe.port) = std::sqrt(blk.kappa_ext(probe.port)) * probe.amplitude;

    Eigen::MatrixXcd system = -blk.a_matrix;
    for (int i = 0; i < n; ++i) system(i, i) -= complexd(0.0, probe.omega);
    const Eigen::VectorXcd x = system.partialPivLu().solve(rhs);

    SteadyState out;
    out.state.cavity_amps = x.segment(0, blk.nc);
    out.state.mech_amps = x.segment(blk.nc, 2);
    out.state.aux_cavity_plus = x.segment(blk.nc + 2, blk.nc);
    out.state.aux_cavity_minus = x.segment(2 * blk.nc + 2, blk.nc);
    out.state.aux_mech = x.segment(3 * blk.nc + 2, 2);
    out.s_column.resize(blk.nc);
    for (int i = 0; i < blk.nc; ++i) {
        out.s_column(i) = std::sqrt(blk.kappa_ext(i)) * x(i) / probe.amplitude;
        if (i == probe.port) out.s_column(i) -= 1.0;
    }
    return out;
}

struct IntegrationOptions {
    double t_end = 0.0;        // hard cap (s); 0 = choose from damping rates
    double dt = 0.0;           // step (s); 0 = 0.05 / fastest rate
    double rel_tol = 1e-8;     // steady-state detector on the demodulated column
    bool extended = false;
    MeanFieldState initial;    // empty vectors = start from rest
};

/// Fixed-step RK4 integration to steady state under a coherent probe.
/// Convergence is detected on the probe-frame demodulated outputs averaged
/// over integer beat periods 2 pi / dwm, which removes the e^{+-i dwm t}
/// ripple exactly.
inline SteadyState integrate_mean_field(const DeviceModel& device, const EffectiveModel& eff,
                                        const Eigen::Vector2d& delta0, const ProbeDrive& probe,
                                        IntegrationOptions opt = {}) {
    const auto blk = detail::make_blocks(device, eff, delta0, opt.extended);
    const int n = detail::state_size(blk.nc, opt.extended);

    double max_rate = blk.dwm;
    for (int i = 0; i < blk.nc; ++i) max_rate = std::max(max_rate, blk.kappa(i));
    max_rate = std::max({max_rate, std::abs(probe.omega), std::abs(delta0(0)),
                         std::abs(delta0(1))});

    double dt = (opt.dt > 0.0) ? opt.dt : 0.05 / max_rate;
    if (dt > 0.1 / max_rate)
        throw std::invalid_argument("integrate_mean_field: dt must resolve the fastest scale "
                                    "(dt <= 0.1 / max rate)");

    // Window of one frame-beat period, snapped to an integer step count.
    const double beat = two_pi / blk.dwm;
    const int steps_per_window = std::max(16, static_cast<int>(std::ceil(beat / dt)));
    dt = beat / steps_per_window;

    // The slowest transient decays at gamma_slow/2; reaching a relative
    // residual of rel_tol takes about 2 ln(1/tol) / gamma_slow.
    const double gamma_slow = std::min(eff.gamma_eff(0), eff.gamma_eff(1));
    const double t_end = (opt.t_end > 0.0)
                             ? opt.t_end
                             : (2.0 * std::log(1.0 / opt.rel_tol) + 20.0) / gamma_slow;

    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    if (opt.initial.cavity_amps.size() == blk.nc) {
        x.segment(0, blk.nc) = opt.initial.cavity_amps;
        x.segment(blk.nc, 2) = opt.initial.mech_amps;
        if (opt.extended && opt.initial.aux_cavity_plus.size() == blk.nc) {
            x.segment(blk.nc + 2, blk.nc) = opt.initial.aux_cavity_plus;
            x.segment(2 * blk.nc + 2, blk.nc) = opt.initial.aux_cavity_minus;
            x.segment(3 * blk.nc + 2, 2) = opt.initial.aux_mech;
        }
    }

    auto derivative = [&](double t, const Eigen::VectorXcd& state, Eigen::VectorXcd& dx) {
        if (opt.extended)
            detail::extended_derivative(blk, t, state, probe, dx);
        else
            detail::full_derivative(blk, t, state, probe, dx);
    };

    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n);
    Eigen::VectorXcd window_sum = Eigen::VectorXcd::Zero(blk.nc);
    Eigen::VectorXcd previous_demod;
    double t = 0.0;
    int windows = 0;
    int consecutive_ok = 0;
    double residual = std::numeric_limits<double>::infinity();

    while (t < t_end) {
        for (int step = 0; step < steps_per_window; ++step) {
            // Trapezoid accumulation of a_i e^{+i omega t} across the window.
            window_sum += 0.5 * x.segment(0, blk.nc) * std::polar(1.0, probe.omega * t);
            derivative(t, x, k1);
            tmp = x + 0.5 * dt * k1;
            derivative(t + 0.5 * dt, tmp, k2);
            tmp = x + 0.5 * dt * k2;
            derivative(t + 0.5 * dt, tmp, k3);
            tmp = x + dt * k3;
            derivative(t + dt, tmp, k4);
            x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += dt;
            window_sum += 0.5 * x.segment(0, blk.nc) * std::polar(1.0, probe.omega * t);
        }
        const Eigen::VectorXcd demod = window_sum / steps_per_window;
        window_sum.setZero();
        ++windows;
        if (previous_demod.size() == blk.nc) {
            const double norm = std::max(previous_demod.norm(), 1e-300);
            residual = (demod - previous_demod).norm() / norm;
            consecutive_ok = (residual < opt.rel_tol) ? consecutive_ok + 1 : 0;
        }
        previous_demod = demod;
        if (consecutive_ok >= 2) break;
    }
    if (consecutive_ok < 2) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", residual);
        throw numerical_error(std::string("integrate_mean_field: no steady state within "
                                          "t_end; last residual ") + buf);
    }

    SteadyState out;
    out.state.cavity_amps = x.segment(0, blk.nc);
    out.state.mech_amps = x.segment(blk.nc, 2);
    if (opt.extended) {
        out.state.aux_cavity_plus = x.segment(blk.nc + 2, blk.nc);
        out.state.aux_cavity_minus = x.segment(2 * blk.nc + 2, blk.nc);
        out.state.aux_mech = x.segment(3 * blk.nc + 2, 2);
    }
    out.state.time = t;
    out.residual = residual;
    out.windows = windows;
    out.s_column.resize(blk.nc);
    for (int i = 0; i < blk.nc; ++i) {
        out.s_column(i) =
            std::sqrt(blk.kappa_ext(i)) * previous_demod(i) / probe.amplitude;
        if (i == probe.port) out.s_column(i) -= 1.0;
    }
    return out;
}

struct AdiabaticDeviation {
    std::vector<double> omega_grid;
    std::vector<double> deviation;  // relative column deviation per omega
    double max_deviation = 0.0;
    double mean_deviation = 0.0;
};

/// Compare the extended-system steady state against the frequency-domain
/// effective model, probing port 0, over a list of probe detunings.
inline AdiabaticDeviation compare_adiabatic(const DeviceModel& device,
                                            const PumpConfiguration& pumps,
                                            const std::vector<double>& omega_list,
                                            int probe_port = 0) {
    const EffectiveModel eff = build_effective(device, pumps);
    AdiabaticDeviation report;
    report.omega_grid = omega_list;
    for (const double omega : omega_list) {
        ProbeDrive probe;
        probe.port = probe_port;
        probe.omega = omega;
        const SteadyState ext = steady_state_extended(device, eff, pumps.sideband_detuning,
                                                      probe);
        const PortScattering fd = scattering_matrix(eff, device, omega);
        const Eigen::VectorXcd fd_column = fd.s.col(probe_port);
        const double dev = (ext.s_column - fd_column).norm() /
                           std::max(fd_column.norm(), 1e-300);
        report.deviation.push_back(dev);
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    for (const double d : report.deviation) report.mean_deviation += d;
    if (!report.deviation.empty()) report.mean_deviation /= report.deviation.size();
    return report;
}

}  // namespace cmt
