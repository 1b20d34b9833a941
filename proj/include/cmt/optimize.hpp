#pragma once

// Derivative-free search over pump photon numbers, phases and sideband
// detunings for target scattering functions: impedance matching,
// isolation, circulation.
//
// Searches evaluate the resonant-only model (build_effective_rwa): the
// off-resonant renormalization is a property of the hardware operating
// point, not a design variable, and for this device it caps the
// self-consistent effective cooperativity near unity, so design targets
// are expressed in effective parameters.
//
// Gauge: cavity and mechanical frame rotations absorb all but the loop
// phases, so phases phi(i,1) and phi(1,2) are pinned to zero and only
// phi(2,2) (and phi(3,2) for three cavities) are searched. Photon numbers
// are searched in log scale; detunings are bounded by +-kappa/2.

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmt/analytic.hpp"
#include "cmt/device.hpp"
#include "cmt/effective.hpp"
#include "cmt/nelder_mead.hpp"
#include "cmt/scattering.hpp"

namespace cmt {

struct OptimizationTarget {
    enum class Kind { isolate, circulate, convert, match } kind = Kind::isolate;
    int from_port = 0;              // 0-based; isolate/convert
    int to_port = 1;
    std::vector<int> order{0, 1, 2};  // circulation order (port sequence)
    double band_min = 0.0;          // rad/s
    double band_max = 0.0;
    int band_points = 1;
    double insertion_weight = 0.25;   // trade-off weight on forward loss
    double min_isolation_db = 0.0;    // feasibility thresholds (0 = unchecked)
    double max_insertion_db = 0.0;
};

struct AchievedMetrics {
    double isolation_db = 0.0;       // worst backward suppression over band/paths
    double insertion_loss_db = 0.0;  // worst forward loss over band/paths
    double bandwidth_hz = 0.0;       // -20 dB isolation bandwidth (isolator targets)
};

struct OptimizationResult {
    PumpConfiguration pumps;
    double objective = 0.0;
    std::vector<std::pair<int, double>> history;  // (evaluation index, objective)
    AchievedMetrics achieved;
    bool feasible = false;
    bool budget_exhausted = false;
};

namespace detail {

inline std::vector<double> band_grid(const OptimizationTarget& target) {
    std::vector<double> grid;
    const int n = std::max(1, target.band_points);
    if (n == 1 || target.band_min == target.band_max) {
        grid.push_back(0.5 * (target.band_min + target.band_max));
        return grid;
    }
    const double step = (target.band_max - target.band_min) / (n - 1);
    for (int k = 0; k < n; ++k) grid.push_back(target.band_min + k * step);
    return grid;
}

}  // namespace detail

/// Photon numbers putting every coupling of one mechanical mode at the same
/// cooperativity; reports the residual on-resonance reflections.
struct ImpedanceMatch {
    PumpConfiguration pumps;
    Eigen::VectorXd residual_reflection;  // |S_ii(0)| per cavity
};

inline ImpedanceMatch impedance_match(const DeviceModel& device, int mech_index,
                                      double target_coop) {
    if (!(target_coop > 0.0))
        throw std::domain_error("impedance_match: target cooperativity must be positive");
    ImpedanceMatch out;
    out.pumps = PumpConfiguration::off(device.num_cavities(), 2);
    for (int i = 0; i < device.num_cavities(); ++i) {
        const double g0 = device.couplings(i, mech_index);
        if (g0 <= 0.0) continue;
        out.pumps.photon_number(i, mech_index) = photons_for_cooperativity(
            target_coop, g0, device.cavities[i].kappa(), device.mechanics[mech_index].gamma_m);
    }
    const EffectiveModel eff = build_effective(device, out.pumps);
    const PortScattering ps = scattering_matrix(eff, device, 0.0);
    out.residual_reflection.resize(device.num_cavities());
    for (int i = 0; i < device.num_cavities(); ++i)
        out.residual_reflection(i) = std::abs(ps.s(i, i));
    return out;
}

namespace detail {

struct SearchSpace {
    int num_phases = 0;      // phi(2,2) [, phi(3,2)]
    int num_photons = 0;     // active pump count
    std::vector<std::pair<int, int>> photon_slots;
    double max_detuning = 0.0;     // |delta0| bound (kappa_min/2)
    double detuning_scale = 0.0;   // natural search scale, ~mechanical linewidths

    int dimension() const { return num_phases + num_photons + 2; }

    // Detunings are searched in units of detuning_scale and soft-clamped
    // to +-max_detuning through tanh.
    double decode_detuning(double x) const {
        return max_detuning * std::tanh(x * detuning_scale / max_detuning);
    }
    double encode_detuning(double d) const {
        const double clipped = std::clamp(d / max_detuning, -0.999999, 0.999999);
        return std::atanh(clipped) * max_detuning / detuning_scale;
    }

    PumpConfiguration decode(const Eigen::VectorXd& x, int nc) const {
        PumpConfiguration pumps = PumpConfiguration::off(nc, 2);
        int k = 0;
        pumps.phase(1, 1) = x(k++);
        if (num_phases > 1) pumps.phase(2, 1) = x(k++);
        for (const auto& [i, j] : photon_slots) pumps.photon_number(i, j) = std::exp(x(k++));
        for (int j = 0; j < 2; ++j) pumps.sideband_detuning(j) = decode_detuning(x(k++));
        return pumps;
    }

    Eigen::VectorXd encode(const PumpConfiguration& pumps) const {
        Eigen::VectorXd x(dimension());
        int k = 0;
        x(k++) = pumps.phase(1, 1);
        if (num_phases > 1) x(k++) = pumps.phase(2, 1);
        for (const auto& [i, j] : photon_slots)
            x(k++) = std::log(std::max(pumps.photon_number(i, j), 1e-6));
        for (int j = 0; j < 2; ++j) x(k++) = encode_detuning(pumps.sideband_detuning(j));
        return x;
    }
};

inline SearchSpace make_search_space(const DeviceModel& device) {
    SearchSpace space;
    const int nc = device.num_cavities();
    space.num_phases = (nc >= 3) ? 2 : 1;
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < 2; ++j)
            if (device.couplings(i, j) > 0.0) space.photon_slots.emplace_back(i, j);
    space.num_photons = static_cast<int>(space.photon_slots.size());
    double kappa_min = device.cavities[0].kappa();
    for (const auto& c : device.cavities) kappa_min = std::min(kappa_min, c.kappa());
    space.max_detuning = kappa_min / 2.0;
    const double gamma_max = std::max(device.mechanics[0].gamma_m, device.mechanics[1].gamma_m);
    space.detuning_scale = std::min(200.0 * gamma_max, space.max_detuning / 4.0);
    return space;
}

}  // namespace detail

/// Two-port isolation search. The analytic matched point (equal
/// cooperativities, proportional detunings, exact phase) is always one of
/// the starts; the optimizer can only improve on it.
inline OptimizationResult optimize_isolation(const DeviceModel& device,
                                             const OptimizationTarget& target,
                                             const PumpConfiguration& seed) {
    const auto space = detail::make_search_space(device);
    const auto grid = detail::band_grid(target);
    const int fwd_to = target.to_port, fwd_from = target.from_port;

    OptimizationResult result;
    int evaluations = 0;
    auto objective = [&](const Eigen::VectorXd& x) {
        PumpConfiguration pumps = space.decode(x, device.num_cavities());
        double worst_backward = 0.0;
        double worst_loss = 0.0;
        try {
            const EffectiveModel eff = build_effective_rwa(device, pumps);
            for (const double omega : grid) {
                const PortScattering ps = scattering_matrix(eff, device, omega);
                worst_backward =
                    std::max(worst_backward, std::norm(ps.s(fwd_from, fwd_to)));
                worst_loss = std::max(worst_loss, 1.0 - std::norm(ps.s(fwd_to, fwd_from)));
            }
        } catch (const std::exception&) {
            return 1e6;  // out-of-model trial point
        }
        const double value = worst_backward + target.insertion_weight * worst_loss;
        result.history.emplace_back(evaluations++, value);
        return value;
    };

    const Eigen::VectorXd x0 = space.encode(seed);
    Eigen::VectorXd spread = Eigen::VectorXd::Constant(space.dimension(), 0.5);
    spread.head(space.num_phases).setConstant(0.8);

    SimplexOptions opt;
    opt.max_iter = 2500;
    const SimplexResult best = multi_start_nelder_mead(objective, x0, spread, 8, opt);

    result.pumps = space.decode(best.x, device.num_cavities());
    result.objective = best.value;
    result.budget_exhausted = !best.converged;

    // Recompute achieved metrics from scratch through the engine.
    const EffectiveModel eff = build_effective_rwa(device, result.pumps);
    double worst_backward = 0.0, worst_loss_db = 0.0;
    for (const double omega : grid) {
        const PortScattering ps = scattering_matrix(eff, device, omega);
        worst_backward = std::max(worst_backward, std::norm(ps.s(fwd_from, fwd_to)));
        worst_loss_db = std::max(worst_loss_db,
                                 insertion_loss_db(std::abs(ps.s(fwd_to, fwd_from))));
    }
    result.achieved.isolation_db = -10.0 * std::log10(std::max(worst_backward, 1e-300));
    result.achieved.insertion_loss_db = worst_loss_db;

    // -20 dB isolation bandwidth around band centre.
    const double center = 0.5 * (target.band_min + target.band_max);
    const double span = std::max(eff.gamma_eff(0), eff.gamma_eff(1)) * 40.0;
    double lo = center, hi = center;
    const int n_scan = 2001;
    for (int k = 0; k < n_scan; ++k) {
        const double omega = center - span / 2.0 + span * k / (n_scan - 1);
        const PortScattering ps = scattering_matrix(eff, device, omega);
        if (std::norm(ps.s(fwd_from, fwd_to)) < 1e-2) {
            lo = std::min(lo, omega);
            hi = std::max(hi, omega);
        }
    }
    result.achieved.bandwidth_hz = rad_to_hz(hi - lo);

    result.feasible = (target.min_isolation_db <= 0.0 ||
                       result.achieved.isolation_db >= target.min_isolation_db) &&
                      (target.max_insertion_db <= 0.0 ||
                       result.achieved.insertion_loss_db <= target.max_insertion_db);
    return result;
}

/// Three-port circulation search over six photon numbers, the two loop
/// phases and the shared detunings.
inline OptimizationResult optimize_circulation(const DeviceModel& device,
                                               const OptimizationTarget& target,
                                               const PumpConfiguration& seed) {
    if (device.num_cavities() != 3)
        throw std::invalid_argument("optimize_circulation: needs a three-cavity device");
    const auto space = detail::make_search_space(device);
    const auto grid = detail::band_grid(target);
    const auto& order = target.order;

    auto path_metrics = [&](const EffectiveModel& eff, double& worst_backward,
                            double& worst_loss) {
        worst_backward = 0.0;
        worst_loss = 0.0;
        for (const double omega : grid) {
            const PortScattering ps = scattering_matrix(eff, device, omega);
            for (int k = 0; k < 3; ++k) {
                const int from = order[k];
                const int to = order[(k + 1) % 3];
                worst_loss = std::max(worst_loss, 1.0 - std::norm(ps.s(to, from)));
                worst_backward = std::max(worst_backward, std::norm(ps.s(from, to)));
            }
        }
    };

    OptimizationResult result;
    int evaluations = 0;
    auto objective = [&](const Eigen::VectorXd& x) {
        double worst_backward, worst_loss;
        try {
            const EffectiveModel eff =
                build_effective_rwa(device, space.decode(x, 3));
            path_metrics(eff, worst_backward, worst_loss);
        } catch (const std::exception&) {
            return 1e6;
        }
        // Worst-path insertion loss plus weighted backward leakage, both in
        // dB; the leakage term is floored so the search cannot chase -inf.
        const double loss_db = -10.0 * std::log10(std::max(1.0 - worst_loss, 1e-12));
        const double leak_db =
            std::max(10.0 * std::log10(std::max(worst_backward, 1e-300)), -40.0);
        const double value = loss_db + target.insertion_weight * (40.0 + leak_db);
        result.history.emplace_back(evaluations++, value);
        return value;
    };

    const Eigen::VectorXd x0 = space.encode(seed);
    Eigen::VectorXd spread = Eigen::VectorXd::Constant(space.dimension(), 0.6);
    spread.head(space.num_phases).setConstant(1.2);

    SimplexOptions opt;
    opt.max_iter = 3500;
    const SimplexResult best = multi_start_nelder_mead(objective, x0, spread, 8, opt);

    result.pumps = space.decode(best.x, 3);
    result.objective = best.value;
    result.budget_exhausted = !best.converged;

    const EffectiveModel eff = build_effective_rwa(device, result.pumps);
    double worst_backward, worst_loss;
    path_metrics(eff, worst_backward, worst_loss);
    result.achieved.isolation_db = -10.0 * std::log10(std::max(worst_backward, 1e-300));
    result.achieved.insertion_loss_db = -10.0 * std::log10(1.0 - worst_loss);
    result.feasible = (target.min_isolation_db <= 0.0 ||
                       result.achieved.isolation_db >= target.min_isolation_db) &&
                      (target.max_insertion_db <= 0.0 ||
                       result.achieved.insertion_loss_db <= target.max_insertion_db);
    return result;
}

/// Heuristic circulator seed: equal effective cooperativities on every
/// pump, proportional mechanical detunings, quarter-turn loop phases.
inline PumpConfiguration circulator_seed(const DeviceModel& device, double coop,
                                         double detuning_ratio) {
    PumpConfiguration pumps = PumpConfiguration::off(device.num_cavities(), 2);
    for (int i = 0; i < device.num_cavities(); ++i)
        for (int j = 0; j < 2; ++j) {
            const double g0 = device.couplings(i, j);
            if (g0 > 0.0)
                pumps.photon_number(i, j) = photons_for_cooperativity(
                    coop, g0, device.cavities[i].kappa(), device.mechanics[j].gamma_m);
        }
    pumps.phase(1, 1) = pi / 2.0;
    if (device.num_cavities() >= 3) pumps.phase(2, 1) = -pi / 2.0;
    pumps.sideband_detuning(0) = +detuning_ratio * device.mechanics[0].gamma_m / 2.0;
    pumps.sideband_detuning(1) = -detuning_ratio * device.mechanics[1].gamma_m / 2.0;
    return pumps;
}

}  // namespace cmt
