#pragma once

// Derivative-free simplex minimizer (Nelder-Mead) with a deterministic
// multi-start wrapper. No global optimality claims; good enough for the
// smooth low-dimensional objectives in this project.

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace cmt {

struct SimplexOptions {
    int max_iter = 4000;
    double f_tol = 1e-12;   // absolute spread of simplex values
    double x_tol = 1e-10;   // simplex diameter relative to scale
    double initial_step = 0.25;
};

struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                                 const Eigen::VectorXd& start,
                                 const SimplexOptions& opt = {}) {
    const int n = static_cast<int>(start.size());
    std::vector<Eigen::VectorXd> pts(n + 1, start);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i) {
        const double step = (start(i) != 0.0) ? opt.initial_step * std::abs(start(i))
                                              : opt.initial_step;
        pts[i + 1](i) += step;
    }
    for (int i = 0; i <= n; ++i) vals[i] = objective(pts[i]);

    std::vector<int> order(n + 1);
    SimplexResult result;
    for (result.iterations = 0; result.iterations < opt.max_iter; ++result.iterations) {
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        const int best = order[0], worst = order[n], second = order[n - 1];

        const double spread = std::abs(vals[worst] - vals[best]);
        double diameter = 0.0;
        for (int i = 1; i <= n; ++i)
            diameter = std::max(diameter, (pts[order[i]] - pts[best]).norm());
        const double scale = std::max(1.0, pts[best].norm());
        if (spread < opt.f_tol * std::max(1.0, std::abs(vals[best])) &&
            diameter < opt.x_tol * scale) {
            result.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= n;

        const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
        const double f_reflected = objective(reflected);
        if (f_reflected < vals[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
            const double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                pts[worst] = expanded;
                vals[worst] = f_expanded;
            } else {
                pts[worst] = reflected;
                vals[worst] = f_reflected;
            }
        } else if (f_reflected < vals[second]) {
            pts[worst] = reflected;
            vals[worst] = f_reflected;
        } else {
            const Eigen::VectorXd contracted = centroid + 0.5 * (pts[worst] - centroid);
            const double f_contracted = objective(contracted);
            if (f_contracted < vals[worst]) {
                pts[worst] = contracted;
                vals[worst] = f_contracted;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    vals[i] = objective(pts[i]);
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (vals[i] < vals[best]) best = i;
    result.x = pts[best];
    result.value = vals[best];
    return result;
}

/// Deterministic multi-start: seed 0 is the caller's start, the rest are
/// random perturbations from a fixed-seed generator. Ties resolve to the
/// lowest start index.
inline SimplexResult multi_start_nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const Eigen::VectorXd& spread, int n_starts = 8,
    const SimplexOptions& opt = {}, unsigned rng_seed = 0x5eed) {
    std::mt19937 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_starts; ++s) {
        Eigen::VectorXd x0 = start;
        if (s > 0)
            for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) += spread(i) * gauss(rng);
        const SimplexResult run = nelder_mead(objective, x0, opt);
        if (run.value < best.value) best = run;
    }
    return best;
}

}  // namespace cmt
