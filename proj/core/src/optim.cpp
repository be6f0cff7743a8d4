#include "rfsim/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rfsim::optim {

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0,
                             double initial_step, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> p(n + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < n; ++i) p[i + 1][i] += initial_step;
    std::vector<double> y(n + 1);
    for (std::size_t i = 0; i <= n; ++i) y[i] = f(p[i]);

    NelderMeadResult result;
    int iter = 0;
    std::vector<double> centroid(n), trial(n), trial2(n);
    while (iter < opts.max_iterations) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
        const std::size_t lo = order[0], hi = order[n], next_hi = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                diameter = std::max(diameter, std::abs(p[i][j] - p[lo][j]));
        const double spread = std::abs(y[hi] - y[lo]);
        if (spread <= opts.objective_tol * (1.0 + std::abs(y[lo])) &&
            diameter <= opts.param_tol * (1.0 + std::abs(p[lo][0]))) {
            result.converged = true;
            break;
        }

        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                if (i != hi) s += p[i][j];
            centroid[j] = s / static_cast<double>(n);
        }

        auto blend = [&](std::vector<double>& out, double t) {
            for (std::size_t j = 0; j < n; ++j)
                out[j] = centroid[j] + t * (p[hi][j] - centroid[j]);
        };

        blend(trial, -1.0);  // reflection
        const double y_ref = f(trial);
        ++iter;
        if (y_ref < y[lo]) {
            blend(trial2, -2.0);  // expansion
            const double y_exp = f(trial2);
            ++iter;
            if (y_exp < y_ref) {
                p[hi] = trial2;
                y[hi] = y_exp;
            } else {
                p[hi] = trial;
                y[hi] = y_ref;
            }
        } else if (y_ref < y[next_hi]) {
            p[hi] = trial;
            y[hi] = y_ref;
        } else {
            blend(trial2, 0.5);  // contraction
            const double y_con = f(trial2);
            ++iter;
            if (y_con < y[hi]) {
                p[hi] = trial2;
                y[hi] = y_con;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {  // shrink toward best
                    if (i == lo) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        p[i][j] = p[lo][j] + 0.5 * (p[i][j] - p[lo][j]);
                    y[i] = f(p[i]);
                    ++iter;
                }
            }
        }
    }

    const std::size_t best = static_cast<std::size_t>(
        std::min_element(y.begin(), y.end()) - y.begin());
    result.x = p[best];
    result.value = y[best];
    result.iterations = iter;
    return result;
}

RefineResult levenberg_refine(const ResidualFn& fn, std::vector<double>& x,
                              int max_iterations, double step_tol) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    fn(x, r, jac);
    double chi2 = r.squaredNorm();
    double lambda = 1e-6;

    RefineResult out;
    for (int it = 0; it < max_iterations; ++it) {
        ++out.iterations;
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * r;
        Eigen::MatrixXd damped = jtj;
        for (Eigen::Index i = 0; i < n; ++i)
            damped(i, i) += lambda * (jtj(i, i) > 0.0 ? jtj(i, i) : 1.0);
        const Eigen::VectorXd step = damped.ldlt().solve(-g);

        std::vector<double> trial(x);
        for (Eigen::Index i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] += step(i);
        Eigen::VectorXd r_trial;
        Eigen::MatrixXd jac_trial;
        fn(trial, r_trial, jac_trial);
        const double chi2_trial = r_trial.squaredNorm();

        if (chi2_trial <= chi2) {
            const double improvement = chi2 - chi2_trial;
            x = trial;
            r = r_trial;
            jac = jac_trial;
            chi2 = chi2_trial;
            lambda = std::max(lambda * 0.3, 1e-14);
            if (step.cwiseAbs().maxCoeff() < step_tol ||
                improvement <= 1e-15 * (1.0 + chi2)) {
                out.converged = true;
                break;
            }
        } else {
            lambda *= 8.0;
            if (lambda > 1e12) {
                out.converged = true;  // stuck at a flat/boundary direction
                break;
            }
        }
    }
    out.objective = chi2;
    out.covariance = (jac.transpose() * jac)
                         .completeOrthogonalDecomposition()
                         .pseudoInverse();
    return out;
}

}  // namespace rfsim::optim
