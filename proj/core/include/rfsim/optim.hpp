#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

// Derivative-free simplex descent plus a damped Gauss-Newton polish for
// smooth least-squares objectives.
namespace rfsim::optim {

struct NelderMeadOptions {
    double param_tol = 1e-10;
    double objective_tol = 1e-12;
    int max_iterations = 4000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0,
                             double initial_step, const NelderMeadOptions& opts = {});

// Residuals r(x) and Jacobian J_ij = dr_i/dx_j of a weighted least-squares
// problem; minimizes (1/2)|r|^2 with Levenberg damping.
using ResidualFn =
    std::function<void(std::span<const double>, Eigen::VectorXd&, Eigen::MatrixXd&)>;

struct RefineResult {
    bool converged = false;
    int iterations = 0;
    double objective = 0.0;               // chi^2 = |r|^2
    Eigen::MatrixXd covariance;           // (J^T J)^+ at the optimum
};

RefineResult levenberg_refine(const ResidualFn& fn, std::vector<double>& x,
                              int max_iterations = 200, double step_tol = 1e-14);

}  // namespace rfsim::optim
