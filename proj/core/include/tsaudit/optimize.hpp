#pragma once

#include <functional>

#include <Eigen/Dense>

namespace tsaudit::optim {

struct Result {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
/// Returns f(x) and writes the gradient into the second argument.
using ObjectiveWithGradient = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct NelderMeadOptions {
    /// Initial simplex edge per coordinate; a scalar broadcast when size 1.
    Eigen::VectorXd step = Eigen::VectorXd::Constant(1, 0.1);
    double ftol = 1e-8;  ///< stop when (f_max - f_min) <= ftol * (|f_min| + ftol)
    double xtol = 1e-10;
    int max_evaluations = 2000;
};

/// Downhill simplex (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Non-finite objective values are treated as +infinity.
[[nodiscard]] Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opts = {});

struct BfgsOptions {
    double rel_ftol = 1e-10;  ///< relative objective change
    double xtol = 1e-8;       ///< step size, relative to 1 + |x_i|
    /// Accept a stalled line search as converged when the gradient's
    /// infinity norm is below this.
    double gtol = 1e-4;
    int max_iterations = 500;
};

/// Quasi-Newton minimization with the BFGS inverse-Hessian update and a
/// backtracking Armijo line search. Converged when both the relative change
/// of f and the step fall below their tolerances in the same iteration.
[[nodiscard]] Result bfgs(const ObjectiveWithGradient& f, const Eigen::VectorXd& x0, const BfgsOptions& opts = {});

}  // namespace tsaudit::optim
