#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsaudit/series.hpp"

namespace tsaudit {

/// Dense least squares on an explicit design matrix. Building block for the
/// Series-level fits and the auxiliary regressions of the tests.
struct LeastSquares {
    Eigen::VectorXd coef;
    Eigen::MatrixXd vcov;  ///< sigma2 * (X'X)^-1
    Eigen::VectorXd residuals;
    double rss = 0.0;
    double sigma2 = 0.0;  ///< rss / dof_resid
    int nobs = 0;
    int dof_resid = 0;
};

/// QR solve of min ||y - X b||. Columns are equilibrated to unit norm and the
/// design is rejected as rank deficient when some |R_ii| falls below 1e-12 of
/// the largest. Throws NumericalError on rank deficiency and
/// std::invalid_argument when rows <= columns.
[[nodiscard]] LeastSquares least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct RegressionFit {
    std::vector<std::string> names;  ///< "_cons" first when an intercept is fitted
    Eigen::VectorXd coef;
    Eigen::MatrixXd vcov;
    Series residuals;  ///< missing on listwise-dropped rows
    int nobs = 0;
    int dof_resid = 0;
    double r_squared = 0.0;  ///< centered with an intercept, uncentered without
    double sigma2 = 0.0;
    double rss = 0.0;
    bool intercept = true;

    [[nodiscard]] double se(std::size_t i) const;
};

/// OLS of y on xs with listwise deletion of incomplete rows.
[[nodiscard]] RegressionFit ols_fit(const Series& y, std::span<const Series> xs, bool intercept = true);
[[nodiscard]] RegressionFit ols_fit(const Series& y, const Series& x, bool intercept = true);

struct TTestResult {
    double t = 0.0;
    double p_value = 1.0;
    /// Standard error is zero (perfect fit). t is then infinite (or 0 when the
    /// coefficient is exactly 0) and p is 0 (or 1).
    bool degenerate = false;
};

[[nodiscard]] TTestResult t_test(const RegressionFit& fit, std::size_t coef_index);

struct CorrResult {
    double r = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    int nobs = 0;
};

/// Pearson correlation over complete pairs with a two-sided t-test on n-2 dof.
/// Throws std::invalid_argument with fewer than 3 pairs or a constant input.
[[nodiscard]] CorrResult pearson_corr(const Series& a, const Series& b);

struct WaldResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// c' V^-1 c over the chosen coefficients, referred to chi2(|subset|).
/// Throws NumericalError when the covariance block is singular.
[[nodiscard]] WaldResult wald_joint(std::span<const std::size_t> subset, const Eigen::VectorXd& coef,
                                    const Eigen::MatrixXd& vcov);

}  // namespace tsaudit
