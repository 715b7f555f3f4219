#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsaudit/regress.hpp"
#include "tsaudit/series.hpp"

namespace tsaudit {

enum class Vce { Classical, Robust };

/// Regression with ARIMA(p, d, q) errors, p, d, q in {0, 1}.
struct ArimaxSpec {
    int p = 1;
    int d = 1;
    int q = 1;
    Vce vce = Vce::Robust;
};

/// Natural-scale parameters of y' = c + x' beta + e, e ~ ARMA(1,1) with
/// innovation sd sigma. Absent AR or MA terms are held at zero.
struct ArmaxParams {
    double constant = 0.0;
    std::vector<double> beta;
    double rho = 0.0;
    double theta = 0.0;
    double sigma = 1.0;
};

/// Exact Gaussian likelihood of the ARMAX model evaluated with a Kalman
/// filter whose ARMA state starts from its stationary distribution.
///
/// Parameter vector layout: regression coefficients (one per design column),
/// then rho if the AR term is present, theta if the MA term is present, then
/// sigma.
class ArmaxLikelihood {
public:
    /// `design` holds every regressor, including a constant column if wanted.
    ArmaxLikelihood(Eigen::VectorXd y, Eigen::MatrixXd design, bool ar, bool ma);

    [[nodiscard]] Eigen::Index num_params() const noexcept { return design_.cols() + (ar_ ? 1 : 0) + (ma_ ? 1 : 0) + 1; }
    [[nodiscard]] Eigen::Index nobs() const noexcept { return y_.size(); }
    [[nodiscard]] bool has_ar() const noexcept { return ar_; }
    [[nodiscard]] bool has_ma() const noexcept { return ma_; }
    [[nodiscard]] const Eigen::VectorXd& y() const noexcept { return y_; }
    [[nodiscard]] const Eigen::MatrixXd& design() const noexcept { return design_; }

    /// Log-likelihood; -infinity when a filter quantity turns non-finite.
    /// Throws std::invalid_argument unless |rho| < 1, |theta| < 1, sigma > 0.
    [[nodiscard]] double value(const Eigen::VectorXd& params) const;

    /// Log-likelihood and its exact gradient (forward-mode differentiation
    /// through the filter recursions).
    [[nodiscard]] double value_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd& gradient) const;

    /// Per-observation score vectors, one row per observation.
    [[nodiscard]] Eigen::MatrixXd scores(const Eigen::VectorXd& params) const;

    struct Innovations {
        Eigen::VectorXd error;     ///< one-step prediction errors
        Eigen::VectorXd variance;  ///< their variances
    };
    [[nodiscard]] Innovations innovations(const Eigen::VectorXd& params) const;

private:
    void check(const Eigen::VectorXd& params) const;

    Eigen::VectorXd y_;
    Eigen::MatrixXd design_;
    bool ar_;
    bool ma_;
};

/// Log-likelihood of already differenced data under explicit parameters.
/// Rows with any missing value at the edges are dropped; interior gaps are an
/// error. Returns -infinity when the filter breaks down.
[[nodiscard]] double state_space_loglik(const ArmaxParams& params, const Series& y, std::span<const Series> xs);

struct ArimaxFit {
    ArimaxSpec spec;
    std::vector<std::string> names;  ///< "_cons", regressors, "ar_L1", "ma_L1", "sigma"
    Eigen::VectorXd params;          ///< natural scale, ordered as names
    Eigen::MatrixXd vcov;            ///< per spec.vce
    Eigen::MatrixXd vcov_classical;  ///< inverse observed information
    Eigen::MatrixXd vcov_robust;     ///< sandwich, OPG meat
    double loglik = 0.0;
    int nobs = 0;
    Series innovations;  ///< eta-hat on the index of y; missing outside the sample
    bool converged = false;
    bool boundary = false;  ///< |rho| or |theta| within 1e-4 of 1
    int iterations = 0;

    [[nodiscard]] double constant() const { return params(0); }
    [[nodiscard]] double beta(std::size_t i = 0) const { return params(static_cast<Eigen::Index>(1 + i)); }
    [[nodiscard]] std::optional<Eigen::Index> rho_index() const;
    [[nodiscard]] std::optional<Eigen::Index> theta_index() const;
    [[nodiscard]] Eigen::Index sigma_index() const { return params.size() - 1; }
    [[nodiscard]] double rho() const;
    [[nodiscard]] double theta() const;
    [[nodiscard]] double sigma() const { return params(sigma_index()); }
    [[nodiscard]] double se(Eigen::Index i) const;
};

struct ZTestResult {
    double z = 0.0;
    double p_value = 1.0;
};

/// Two-sided normal test of params(i) = 0 using fit.vcov.
[[nodiscard]] ZTestResult z_test(const ArimaxFit& fit, Eigen::Index i);

/// Maximum likelihood fit of y on xs with ARIMA(p, d, q) errors. Both y and
/// the regressors are differenced d times before estimation.
///
/// Starts from OLS on the differenced data (rho from the lag-1 residual
/// autocorrelation, theta = 0), locates the basin with Nelder-Mead and polishes
/// with BFGS on tanh/exp-transformed coordinates. Non-convergence is reported
/// through ArimaxFit::converged, never thrown.
/// Throws std::invalid_argument on bad specs or fewer than 30 usable
/// observations and NumericalError for a degenerate design or a singular
/// Hessian.
[[nodiscard]] ArimaxFit fit_armax(const Series& y, std::span<const Series> xs, const ArimaxSpec& spec = {});
[[nodiscard]] ArimaxFit fit_armax(const Series& y, const Series& x, const ArimaxSpec& spec = {});

/// Sandwich covariance H^-1 (sum g_t g_t') H^-1 at `params`. H is the Hessian
/// of the log-likelihood by central differences of the exact gradient.
/// Throws NumericalError when H is singular.
[[nodiscard]] Eigen::MatrixXd robust_vcov(const ArmaxLikelihood& lik, const Eigen::VectorXd& params);

/// Joint Wald test that the AR and MA coefficients are zero.
/// Throws std::invalid_argument when the model has no ARMA terms.
[[nodiscard]] WaldResult arma_joint_test(const ArimaxFit& fit);

}  // namespace tsaudit
