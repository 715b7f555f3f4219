#pragma once

#include <span>
#include <vector>

#include "tsaudit/plot.hpp"
#include "tsaudit/series.hpp"

namespace tsaudit {

/// How the auxiliary regression treats lagged residuals that fall before the
/// first usable observation.
enum class PresampleResiduals {
    ZeroFill,  ///< replace with zero and keep every observation
    DropRows,  ///< drop observations whose lags are unavailable
};

struct DurbinAltResult {
    double chi2 = 0.0;
    int df = 0;
    double p_value = 1.0;
    int lags = 0;
    int nobs = 0;  ///< rows in the auxiliary regression
    PresampleResiduals presample = PresampleResiduals::ZeroFill;
};

/// Durbin's alternative test for serial correlation of order 1..lags.
///
/// Regresses y on xs (with a constant), then regresses the residuals on the
/// same regressors plus `lags` lagged residuals. The statistic is the Wald
/// chi-squared for joint nullity of the lagged-residual coefficients.
/// Throws std::invalid_argument when lags < 1 or the data are too short and
/// NumericalError when the auxiliary design is rank deficient.
[[nodiscard]] DurbinAltResult durbin_alternative(const Series& y, std::span<const Series> xs, int lags,
                                                 PresampleResiduals presample = PresampleResiduals::ZeroFill);
[[nodiscard]] DurbinAltResult durbin_alternative(const Series& y, const Series& x, int lags,
                                                 PresampleResiduals presample = PresampleResiduals::ZeroFill);

struct CorrelogramPoint {
    int lag = 0;
    double value = 0.0;
    double conf_band = 0.0;  ///< 1.96 / sqrt(n)
};

/// Sample autocorrelations for lags 0..max_lag with the common (full-sample)
/// denominator. The series is trimmed to its observed support first, which
/// must contain no gaps.
[[nodiscard]] std::vector<CorrelogramPoint> acf(const Series& s, int max_lag);

/// Partial autocorrelations for lags 1..max_lag by Durbin-Levinson recursion
/// on the sample ACF. Requires max_lag < n/2.
[[nodiscard]] std::vector<CorrelogramPoint> pacf(const Series& s, int max_lag);

/// Partial autocorrelations computed independently: for each k, the last
/// coefficient of an OLS regression of s_t on a constant and k lags.
[[nodiscard]] std::vector<CorrelogramPoint> pacf_regression(const Series& s, int max_lag);

/// Scatter of (e_{t-1}, e_t) over adjacent observed pairs, with a reference
/// line through the origin whose slope is the lag-1 autocorrelation.
/// Throws std::invalid_argument with fewer than 3 residuals.
[[nodiscard]] PlotSpec residual_lag_scatter(const Series& residuals);

[[nodiscard]] PlotSpec correlogram_plot(std::span<const CorrelogramPoint> points, std::string title,
                                        std::string y_label);

}  // namespace tsaudit
