#include "tsaudit/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "tsaudit/error.hpp"
#include "tsaudit/regress.hpp"

namespace tsaudit {

namespace {

std::vector<double> support_values(const Series& s) {
    const Series support = s.trimmed();
    if (!support.fully_observed()) {
        throw std::invalid_argument("series '" + s.name() + "' has interior missing values");
    }
    return support.observed();
}

// Biased autocovariances c(0..max_lag) about the sample mean.
std::vector<double> autocovariances(const std::vector<double>& z, int max_lag) {
    const auto n = z.size();
    double mean = 0.0;
    for (const double v : z) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> c(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        double acc = 0.0;
        for (std::size_t t = k; t < n; ++t) acc += (z[t] - mean) * (z[t - k] - mean);
        c[k] = acc / static_cast<double>(n);
    }
    return c;
}

void check_lags(std::size_t n, int max_lag) {
    if (max_lag < 1) throw std::invalid_argument("max_lag must be >= 1");
    if (static_cast<std::size_t>(max_lag) >= n) throw std::invalid_argument("max_lag must be below the series length");
}

}  // namespace

DurbinAltResult durbin_alternative(const Series& y, std::span<const Series> xs, int lags, PresampleResiduals presample) {
    if (lags < 1) throw std::invalid_argument("Durbin's alternative test needs lags >= 1");
    const RegressionFit fit = ols_fit(y, xs, true);
    const Series& e = fit.residuals;

    std::vector<std::size_t> rows;
    for (std::size_t t = 0; t < e.size(); ++t) {
        if (!e[t]) continue;
        if (presample == PresampleResiduals::DropRows) {
            bool ok = t >= static_cast<std::size_t>(lags);
            for (int j = 1; ok && j <= lags; ++j) ok = e[t - static_cast<std::size_t>(j)].has_value();
            if (!ok) continue;
        }
        rows.push_back(t);
    }

    const auto k = static_cast<Eigen::Index>(1 + xs.size() + static_cast<std::size_t>(lags));
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n <= k) throw std::invalid_argument("too few observations for the auxiliary regression");
    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto t = rows[static_cast<std::size_t>(i)];
        r(i) = *e[t];
        Eigen::Index c = 0;
        X(i, c++) = 1.0;
        for (const auto& x : xs) X(i, c++) = *x[t];
        for (int j = 1; j <= lags; ++j) {
            const bool available = t >= static_cast<std::size_t>(j) && e[t - static_cast<std::size_t>(j)].has_value();
            X(i, c++) = available ? *e[t - static_cast<std::size_t>(j)] : 0.0;
        }
    }
    const LeastSquares aux = least_squares(X, r);

    std::vector<std::size_t> subset;
    for (int j = 0; j < lags; ++j) subset.push_back(static_cast<std::size_t>(k - lags + j));
    const WaldResult w = wald_joint(subset, aux.coef, aux.vcov);

    return DurbinAltResult{.chi2 = w.statistic,
                           .df = w.df,
                           .p_value = w.p_value,
                           .lags = lags,
                           .nobs = static_cast<int>(n),
                           .presample = presample};
}

DurbinAltResult durbin_alternative(const Series& y, const Series& x, int lags, PresampleResiduals presample) {
    return durbin_alternative(y, std::span<const Series>(&x, 1), lags, presample);
}

std::vector<CorrelogramPoint> acf(const Series& s, int max_lag) {
    const auto z = support_values(s);
    check_lags(z.size(), max_lag);
    const auto c = autocovariances(z, max_lag);
    if (!(c[0] > 0.0)) throw std::invalid_argument("autocorrelation is undefined for a constant series");
    const double band = 1.96 / std::sqrt(static_cast<double>(z.size()));
    std::vector<CorrelogramPoint> out;
    out.reserve(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        out.push_back({static_cast<int>(k), k == 0 ? 1.0 : c[k] / c[0], band});
    }
    return out;
}

std::vector<CorrelogramPoint> pacf(const Series& s, int max_lag) {
    const auto z = support_values(s);
    check_lags(z.size(), max_lag);
    if (2 * static_cast<std::size_t>(max_lag) >= z.size()) throw std::invalid_argument("pacf needs max_lag < n/2");
    const auto c = autocovariances(z, max_lag);
    if (!(c[0] > 0.0)) throw NumericalError("pacf: Toeplitz system is singular (constant series)");
    std::vector<double> r(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) r[k] = c[k] / c[0];

    const double band = 1.96 / std::sqrt(static_cast<double>(z.size()));
    std::vector<CorrelogramPoint> out;
    std::vector<double> phi;  // phi[j-1] = phi_{k,j}
    double v = 1.0;           // innovation variance ratio
    for (int k = 1; k <= max_lag; ++k) {
        double num = r[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) num -= phi[static_cast<std::size_t>(j - 1)] * r[static_cast<std::size_t>(k - j)];
        if (!(v > 1e-14)) throw NumericalError("pacf: Toeplitz system is singular");
        const double a = num / v;
        std::vector<double> next(static_cast<std::size_t>(k));
        for (int j = 1; j < k; ++j) {
            next[static_cast<std::size_t>(j - 1)] =
                phi[static_cast<std::size_t>(j - 1)] - a * phi[static_cast<std::size_t>(k - j - 1)];
        }
        next[static_cast<std::size_t>(k - 1)] = a;
        phi = std::move(next);
        v *= (1.0 - a * a);
        out.push_back({k, a, band});
    }
    return out;
}

std::vector<CorrelogramPoint> pacf_regression(const Series& s, int max_lag) {
    const auto z = support_values(s);
    check_lags(z.size(), max_lag);
    const auto n = static_cast<Eigen::Index>(z.size());
    double mean = 0.0;
    for (const double v : z) mean += v;
    mean /= static_cast<double>(n);

    // Regressing on the demeaned series padded with zeros at both ends makes
    // the normal equations exactly the sample Yule-Walker system.
    const double band = 1.96 / std::sqrt(static_cast<double>(n));
    std::vector<CorrelogramPoint> out;
    for (int k = 1; k <= max_lag; ++k) {
        const Eigen::Index rows = n + k;
        Eigen::MatrixXd X = Eigen::MatrixXd::Zero(rows, k);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (r < n) y(r) = z[static_cast<std::size_t>(r)] - mean;
            for (Eigen::Index j = 1; j <= k; ++j) {
                const Eigen::Index src = r - j;
                if (src >= 0 && src < n) X(r, j - 1) = z[static_cast<std::size_t>(src)] - mean;
            }
        }
        const LeastSquares ls = least_squares(X, y);
        out.push_back({k, ls.coef(k - 1), band});
    }
    return out;
}

PlotSpec residual_lag_scatter(const Series& residuals) {
    if (residuals.count_observed() < 3) throw std::invalid_argument("residual scatter needs at least 3 residuals");
    PlotSpec plot;
    plot.kind = PlotKind::Scatter;
    plot.title = "Residuals against lagged residuals";
    plot.x_label = "Residuals, lag 1";
    plot.y_label = "Residuals";

    const auto values = residuals.observed();
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double denom = 0.0;
    for (const double v : values) denom += (v - mean) * (v - mean);

    double cross = 0.0;
    for (std::size_t t = 1; t < residuals.size(); ++t) {
        if (residuals[t] && residuals[t - 1]) {
            plot.points.push_back({*residuals[t - 1], *residuals[t]});
            cross += (*residuals[t] - mean) * (*residuals[t - 1] - mean);
        }
    }
    if (denom > 0.0) plot.line_slope = cross / denom;
    return plot;
}

PlotSpec correlogram_plot(std::span<const CorrelogramPoint> points, std::string title, std::string y_label) {
    PlotSpec plot;
    plot.kind = PlotKind::Correlogram;
    plot.title = std::move(title);
    plot.x_label = "Lag";
    plot.y_label = std::move(y_label);
    for (const auto& p : points) plot.points.push_back({static_cast<double>(p.lag), p.value});
    if (!points.empty()) plot.band = points.front().conf_band;
    return plot;
}

}  // namespace tsaudit
