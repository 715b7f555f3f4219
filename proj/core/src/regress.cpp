#include "tsaudit/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsaudit/distributions.hpp"
#include "tsaudit/error.hpp"

namespace tsaudit {

namespace {

constexpr double kRankTolerance = 1e-12;

}  // namespace

LeastSquares least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (y.size() != n) throw std::invalid_argument("design and response lengths differ");
    if (k == 0) throw std::invalid_argument("design matrix has no columns");
    if (n <= k) {
        throw std::invalid_argument("too few observations: " + std::to_string(n) + " rows for " + std::to_string(k) +
                                    " coefficients");
    }

    Eigen::VectorXd scale = X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (!(scale(j) > 0.0) || !std::isfinite(scale(j))) throw NumericalError("rank-deficient design: zero column");
    }
    const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Xs);
    const Eigen::MatrixXd R = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const double rmax = R.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (std::abs(R(j, j)) <= kRankTolerance * rmax) throw NumericalError("rank-deficient design matrix");
    }

    const Eigen::VectorXd qty = (qr.householderQ().transpose() * y).head(k);
    const Eigen::VectorXd bs = R.triangularView<Eigen::Upper>().solve(qty);

    LeastSquares out;
    out.coef = bs.cwiseQuotient(scale);
    out.residuals = y - X * out.coef;
    out.rss = out.residuals.squaredNorm();
    out.nobs = static_cast<int>(n);
    out.dof_resid = static_cast<int>(n - k);
    out.sigma2 = out.rss / out.dof_resid;

    // (Xs'Xs)^-1 = R^-1 R^-T
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd xtx_inv = Rinv * Rinv.transpose();
    xtx_inv = scale.cwiseInverse().asDiagonal() * xtx_inv * scale.cwiseInverse().asDiagonal();
    out.vcov = out.sigma2 * 0.5 * (xtx_inv + xtx_inv.transpose());
    return out;
}

double RegressionFit::se(std::size_t i) const {
    return std::sqrt(std::max(0.0, vcov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))));
}

RegressionFit ols_fit(const Series& y, std::span<const Series> xs, bool intercept) {
    for (const auto& x : xs) {
        if (!x.same_index(y)) throw std::invalid_argument("regressor '" + x.name() + "' is not on the index of '" + y.name() + "'");
    }
    std::vector<std::size_t> rows;
    for (std::size_t t = 0; t < y.size(); ++t) {
        bool complete = y[t].has_value();
        for (const auto& x : xs) complete = complete && x[t].has_value();
        if (complete) rows.push_back(t);
    }
    const auto k = xs.size() + (intercept ? 1 : 0);
    if (k == 0) throw std::invalid_argument("regression needs at least one coefficient");
    if (rows.size() <= k) {
        throw std::invalid_argument("too few complete observations (" + std::to_string(rows.size()) + ") for " +
                                    std::to_string(k) + " coefficients");
    }

    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(k));
    Eigen::VectorXd Y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto t = rows[static_cast<std::size_t>(i)];
        Y(i) = *y[t];
        Eigen::Index c = 0;
        if (intercept) X(i, c++) = 1.0;
        for (const auto& x : xs) X(i, c++) = *x[t];
    }

    const LeastSquares ls = least_squares(X, Y);

    RegressionFit fit{.names = {},
                      .coef = ls.coef,
                      .vcov = ls.vcov,
                      .residuals = Series(y.name() + "_resid", y.start(), std::vector<Value>(y.size())),
                      .nobs = ls.nobs,
                      .dof_resid = ls.dof_resid,
                      .r_squared = 0.0,
                      .sigma2 = ls.sigma2,
                      .rss = ls.rss,
                      .intercept = intercept};
    if (intercept) fit.names.emplace_back("_cons");
    for (const auto& x : xs) fit.names.push_back(x.name());

    std::vector<Value> resid(y.size());
    for (Eigen::Index i = 0; i < n; ++i) resid[rows[static_cast<std::size_t>(i)]] = ls.residuals(i);
    fit.residuals = Series(y.name() + "_resid", y.start(), std::move(resid));

    const double tss = intercept ? (Y.array() - Y.mean()).square().sum() : Y.squaredNorm();
    fit.r_squared = tss > 0.0 ? std::clamp(1.0 - ls.rss / tss, 0.0, 1.0) : 1.0;
    return fit;
}

RegressionFit ols_fit(const Series& y, const Series& x, bool intercept) {
    return ols_fit(y, std::span<const Series>(&x, 1), intercept);
}

TTestResult t_test(const RegressionFit& fit, std::size_t coef_index) {
    if (coef_index >= static_cast<std::size_t>(fit.coef.size())) throw std::out_of_range("coefficient index out of range");
    const double b = fit.coef(static_cast<Eigen::Index>(coef_index));
    const double se = fit.se(coef_index);
    TTestResult out;
    if (se == 0.0) {
        out.degenerate = true;
        if (b == 0.0) {
            out.t = 0.0;
            out.p_value = 1.0;
        } else {
            out.t = std::copysign(std::numeric_limits<double>::infinity(), b);
            out.p_value = 0.0;
        }
        return out;
    }
    out.t = b / se;
    out.p_value = dist::student_t_two_sided(out.t, fit.dof_resid);
    return out;
}

CorrResult pearson_corr(const Series& a, const Series& b) {
    if (!a.same_index(b)) throw std::invalid_argument("correlation inputs must share one index");
    std::vector<double> xa;
    std::vector<double> xb;
    for (std::size_t t = 0; t < a.size(); ++t) {
        if (a[t] && b[t]) {
            xa.push_back(*a[t]);
            xb.push_back(*b[t]);
        }
    }
    const auto n = xa.size();
    if (n < 3) throw std::invalid_argument("correlation needs at least 3 complete pairs");
    const Eigen::Map<const Eigen::VectorXd> va(xa.data(), static_cast<Eigen::Index>(n));
    const Eigen::Map<const Eigen::VectorXd> vb(xb.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd ca = va.array() - va.mean();
    const Eigen::VectorXd cb = vb.array() - vb.mean();
    const double saa = ca.squaredNorm();
    const double sbb = cb.squaredNorm();
    if (saa == 0.0 || sbb == 0.0) throw std::invalid_argument("correlation is undefined for a constant input");

    CorrResult out;
    out.nobs = static_cast<int>(n);
    // Products are formed symmetrically so corr(a, b) == corr(b, a) bit for bit.
    out.r = std::clamp(ca.dot(cb) / std::sqrt(saa * sbb), -1.0, 1.0);
    const double dof = static_cast<double>(n) - 2.0;
    const double one_minus = 1.0 - out.r * out.r;
    if (one_minus <= 0.0) {
        out.t_stat = std::copysign(std::numeric_limits<double>::infinity(), out.r);
        out.p_value = 0.0;
    } else {
        out.t_stat = out.r * std::sqrt(dof / one_minus);
        out.p_value = dist::student_t_two_sided(out.t_stat, dof);
    }
    return out;
}

WaldResult wald_joint(std::span<const std::size_t> subset, const Eigen::VectorXd& coef, const Eigen::MatrixXd& vcov) {
    if (subset.empty()) throw std::invalid_argument("Wald test needs a nonempty coefficient subset");
    const auto m = static_cast<Eigen::Index>(subset.size());
    Eigen::VectorXd c(m);
    Eigen::MatrixXd V(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto si = static_cast<Eigen::Index>(subset[static_cast<std::size_t>(i)]);
        if (si >= coef.size() || si >= vcov.rows()) throw std::out_of_range("Wald subset index out of range");
        c(i) = coef(si);
        for (Eigen::Index j = 0; j < m; ++j) V(i, j) = vcov(si, static_cast<Eigen::Index>(subset[static_cast<std::size_t>(j)]));
    }
    V = 0.5 * (V + V.transpose());
    Eigen::LDLT<Eigen::MatrixXd> ldlt(V);
    const double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(dmax > 0.0) ||
        ldlt.vectorD().minCoeff() <= 1e-14 * dmax) {
        throw NumericalError("Wald test covariance block is singular");
    }
    WaldResult out;
    out.df = static_cast<int>(m);
    out.statistic = std::max(0.0, c.dot(ldlt.solve(c)));
    out.p_value = dist::chi2_upper(out.statistic, out.df);
    return out;
}

}  // namespace tsaudit
