#include "tsaudit/arimax.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tsaudit/distributions.hpp"
#include "tsaudit/error.hpp"
#include "tsaudit/optimize.hpp"

namespace tsaudit {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
constexpr int kMaxParams = 12;
constexpr double kBoundary = 1e-4;

// Forward-mode dual number carrying N partial derivatives.
template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

    static Dual variable(double value, int i) {
        Dual r(value);
        r.d[static_cast<std::size_t>(i)] = 1.0;
        return r;
    }
};

template <int N>
Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
    Dual<N> r(a.v + b.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
}
template <int N>
Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
    Dual<N> r(a.v - b.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
}
template <int N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
    Dual<N> r(a.v * b.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
}
template <int N>
Dual<N> operator*(double a, const Dual<N>& b) {
    Dual<N> r(a * b.v);
    for (int i = 0; i < N; ++i) r.d[i] = a * b.d[i];
    return r;
}
template <int N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
    const double inv = 1.0 / b.v;
    Dual<N> r(a.v * inv);
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
    return r;
}
template <int N>
Dual<N> log(const Dual<N>& a) {
    Dual<N> r(std::log(a.v));
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] / a.v;
    return r;
}

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Dual<N>& x) {
    return x.v;
}

// Runs the ARMA(1,1) Kalman filter on e_t = y_t - X_t b. The two-element
// state (e_t, theta*eta_t) collapses to five scalars because the observation
// picks the first state exactly. visit(t, loglik_t, v_t, F_t) is called for
// every observation; returns false when F_t turns non-positive or non-finite.
template <class T, class Visit>
bool run_filter(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const std::vector<T>& b, const T& rho,
                const T& theta, const T& sigma, Visit&& visit) {
    const T s2 = sigma * sigma;
    T p00 = s2 * (T(1.0) + T(2.0) * rho * theta + theta * theta) / (T(1.0) - rho * rho);
    T p01 = s2 * theta;
    T p11 = s2 * theta * theta;
    T a0(0.0);
    const Eigen::Index n = y.size();
    const Eigen::Index k = X.cols();
    for (Eigen::Index t = 0; t < n; ++t) {
        T e(y(t));
        for (Eigen::Index j = 0; j < k; ++j) e = e - X(t, j) * b[static_cast<std::size_t>(j)];
        const T v = e - a0;
        const T F = p00;
        if (!(value_of(F) > 0.0) || !std::isfinite(value_of(F))) return false;
        using std::log;
        const T lt = T(-0.5) * (T(kLog2Pi) + log(F) + v * v / F);
        if (!std::isfinite(value_of(lt))) return false;
        visit(t, lt, v, F);
        const T a1f = p01 / F * v;
        const T p11f = p11 - p01 * p01 / F;
        a0 = rho * e + a1f;
        p00 = p11f + s2;
        p01 = s2 * theta;
        p11 = s2 * theta * theta;
    }
    return true;
}

struct Unpacked {
    std::vector<double> b;
    double rho = 0.0;
    double theta = 0.0;
    double sigma = 1.0;
};

template <int N>
struct UnpackedDual {
    std::vector<Dual<N>> b;
    Dual<N> rho;
    Dual<N> theta;
    Dual<N> sigma;
};

template <int N>
UnpackedDual<N> unpack_dual(const Eigen::VectorXd& p, Eigen::Index k, bool ar, bool ma) {
    UnpackedDual<N> u;
    int i = 0;
    for (; i < k; ++i) u.b.push_back(Dual<N>::variable(p(i), i));
    if (ar) {
        u.rho = Dual<N>::variable(p(i), i);
        ++i;
    }
    if (ma) {
        u.theta = Dual<N>::variable(p(i), i);
        ++i;
    }
    u.sigma = Dual<N>::variable(p(i), i);
    return u;
}

// Calls fn.template operator()<N>() with the smallest supported N >= k.
template <class Fn>
decltype(auto) dispatch(Eigen::Index k, Fn&& fn) {
    if (k <= 3) return fn.template operator()<3>();
    if (k <= 4) return fn.template operator()<4>();
    if (k <= 5) return fn.template operator()<5>();
    if (k <= 6) return fn.template operator()<6>();
    if (k <= 8) return fn.template operator()<8>();
    return fn.template operator()<kMaxParams>();
}

// Rows of y and xs that are all observed; the block must be contiguous.
std::vector<std::size_t> usable_rows(const Series& y, std::span<const Series> xs) {
    std::vector<std::size_t> rows;
    for (std::size_t t = 0; t < y.size(); ++t) {
        bool ok = y[t].has_value();
        for (const auto& x : xs) ok = ok && x[t].has_value();
        if (ok) rows.push_back(t);
    }
    if (!rows.empty() && rows.back() - rows.front() + 1 != rows.size()) {
        throw std::invalid_argument("ARMAX data have interior missing values; interpolate first");
    }
    return rows;
}

}  // namespace

ArmaxLikelihood::ArmaxLikelihood(Eigen::VectorXd y, Eigen::MatrixXd design, bool ar, bool ma)
    : y_(std::move(y)), design_(std::move(design)), ar_(ar), ma_(ma) {
    if (design_.rows() != y_.size()) throw std::invalid_argument("design rows must match observations");
    if (num_params() > kMaxParams) throw std::invalid_argument("too many ARMAX parameters");
}

void ArmaxLikelihood::check(const Eigen::VectorXd& params) const {
    if (params.size() != num_params()) throw std::invalid_argument("wrong ARMAX parameter count");
    Eigen::Index i = design_.cols();
    if (ar_ && !(std::abs(params(i++)) < 1.0)) throw std::invalid_argument("AR parameter must satisfy |rho| < 1");
    if (ma_ && !(std::abs(params(i++)) < 1.0)) throw std::invalid_argument("MA parameter must satisfy |theta| < 1");
    if (!(params(i) > 0.0)) throw std::invalid_argument("sigma must be positive");
}

double ArmaxLikelihood::value(const Eigen::VectorXd& params) const {
    check(params);
    const Eigen::Index k = design_.cols();
    Unpacked u;
    u.b.assign(params.data(), params.data() + k);
    Eigen::Index i = k;
    if (ar_) u.rho = params(i++);
    if (ma_) u.theta = params(i++);
    u.sigma = params(i);
    double total = 0.0;
    const bool ok = run_filter(y_, design_, u.b, u.rho, u.theta, u.sigma,
                               [&](Eigen::Index, double lt, double, double) { total += lt; });
    return ok ? total : -std::numeric_limits<double>::infinity();
}

double ArmaxLikelihood::value_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd& gradient) const {
    check(params);
    const Eigen::Index np = num_params();
    gradient.setZero(np);
    return dispatch(np, [&]<int N>() {
        const auto u = unpack_dual<N>(params, design_.cols(), ar_, ma_);
        Dual<N> total(0.0);
        const bool ok = run_filter(y_, design_, u.b, u.rho, u.theta, u.sigma,
                                   [&](Eigen::Index, const Dual<N>& lt, const Dual<N>&, const Dual<N>&) { total = total + lt; });
        if (!ok) {
            gradient.setConstant(std::numeric_limits<double>::quiet_NaN());
            return -std::numeric_limits<double>::infinity();
        }
        for (Eigen::Index i = 0; i < np; ++i) gradient(i) = total.d[static_cast<std::size_t>(i)];
        return total.v;
    });
}

Eigen::MatrixXd ArmaxLikelihood::scores(const Eigen::VectorXd& params) const {
    check(params);
    const Eigen::Index np = num_params();
    Eigen::MatrixXd out(y_.size(), np);
    dispatch(np, [&]<int N>() {
        const auto u = unpack_dual<N>(params, design_.cols(), ar_, ma_);
        const bool ok = run_filter(y_, design_, u.b, u.rho, u.theta, u.sigma,
                                   [&](Eigen::Index t, const Dual<N>& lt, const Dual<N>&, const Dual<N>&) {
                                       for (Eigen::Index i = 0; i < np; ++i) out(t, i) = lt.d[static_cast<std::size_t>(i)];
                                   });
        if (!ok) throw NumericalError("likelihood is not finite at the requested parameters");
        return 0;
    });
    return out;
}

ArmaxLikelihood::Innovations ArmaxLikelihood::innovations(const Eigen::VectorXd& params) const {
    check(params);
    const Eigen::Index k = design_.cols();
    std::vector<double> b(params.data(), params.data() + k);
    Eigen::Index i = k;
    const double rho = ar_ ? params(i++) : 0.0;
    const double theta = ma_ ? params(i++) : 0.0;
    const double sigma = params(i);
    Innovations out{Eigen::VectorXd(y_.size()), Eigen::VectorXd(y_.size())};
    const bool ok = run_filter(y_, design_, b, rho, theta, sigma, [&](Eigen::Index t, double, double v, double F) {
        out.error(t) = v;
        out.variance(t) = F;
    });
    if (!ok) throw NumericalError("likelihood is not finite at the requested parameters");
    return out;
}

double state_space_loglik(const ArmaxParams& params, const Series& y, std::span<const Series> xs) {
    if (params.beta.size() != xs.size()) throw std::invalid_argument("one beta per regressor is required");
    for (const auto& x : xs) {
        if (!x.same_index(y)) throw std::invalid_argument("regressors must share the index of y");
    }
    const auto rows = usable_rows(y, xs);
    if (rows.empty()) throw std::invalid_argument("no complete observations");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto k = static_cast<Eigen::Index>(xs.size()) + 1;
    Eigen::VectorXd yv(n);
    Eigen::MatrixXd X(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto t = rows[static_cast<std::size_t>(i)];
        yv(i) = *y[t];
        X(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < k; ++j) X(i, j) = *xs[static_cast<std::size_t>(j - 1)][t];
    }
    const ArmaxLikelihood lik(std::move(yv), std::move(X), true, true);
    Eigen::VectorXd p(k + 3);
    p(0) = params.constant;
    for (Eigen::Index j = 1; j < k; ++j) p(j) = params.beta[static_cast<std::size_t>(j - 1)];
    p(k) = params.rho;
    p(k + 1) = params.theta;
    p(k + 2) = params.sigma;
    return lik.value(p);
}

std::optional<Eigen::Index> ArimaxFit::rho_index() const {
    if (spec.p == 0) return std::nullopt;
    return sigma_index() - 1 - (spec.q == 1 ? 1 : 0);
}

std::optional<Eigen::Index> ArimaxFit::theta_index() const {
    if (spec.q == 0) return std::nullopt;
    return sigma_index() - 1;
}

double ArimaxFit::rho() const {
    const auto i = rho_index();
    return i ? params(*i) : 0.0;
}

double ArimaxFit::theta() const {
    const auto i = theta_index();
    return i ? params(*i) : 0.0;
}

double ArimaxFit::se(Eigen::Index i) const { return std::sqrt(std::max(0.0, vcov(i, i))); }

ZTestResult z_test(const ArimaxFit& fit, Eigen::Index i) {
    if (i < 0 || i >= fit.params.size()) throw std::out_of_range("parameter index out of range");
    const double se = fit.se(i);
    ZTestResult out;
    if (!(se > 0.0)) throw NumericalError("parameter '" + fit.names[static_cast<std::size_t>(i)] + "' has zero variance");
    out.z = fit.params(i) / se;
    out.p_value = std::min(1.0, 2.0 * dist::normal_cdf(-std::abs(out.z)));
    return out;
}

namespace {

// Hessian of the log-likelihood by central differences of the exact gradient,
// with steps of 1e-4 standard errors as estimated from the score outer product.
Eigen::MatrixXd hessian(const ArmaxLikelihood& lik, const Eigen::VectorXd& params, const Eigen::MatrixXd& meat) {
    const Eigen::Index np = params.size();
    Eigen::MatrixXd H(np, np);
    Eigen::VectorXd gp(np);
    Eigen::VectorXd gm(np);
    for (Eigen::Index j = 0; j < np; ++j) {
        double h = meat(j, j) > 0.0 ? 1e-4 / std::sqrt(meat(j, j)) : 1e-5 * std::max(1.0, std::abs(params(j)));
        // rho, theta and sigma must stay admissible
        if (j >= lik.design().cols()) {
            const double room = j == np - 1 ? params(j) : 1.0 - std::abs(params(j));
            h = std::min(h, 0.5 * room);
        }
        Eigen::VectorXd xp = params;
        Eigen::VectorXd xm = params;
        xp(j) += h;
        xm(j) -= h;
        (void)lik.value_and_gradient(xp, gp);
        (void)lik.value_and_gradient(xm, gm);
        H.col(j) = (gp - gm) / (2.0 * h);
    }
    return 0.5 * (H + H.transpose());
}

Eigen::MatrixXd inverse_negative_definite(const Eigen::MatrixXd& H) {
    const Eigen::MatrixXd info = -H;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success || !H.allFinite()) {
        throw NumericalError("Hessian of the log-likelihood is singular or not negative definite");
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(H.rows(), H.cols()));
    return 0.5 * (inv + inv.transpose());
}

struct Covariances {
    Eigen::MatrixXd classical;
    Eigen::MatrixXd robust;
};

Covariances covariances(const ArmaxLikelihood& lik, const Eigen::VectorXd& params) {
    const Eigen::MatrixXd g = lik.scores(params);
    const Eigen::MatrixXd meat = g.transpose() * g;
    const Eigen::MatrixXd H = hessian(lik, params, meat);
    Covariances out;
    out.classical = inverse_negative_definite(H);
    const Eigen::MatrixXd r = out.classical * meat * out.classical;
    out.robust = 0.5 * (r + r.transpose());
    return out;
}

}  // namespace

Eigen::MatrixXd robust_vcov(const ArmaxLikelihood& lik, const Eigen::VectorXd& params) {
    return covariances(lik, params).robust;
}

ArimaxFit fit_armax(const Series& y, std::span<const Series> xs, const ArimaxSpec& spec) {
    if (spec.p < 0 || spec.p > 1 || spec.q < 0 || spec.q > 1 || spec.d < 0 || spec.d > 1) {
        throw std::invalid_argument("ARMAX orders must be 0 or 1");
    }
    for (const auto& x : xs) {
        if (!x.same_index(y)) throw std::invalid_argument("regressor '" + x.name() + "' is not on the index of '" + y.name() + "'");
    }

    const Series yd = spec.d == 1 ? diff(y, 1) : y;
    std::vector<Series> xd;
    for (const auto& x : xs) xd.push_back(spec.d == 1 ? diff(x, 1) : x);
    const auto rows = usable_rows(yd, xd);
    if (rows.size() < 30) {
        throw std::invalid_argument("ARMAX needs at least 30 usable observations, got " + std::to_string(rows.size()));
    }
    for (const auto& x : xd) {
        bool constant = true;
        for (const auto t : rows) constant = constant && *x[t] == *x[rows.front()];
        if (constant) throw NumericalError("regressor '" + x.name() + "' is constant after differencing");
    }

    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto k = static_cast<Eigen::Index>(xs.size()) + 1;
    Eigen::VectorXd yv(n);
    Eigen::MatrixXd X(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto t = rows[static_cast<std::size_t>(i)];
        yv(i) = *yd[t];
        X(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < k; ++j) X(i, j) = *xd[static_cast<std::size_t>(j - 1)][t];
    }
    const bool ar = spec.p == 1;
    const bool ma = spec.q == 1;
    const ArmaxLikelihood lik(yv, X, ar, ma);
    const Eigen::Index np = lik.num_params();

    // Starting values from OLS on the (differenced) data.
    const LeastSquares ols = least_squares(X, yv);
    Eigen::VectorXd u0(np);
    Eigen::VectorXd step(np);
    u0.head(k) = ols.coef;
    for (Eigen::Index j = 0; j < k; ++j) step(j) = std::max(std::sqrt(ols.vcov(j, j)), 1e-8 * (1.0 + std::abs(ols.coef(j))));
    Eigen::Index pos = k;
    if (ar) {
        double r1 = 0.0;
        double r0 = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) {
            r0 += ols.residuals(t) * ols.residuals(t);
            if (t > 0) r1 += ols.residuals(t) * ols.residuals(t - 1);
        }
        const double rho0 = r0 > 0.0 ? std::clamp(r1 / r0, -0.9, 0.9) : 0.0;
        u0(pos) = std::atanh(rho0);
        step(pos++) = 0.2;
    }
    if (ma) {
        u0(pos) = 0.0;
        step(pos++) = 0.2;
    }
    u0(pos) = 0.5 * std::log(std::max(ols.sigma2, std::numeric_limits<double>::min()));
    step(pos) = 0.1;

    const auto to_natural = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd p = u;
        Eigen::Index i = k;
        if (ar) p(i) = std::tanh(u(i)), ++i;
        if (ma) p(i) = std::tanh(u(i)), ++i;
        p(i) = std::exp(u(i));
        return p;
    };
    const auto admissible = [&](const Eigen::VectorXd& p) {
        Eigen::Index i = k;
        if (ar && !(std::abs(p(i++)) < 1.0)) return false;
        if (ma && !(std::abs(p(i++)) < 1.0)) return false;
        return p(i) > 0.0 && std::isfinite(p(i));
    };

    const optim::Objective objective = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd p = to_natural(u);
        if (!admissible(p)) return std::numeric_limits<double>::infinity();
        return -lik.value(p);
    };
    const optim::ObjectiveWithGradient objective_grad = [&](const Eigen::VectorXd& u, Eigen::VectorXd& g) {
        const Eigen::VectorXd p = to_natural(u);
        if (!admissible(p)) {
            g.setConstant(u.size(), std::numeric_limits<double>::quiet_NaN());
            return std::numeric_limits<double>::infinity();
        }
        Eigen::VectorXd gp;
        const double ll = lik.value_and_gradient(p, gp);
        g = -gp;
        Eigen::Index i = k;
        if (ar) g(i) *= 1.0 - p(i) * p(i), ++i;
        if (ma) g(i) *= 1.0 - p(i) * p(i), ++i;
        g(i) *= p(i);
        return -ll;
    };

    optim::NelderMeadOptions nm_opts;
    nm_opts.step = step;
    nm_opts.max_evaluations = 400 * static_cast<int>(np);
    const optim::Result basin = optim::nelder_mead(objective, u0, nm_opts);
    const optim::Result polish = optim::bfgs(objective_grad, basin.x);

    ArimaxFit fit{.spec = spec,
                  .names = {},
                  .params = to_natural(polish.x),
                  .vcov = {},
                  .vcov_classical = {},
                  .vcov_robust = {},
                  .loglik = -polish.f,
                  .nobs = static_cast<int>(n),
                  .innovations = Series(y.name() + "_innov", y.start(), std::vector<Value>(y.size())),
                  .converged = polish.converged && std::isfinite(polish.f),
                  .boundary = false,
                  .iterations = basin.iterations + polish.iterations};
    fit.names.emplace_back("_cons");
    for (const auto& x : xs) fit.names.push_back(x.name());
    if (ar) fit.names.emplace_back("ar_L1");
    if (ma) fit.names.emplace_back("ma_L1");
    fit.names.emplace_back("sigma");
    fit.boundary = (ar && std::abs(fit.rho()) > 1.0 - kBoundary) || (ma && std::abs(fit.theta()) > 1.0 - kBoundary);

    const auto cov = covariances(lik, fit.params);
    fit.vcov_classical = cov.classical;
    fit.vcov_robust = cov.robust;
    fit.vcov = spec.vce == Vce::Robust ? cov.robust : cov.classical;

    const auto innov = lik.innovations(fit.params);
    std::vector<Value> eta(y.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        eta[rows[static_cast<std::size_t>(i)]] = innov.error(i) / std::sqrt(innov.variance(i)) * fit.sigma();
    }
    fit.innovations = Series(y.name() + "_innov", y.start(), std::move(eta));
    return fit;
}

ArimaxFit fit_armax(const Series& y, const Series& x, const ArimaxSpec& spec) {
    return fit_armax(y, std::span<const Series>(&x, 1), spec);
}

WaldResult arma_joint_test(const ArimaxFit& fit) {
    std::vector<std::size_t> subset;
    if (const auto i = fit.rho_index()) subset.push_back(static_cast<std::size_t>(*i));
    if (const auto i = fit.theta_index()) subset.push_back(static_cast<std::size_t>(*i));
    if (subset.empty()) throw std::invalid_argument("model has no ARMA terms to test");
    return wald_joint(subset, fit.params, fit.vcov);
}

}  // namespace tsaudit
