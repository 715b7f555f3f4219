#include "tsaudit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace tsaudit::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
    const Eigen::Index n = x0.size();
    Result res;
    const auto eval = [&](const Eigen::VectorXd& x) {
        ++res.evaluations;
        return finite_or_inf(f(x));
    };

    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n) + 1, x0);
    std::vector<double> fv(pts.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = opts.step.size() == 1 ? opts.step(0) : opts.step(i);
        pts[static_cast<std::size_t>(i) + 1](i) += h;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) fv[i] = eval(pts[i]);

    std::vector<std::size_t> order(pts.size());
    while (res.evaluations < opts.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];

        double xspread = 0.0;
        for (const auto& p : pts) xspread = std::max(xspread, (p - pts[best]).cwiseAbs().maxCoeff());
        if (std::isfinite(fv[worst]) &&
            (fv[worst] - fv[best] <= opts.ftol * (std::abs(fv[best]) + opts.ftol) || xspread <= opts.xtol)) {
            res.converged = true;
            break;
        }
        ++res.iterations;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i != worst) centroid += pts[i];
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const Eigen::VectorXd xc =
            outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid)) : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[worst])) {
            pts[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == best) continue;
            pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
            fv[i] = eval(pts[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = pts[best];
    res.f = fv[best];
    return res;
}

Result bfgs(const ObjectiveWithGradient& f, const Eigen::VectorXd& x0, const BfgsOptions& opts) {
    const Eigen::Index n = x0.size();
    Result res;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd g(n);
    double fx = f(x, g);
    ++res.evaluations;
    if (!std::isfinite(fx) || !g.allFinite()) {
        res.x = x;
        res.f = fx;
        return res;
    }
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    bool scaled = false;

    Eigen::VectorXd g_new(n);
    for (res.iterations = 0; res.iterations < opts.max_iterations;) {
        ++res.iterations;
        Eigen::VectorXd d = -H * g;
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            H.setIdentity();
            d = -g;
            slope = -g.squaredNorm();
        }

        double alpha = 1.0;
        double f_new = kInf;
        Eigen::VectorXd x_new;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            x_new = x + alpha * d;
            f_new = f(x_new, g_new);
            ++res.evaluations;
            if (std::isfinite(f_new) && g_new.allFinite() && f_new <= fx + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            res.converged = g.cwiseAbs().maxCoeff() < opts.gtol;
            break;
        }

        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd yv = g_new - g;
        const double df = std::abs(f_new - fx);
        const bool small_f = df <= opts.rel_ftol * std::max(std::abs(fx), 1e-300);
        const bool small_x =
            (s.cwiseAbs().array() <= opts.xtol * (1.0 + x.cwiseAbs().array())).all();

        x = x_new;
        fx = f_new;
        g = g_new;
        if (small_f && small_x) {
            res.converged = true;
            break;
        }

        const double sy = s.dot(yv);
        if (sy > 1e-12 * s.norm() * yv.norm()) {
            if (!scaled) {
                H *= sy / yv.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::VectorXd Hy = H * yv;
            H += (rho * rho * yv.dot(Hy) + rho) * (s * s.transpose()) - rho * (Hy * s.transpose() + s * Hy.transpose());
        }
    }
    res.x = x;
    res.f = fx;
    return res;
}

}  // namespace tsaudit::optim
