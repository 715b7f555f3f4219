#include "tsaudit/audit.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "tsaudit/error.hpp"
#include "tsaudit/regress.hpp"
#include "tsaudit/unitroot.hpp"

namespace tsaudit {

namespace {

std::string fmt(double v, int digits = 2) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string fmt_p(double p) { return p < 0.001 ? "p < 0.001" : "p = " + fmt(p, 3); }

std::string percent(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g%%", alpha * 100.0);
    return buf;
}

std::string order_string(const ArimaxSpec& s) {
    return "(" + std::to_string(s.p) + "," + std::to_string(s.d) + "," + std::to_string(s.q) + ")";
}

void add_correlogram_stats(AuditStep& step, const std::vector<CorrelogramPoint>& ac,
                           const std::vector<CorrelogramPoint>& pac) {
    for (const auto& p : ac) {
        if (p.lag > 0) step.statistics.push_back({"acf_" + std::to_string(p.lag), p.value});
    }
    for (const auto& p : pac) step.statistics.push_back({"pacf_" + std::to_string(p.lag), p.value});
    step.statistics.push_back({"band", ac.front().conf_band});
}

int outside_band(const std::vector<CorrelogramPoint>& pts) {
    int count = 0;
    for (const auto& p : pts) {
        if (p.lag > 0 && std::abs(p.value) > p.conf_band) ++count;
    }
    return count;
}

struct StepFailed {
    AuditFailure failure;
};

}  // namespace

void validate(const AuditConfig& cfg) {
    if (cfg.durbin_lags < 1 || cfg.adf_lags < 1 || cfg.acf_lags < 1) throw std::invalid_argument("lag settings must be >= 1");
    if (cfg.y_column.empty() || cfg.x_column.empty()) throw std::invalid_argument("both y and x columns are required");
    if (cfg.y_column == cfg.x_column) throw std::invalid_argument("y and x columns must differ");
    for (const double a : {cfg.thresholds.durbin_alpha, cfg.thresholds.adf_alpha, cfg.thresholds.beta_alpha}) {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("verdict thresholds must lie in (0, 1)");
    }
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::LevelsRelationshipSupported: return "levels-relationship-supported";
        case Verdict::SpuriousLevelsRelationship: return "spurious-levels-relationship";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Verdict parse_verdict(std::string_view s) {
    for (const auto v : {Verdict::LevelsRelationshipSupported, Verdict::SpuriousLevelsRelationship, Verdict::Inconclusive}) {
        if (to_string(v) == s) return v;
    }
    throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

std::optional<double> AuditStep::find(std::string_view key) const {
    for (const auto& s : statistics) {
        if (s.name == key) return s.value;
    }
    return std::nullopt;
}

double AuditStep::stat(std::string_view key) const {
    if (const auto v = find(key)) return *v;
    throw std::out_of_range("step '" + name + "' has no statistic '" + std::string(key) + "'");
}

const AuditStep* AuditReport::step(std::string_view key) const noexcept {
    for (const auto& s : steps) {
        if (s.name == key) return &s;
    }
    return nullptr;
}

Verdict derive_verdict(const AuditReport& report) {
    const auto get = [&](std::string_view step, std::string_view stat) -> std::optional<double> {
        const AuditStep* s = report.step(step);
        return s ? s->find(stat) : std::nullopt;
    };
    const auto& th = report.thresholds;
    const auto durbin_p = get("levels_durbin_alt", "p");
    const auto levels_slope_p = get("levels_ols", "slope_p");
    const auto adf_y = get("levels_adf", "y_p");
    const auto adf_x = get("levels_adf", "x_p");
    const auto diff_p = get("differences_ols", "slope_p");
    const auto armax_p = get("armax_fit", "beta_p");

    if (durbin_p && adf_y && adf_x && diff_p && armax_p && *durbin_p <= th.durbin_alpha && *adf_y > th.adf_alpha &&
        *adf_x > th.adf_alpha && *diff_p > th.beta_alpha && *armax_p > th.beta_alpha) {
        return Verdict::SpuriousLevelsRelationship;
    }
    if (durbin_p && levels_slope_p && *durbin_p > th.durbin_alpha && *levels_slope_p <= th.beta_alpha) {
        return Verdict::LevelsRelationshipSupported;
    }
    return Verdict::Inconclusive;
}

std::string digest(std::span<const Series> inputs) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    const auto mix = [&](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xFFu;
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& s : inputs) {
        for (const char c : s.name()) mix(static_cast<unsigned char>(c));
        mix(static_cast<std::uint64_t>(s.start().encoded()));
        for (const auto& v : s.values()) mix(v ? std::bit_cast<std::uint64_t>(*v) : 0x7ff8dead0000beefull);
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

AuditReport run_audit(const Dataset& data, const AuditConfig& cfg) {
    validate(cfg);
    AuditReport report;
    report.source = data.provenance().source;
    report.y_column = cfg.y_column;
    report.x_column = cfg.x_column;
    report.interpolate = cfg.interpolate;
    report.durbin_lags = cfg.durbin_lags;
    report.adf_lags = cfg.adf_lags;
    report.acf_lags = cfg.acf_lags;
    report.arimax_order = order_string(cfg.arimax);
    report.vce = cfg.arimax.vce == Vce::Robust ? "robust" : "classical";
    report.durbin_presample = cfg.presample == PresampleResiduals::ZeroFill ? "zero-fill" : "drop-rows";
    report.thresholds = cfg.thresholds;

    const auto th = cfg.thresholds;
    std::size_t next = 0;
    const auto run_step = [&](std::string_view name, std::string title, const std::function<void(AuditStep&)>& body) {
        AuditStep step;
        step.name = std::string(name);
        step.title = std::move(title);
        if (kPipelineSteps.at(next++) != name) throw std::logic_error("audit step out of order");
        try {
            body(step);
        } catch (const NumericalError& e) {
            throw StepFailed{{step.name, "numerical", e.what()}};
        } catch (const std::exception& e) {
            throw StepFailed{{step.name, "input", e.what()}};
        }
        report.steps.push_back(std::move(step));
    };

    try {
        // Shared state flows forward through the pipeline.
        std::optional<Series> y;
        std::optional<Series> x;
        std::optional<Series> xi;
        std::optional<Series> dy;
        std::optional<Series> dx;
        std::optional<RegressionFit> diff_fit;
        std::optional<ArimaxFit> armax;

        run_step("load_interpolate", "Load data and interpolate the regressor", [&](AuditStep& s) {
            y = data.column(cfg.y_column);
            x = data.column(cfg.x_column);
            const std::array<Series, 2> raw{*y, *x};
            s.inputs_digest = digest(raw);
            xi = cfg.interpolate ? interpolate_linear(*x) : *x;
            const auto filled = xi->count_observed() - x->count_observed();
            s.statistics = {{"months", static_cast<double>(y->size())},
                            {"start_year", static_cast<double>(y->start().year())},
                            {"start_month", static_cast<double>(y->start().month())},
                            {"y_observed", static_cast<double>(y->count_observed())},
                            {"x_observed", static_cast<double>(x->count_observed())},
                            {"x_interpolated", static_cast<double>(filled)}};
            s.interpretation = std::to_string(y->size()) + " months from " + y->start().to_string() + " to " +
                               y->end().to_string() + "; " + std::to_string(filled) + " missing value(s) of '" +
                               cfg.x_column + "' " + (cfg.interpolate ? "linearly interpolated" : "left missing (interpolation off)") + ".";
        });

        const std::array<Series, 2> levels{*y, *xi};
        std::optional<RegressionFit> levels_fit;
        run_step("levels_ols", "Levels correlation and OLS regression", [&](AuditStep& s) {
            s.inputs_digest = digest(levels);
            const CorrResult corr = pearson_corr(*y, *xi);
            levels_fit = ols_fit(*y, *xi);
            const TTestResult tt = t_test(*levels_fit, 1);
            s.statistics = {{"r", corr.r},
                            {"r_p", corr.p_value},
                            {"r_nobs", static_cast<double>(corr.nobs)},
                            {"intercept", levels_fit->coef(0)},
                            {"slope", levels_fit->coef(1)},
                            {"slope_se", levels_fit->se(1)},
                            {"slope_t", tt.t},
                            {"slope_p", tt.p_value},
                            {"r_squared", levels_fit->r_squared},
                            {"nobs", static_cast<double>(levels_fit->nobs)}};
            s.interpretation = "Levels correlation r = " + fmt(corr.r) + " (" + fmt_p(corr.p_value) + "); OLS slope " +
                               fmt(levels_fit->coef(1), 4) + " (t = " + fmt(tt.t) + ", " + fmt_p(tt.p_value) +
                               "). These OLS standard errors assume serially uncorrelated errors.";
        });

        run_step("levels_residual_scatter", "Residuals against lagged residuals (levels regression)", [&](AuditStep& s) {
            const std::array<Series, 1> in{levels_fit->residuals};
            s.inputs_digest = digest(in);
            PlotSpec plot = residual_lag_scatter(levels_fit->residuals);
            plot.title = "Levels OLS: residuals against lagged residuals";
            const double slope = plot.line_slope.value_or(0.0);
            s.statistics = {{"lag1_slope", slope}, {"points", static_cast<double>(plot.points.size())}};
            s.plots = {"residual_lag_scatter.svg"};
            report.plots.push_back({"residual_lag_scatter.svg", std::move(plot)});
            s.interpretation = "Lag-1 residual autocorrelation " + fmt(slope) +
                               (std::abs(slope) > 0.5 ? ": strong first-order autocorrelation." : ".");
        });

        run_step("levels_durbin_alt", "Durbin's alternative test (levels)", [&](AuditStep& s) {
            s.inputs_digest = digest(levels);
            const auto d = durbin_alternative(*y, *xi, cfg.durbin_lags, cfg.presample);
            s.statistics = {{"chi2", d.chi2}, {"df", static_cast<double>(d.df)}, {"p", d.p_value}, {"nobs", static_cast<double>(d.nobs)}};
            const bool reject = d.p_value <= th.durbin_alpha;
            s.interpretation = "Durbin's alternative test: chi2(" + std::to_string(d.df) + ") = " + fmt(d.chi2) + ", " +
                               fmt_p(d.p_value) + "; " +
                               (reject ? "no serial correlation is rejected at the " : "no serial correlation is not rejected at the ") +
                               percent(th.durbin_alpha) + " level.";
        });

        const auto adf_stats = [&](AuditStep& s, const Series& ys, const Series& xs, const std::string& what) {
            const std::array<Series, 2> in{ys, xs};
            s.inputs_digest = digest(in);
            const AdfResult ay = adf_test(ys, cfg.adf_lags);
            const AdfResult ax = adf_test(xs, cfg.adf_lags);
            s.statistics = {{"lags", static_cast<double>(cfg.adf_lags)},
                            {"y_tau", ay.tau},
                            {"y_p", ay.p_value},
                            {"y_p_raw", ay.p_value_raw},
                            {"y_nobs", static_cast<double>(ay.nobs_used)},
                            {"x_tau", ax.tau},
                            {"x_p", ax.p_value},
                            {"x_p_raw", ax.p_value_raw},
                            {"x_nobs", static_cast<double>(ax.nobs_used)}};
            const auto verdict = [&](double p) {
                return p > th.adf_alpha ? std::string("unit root not rejected") : std::string("unit root rejected");
            };
            s.interpretation = "ADF with constant, " + std::to_string(cfg.adf_lags) + " lags, " + what + ": '" +
                               cfg.y_column + "' tau = " + fmt(ay.tau) + " (MacKinnon approximate " + fmt_p(ay.p_value) +
                               ", " + verdict(ay.p_value) + "); '" + cfg.x_column + "' tau = " + fmt(ax.tau) + " (" +
                               fmt_p(ax.p_value) + ", " + verdict(ax.p_value) + ") at the " + percent(th.adf_alpha) + " level.";
        };

        run_step("levels_adf", "Augmented Dickey-Fuller tests (levels)",
                 [&](AuditStep& s) { adf_stats(s, *y, *xi, "levels"); });

        run_step("differences_adf", "Augmented Dickey-Fuller tests (first differences)", [&](AuditStep& s) {
            dy = diff(*y);
            dx = diff(*xi);
            adf_stats(s, *dy, *dx, "first differences");
        });

        run_step("differences_ols", "OLS, correlation and Durbin's alternative test (first differences)", [&](AuditStep& s) {
            const std::array<Series, 2> in{*dy, *dx};
            s.inputs_digest = digest(in);
            diff_fit = ols_fit(*dy, *dx);
            const TTestResult tt = t_test(*diff_fit, 1);
            const CorrResult corr = pearson_corr(*dy, *dx);
            const auto d = durbin_alternative(*dy, *dx, cfg.durbin_lags, cfg.presample);
            s.statistics = {{"intercept", diff_fit->coef(0)},
                            {"slope", diff_fit->coef(1)},
                            {"slope_se", diff_fit->se(1)},
                            {"slope_t", tt.t},
                            {"slope_p", tt.p_value},
                            {"r_squared", diff_fit->r_squared},
                            {"nobs", static_cast<double>(diff_fit->nobs)},
                            {"r", corr.r},
                            {"r_p", corr.p_value},
                            {"durbin_chi2", d.chi2},
                            {"durbin_df", static_cast<double>(d.df)},
                            {"durbin_p", d.p_value}};
            s.interpretation = "Differenced correlation r = " + fmt(corr.r) + " (" + fmt_p(corr.p_value) +
                               "); differenced OLS slope " + fmt(diff_fit->coef(1), 4) + " (" + fmt_p(tt.p_value) +
                               "). Durbin's alternative test: chi2(" + std::to_string(d.df) + ") = " + fmt(d.chi2) + ", " +
                               fmt_p(d.p_value) + ".";
        });

        run_step("differences_correlogram", "ACF and PACF of the differenced-regression residuals", [&](AuditStep& s) {
            const std::array<Series, 1> in{diff_fit->residuals};
            s.inputs_digest = digest(in);
            const auto ac = acf(diff_fit->residuals, cfg.acf_lags);
            const auto pac = pacf(diff_fit->residuals, cfg.acf_lags);
            add_correlogram_stats(s, ac, pac);
            s.plots = {"differences_acf.svg", "differences_pacf.svg"};
            report.plots.push_back({"differences_acf.svg", correlogram_plot(ac, "ACF of differenced-regression residuals", "Autocorrelation")});
            report.plots.push_back({"differences_pacf.svg", correlogram_plot(pac, "PACF of differenced-regression residuals", "Partial autocorrelation")});
            s.interpretation = std::to_string(outside_band(ac)) + " of " + std::to_string(cfg.acf_lags) +
                               " autocorrelations and " + std::to_string(outside_band(pac)) +
                               " partial autocorrelations fall outside the 95% band; lag-1 ACF " + fmt(ac[1].value) + ".";
        });

        run_step("armax_fit", "Regression with ARIMA" + order_string(cfg.arimax) + " errors", [&](AuditStep& s) {
            s.inputs_digest = digest(levels);
            armax = fit_armax(*y, *xi, cfg.arimax);
            const ZTestResult zb = z_test(*armax, 1);
            s.statistics = {{"constant", armax->constant()}, {"beta", armax->beta()}, {"beta_se", armax->se(1)},
                            {"beta_z", zb.z},               {"beta_p", zb.p_value}};
            if (const auto i = armax->rho_index()) {
                s.statistics.push_back({"rho", armax->params(*i)});
                s.statistics.push_back({"rho_se", armax->se(*i)});
            }
            if (const auto i = armax->theta_index()) {
                s.statistics.push_back({"theta", armax->params(*i)});
                s.statistics.push_back({"theta_se", armax->se(*i)});
            }
            s.statistics.push_back({"sigma", armax->sigma()});
            s.statistics.push_back({"sigma_se", armax->se(armax->sigma_index())});
            s.statistics.push_back({"loglik", armax->loglik});
            s.statistics.push_back({"nobs", static_cast<double>(armax->nobs)});
            s.statistics.push_back({"converged", armax->converged ? 1.0 : 0.0});
            s.statistics.push_back({"boundary", armax->boundary ? 1.0 : 0.0});
            s.statistics.push_back({"iterations", static_cast<double>(armax->iterations)});
            report.armax_converged = armax->converged;
            std::string text = "Exact maximum likelihood with " + report.vce + " standard errors";
            if (cfg.arimax.d == 1) text += ", estimated in first differences of both '" + cfg.y_column + "' and '" + cfg.x_column + "'";
            text += ": beta = " + fmt(armax->beta(), 4) + " (z = " + fmt(zb.z) + ", " + fmt_p(zb.p_value) + ", " +
                    (zb.p_value <= th.beta_alpha ? "significant" : "not significant") + " at the " + percent(th.beta_alpha) + " level)";
            if (cfg.arimax.p == 1) text += ", rho = " + fmt(armax->rho(), 3);
            if (cfg.arimax.q == 1) text += ", theta = " + fmt(armax->theta(), 3);
            text += ".";
            if (!armax->converged) text += " WARNING: the optimizer did not converge; estimates are the last iterate.";
            if (armax->boundary) text += " WARNING: an ARMA parameter is at the stationarity/invertibility boundary.";
            s.interpretation = std::move(text);
        });

        run_step("arma_joint_test", "Joint Wald test of the ARMA parameters", [&](AuditStep& s) {
            s.inputs_digest = digest(levels);
            const WaldResult w = arma_joint_test(*armax);
            s.statistics = {{"chi2", w.statistic}, {"df", static_cast<double>(w.df)}, {"p", w.p_value}};
            s.interpretation = "chi2(" + std::to_string(w.df) + ") = " + fmt(w.statistic) + ", " + fmt_p(w.p_value) + ": ARMA terms " +
                               (w.p_value <= 0.05 ? "jointly significant" : "not jointly significant") + " at the 5% level.";
        });

        run_step("innovation_correlogram", "ACF and PACF of the ARMAX innovations", [&](AuditStep& s) {
            const std::array<Series, 1> in{armax->innovations};
            s.inputs_digest = digest(in);
            const auto ac = acf(armax->innovations, cfg.acf_lags);
            const auto pac = pacf(armax->innovations, cfg.acf_lags);
            const auto eta = armax->innovations.observed();
            double mean = 0.0;
            for (const double v : eta) mean += v;
            mean /= static_cast<double>(eta.size());
            s.statistics.push_back({"mean", mean});
            add_correlogram_stats(s, ac, pac);
            s.plots = {"innovations_acf.svg", "innovations_pacf.svg"};
            report.plots.push_back({"innovations_acf.svg", correlogram_plot(ac, "ACF of ARMAX innovations", "Autocorrelation")});
            report.plots.push_back({"innovations_pacf.svg", correlogram_plot(pac, "PACF of ARMAX innovations", "Partial autocorrelation")});
            s.interpretation = std::to_string(outside_band(ac)) + " of " + std::to_string(cfg.acf_lags) +
                               " innovation autocorrelations fall outside the 95% band; lag-1 ACF " + fmt(ac[1].value) + ".";
        });
    } catch (const StepFailed& f) {
        report.truncated = true;
        report.failure = f.failure;
    }

    report.verdict = derive_verdict(report);
    return report;
}

AuditReport run_audit(const AuditConfig& cfg) {
    validate(cfg);
    CsvSelection sel = cfg.csv;
    sel.value_columns = {cfg.y_column, cfg.x_column};
    try {
        const Dataset data = load_csv(cfg.input, sel);
        return run_audit(data, cfg);
    } catch (const InputError& e) {
        AuditReport report;
        report.source = cfg.input.string();
        report.y_column = cfg.y_column;
        report.x_column = cfg.x_column;
        report.thresholds = cfg.thresholds;
        report.truncated = true;
        report.failure = AuditFailure{std::string(kPipelineSteps.front()), "input", e.what()};
        report.verdict = Verdict::Inconclusive;
        return report;
    }
}

}  // namespace tsaudit
