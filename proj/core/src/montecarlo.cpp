#include "tsaudit/montecarlo.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tsaudit/regress.hpp"

namespace tsaudit::mc {

std::string to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::WhiteNoise: return "white-noise";
        case ProcessKind::RandomWalk: return "random-walk";
        case ProcessKind::Ar1: return "ar1";
        case ProcessKind::Arma11: return "arma11";
    }
    return "white-noise";
}

ProcessKind parse_process_kind(const std::string& name) {
    if (name == "white-noise") return ProcessKind::WhiteNoise;
    if (name == "random-walk") return ProcessKind::RandomWalk;
    if (name == "ar1") return ProcessKind::Ar1;
    if (name == "arma11") return ProcessKind::Arma11;
    throw std::invalid_argument("unknown process '" + name + "'");
}

void validate(const Process& p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw std::invalid_argument("innovation sd must be positive");
    if (!(std::abs(p.rho) < 1.0)) throw std::invalid_argument("AR parameter must satisfy |rho| < 1");
    if (!(std::abs(p.theta) < 1.0)) throw std::invalid_argument("MA parameter must satisfy |theta| < 1");
}

void validate(const SimConfig& cfg) {
    if (cfg.n < 10) throw std::invalid_argument("simulation length must be at least 10");
    if (cfg.reps < 1) throw std::invalid_argument("need at least one replication");
    validate(cfg.process);
}

void simulate_into(const Process& p, Philox4x32& rng, std::span<double> out) {
    validate(p);
    if (out.empty()) return;
    const double s = p.sigma;
    switch (p.kind) {
        case ProcessKind::WhiteNoise:
            for (auto& v : out) v = s * rng.normal();
            break;
        case ProcessKind::RandomWalk: {
            double level = 0.0;
            for (auto& v : out) {
                level += s * rng.normal();
                v = level;
            }
            break;
        }
        case ProcessKind::Ar1: {
            double e = s / std::sqrt(1.0 - p.rho * p.rho) * rng.normal();
            out[0] = e;
            for (std::size_t t = 1; t < out.size(); ++t) {
                e = p.rho * e + s * rng.normal();
                out[t] = e;
            }
            break;
        }
        case ProcessKind::Arma11: {
            // e_0 = a + eta_0 with a = rho e_{-1} + theta eta_{-1} independent of eta_0;
            // var(a) = gamma_0 - sigma^2 = sigma^2 (rho + theta)^2 / (1 - rho^2).
            const double sd_a = s * std::abs(p.rho + p.theta) / std::sqrt(1.0 - p.rho * p.rho);
            const double a = sd_a * rng.normal();
            double eta = s * rng.normal();
            double e = a + eta;
            out[0] = e;
            for (std::size_t t = 1; t < out.size(); ++t) {
                const double eta_next = s * rng.normal();
                e = p.rho * e + p.theta * eta + eta_next;
                eta = eta_next;
                out[t] = e;
            }
            break;
        }
    }
}

Series generate(const Process& p, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    if (n < 1) throw std::invalid_argument("series length must be positive");
    Philox4x32 rng(seed, stream);
    std::vector<double> v(n);
    simulate_into(p, rng, v);
    return Series(to_string(p.kind), MonthIndex::from_year_month(2000, 1), std::span<const double>(v));
}

double compensated_sum(std::span<const double> values) noexcept {
    double sum = 0.0;
    double c = 0.0;
    for (const double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) c += (sum - t) + v;
        else c += (v - t) + sum;
        sum = t;
    }
    return sum + c;
}

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("quantile probability must be in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ExperimentResult spurious_experiment(const SimConfig& cfg, bool differenced) {
    validate(cfg);
    if (cfg.reps < 100) throw std::invalid_argument("spurious-regression experiment needs at least 100 replications");

    auto stats = run_replications(cfg.reps, [&](std::size_t rep) {
        std::vector<double> a(cfg.n);
        std::vector<double> b(cfg.n);
        Philox4x32 ra(cfg.seed, stream_id(rep, 0));
        Philox4x32 rb(cfg.seed, stream_id(rep, 1));
        simulate_into(cfg.process, ra, a);
        simulate_into(cfg.process, rb, b);
        const auto start = MonthIndex::from_year_month(2000, 1);
        Series y("y", start, std::span<const double>(a));
        Series x("x", start, std::span<const double>(b));
        if (differenced) {
            y = diff(y);
            x = diff(x);
        }
        const RegressionFit fit = ols_fit(y, x);
        const TTestResult tt = t_test(fit, 1);
        return ReplicationStat{.slope = fit.coef(1),
                               .t = tt.t,
                               .p_value = tt.p_value,
                               .r_squared = fit.r_squared,
                               .reject = std::abs(tt.t) > 1.96};
    });

    ExperimentResult out;
    out.replications = std::move(stats);
    std::vector<double> abs_t;
    std::vector<double> r2;
    std::vector<double> rejections;
    for (const auto& s : out.replications) {
        abs_t.push_back(std::abs(s.t));
        r2.push_back(s.r_squared);
        rejections.push_back(s.reject ? 1.0 : 0.0);
    }
    const auto reps = static_cast<double>(cfg.reps);
    out.summary.reps = cfg.reps;
    out.summary.rejection_rate = compensated_sum(rejections) / reps;
    out.summary.mean_abs_t = compensated_sum(abs_t) / reps;
    out.summary.mean_r2 = compensated_sum(r2) / reps;
    for (const double prob : {0.5, 0.9, 0.95, 0.99}) out.summary.abs_t_quantiles.emplace_back(prob, quantile(abs_t, prob));
    return out;
}

namespace {

nlohmann::ordered_json summary_json(const ExperimentSummary& s) {
    nlohmann::ordered_json q = nlohmann::ordered_json::object();
    for (const auto& [prob, value] : s.abs_t_quantiles) {
        char key[16];
        std::snprintf(key, sizeof key, "p%g", prob * 100.0);
        q[key] = value;
    }
    return {{"reps", s.reps},
            {"rejection_rate", s.rejection_rate},
            {"mean_abs_t", s.mean_abs_t},
            {"mean_r2", s.mean_r2},
            {"abs_t_quantiles", std::move(q)}};
}

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string render_json(const SimConfig& cfg, const ExperimentSummary& levels, const ExperimentSummary& differences) {
    nlohmann::ordered_json process{{"kind", to_string(cfg.process.kind)}, {"sigma", cfg.process.sigma}};
    if (cfg.process.kind == ProcessKind::Ar1 || cfg.process.kind == ProcessKind::Arma11) process["rho"] = cfg.process.rho;
    if (cfg.process.kind == ProcessKind::Arma11) process["theta"] = cfg.process.theta;
    const nlohmann::ordered_json j{{"experiment", "spurious-regression"},
                                   {"rng", "philox4x32-10"},
                                   {"n", cfg.n},
                                   {"reps", cfg.reps},
                                   {"seed", cfg.seed},
                                   {"process", std::move(process)},
                                   {"critical_abs_t", 1.96},
                                   {"levels", summary_json(levels)},
                                   {"differences", summary_json(differences)}};
    return j.dump(2) + "\n";
}

std::string render_replications_csv(const ExperimentResult& levels, const ExperimentResult& differences) {
    std::string out = "form,replication,slope,t,p_value,r_squared,reject\n";
    const auto rows = [&](const char* form, const ExperimentResult& r) {
        for (std::size_t i = 0; i < r.replications.size(); ++i) {
            const auto& s = r.replications[i];
            out += std::string(form) + "," + std::to_string(i) + "," + shortest(s.slope) + "," + shortest(s.t) + "," +
                   shortest(s.p_value) + "," + shortest(s.r_squared) + "," + (s.reject ? "1" : "0") + "\n";
        }
    };
    rows("levels", levels);
    rows("differences", differences);
    return out;
}

}  // namespace tsaudit::mc
