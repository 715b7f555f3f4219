#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tsaudit/rng.hpp"
#include "tsaudit/series.hpp"

namespace tsaudit::mc {

enum class ProcessKind { WhiteNoise, RandomWalk, Ar1, Arma11 };

struct Process {
    ProcessKind kind = ProcessKind::WhiteNoise;
    double rho = 0.0;
    double theta = 0.0;
    double sigma = 1.0;

    static Process white_noise(double sigma = 1.0) { return {ProcessKind::WhiteNoise, 0.0, 0.0, sigma}; }
    static Process random_walk(double sigma = 1.0) { return {ProcessKind::RandomWalk, 0.0, 0.0, sigma}; }
    static Process ar1(double rho, double sigma = 1.0) { return {ProcessKind::Ar1, rho, 0.0, sigma}; }
    static Process arma11(double rho, double theta, double sigma = 1.0) {
        return {ProcessKind::Arma11, rho, theta, sigma};
    }
};

[[nodiscard]] std::string to_string(ProcessKind kind);
/// Accepts "white-noise", "random-walk", "ar1", "arma11".
[[nodiscard]] ProcessKind parse_process_kind(const std::string& name);

/// Throws std::invalid_argument for |rho| >= 1, |theta| >= 1 or sigma <= 0.
void validate(const Process& p);

/// Fills `out` with one path. The random walk is the running sum of the
/// innovations; AR(1) and ARMA(1,1) start from their stationary distribution.
void simulate_into(const Process& p, Philox4x32& rng, std::span<double> out);

/// Deterministic path for (process, n, seed, stream), starting at 2000-01.
[[nodiscard]] Series generate(const Process& p, std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

/// Stream id for substream `sub` of replication `rep`; ids never collide for
/// sub < 256.
[[nodiscard]] constexpr std::uint64_t stream_id(std::uint64_t rep, std::uint64_t sub) noexcept {
    return (rep << 8) | (sub & 0xFFu);
}

struct SimConfig {
    std::size_t n = 229;
    std::size_t reps = 2000;
    std::uint64_t seed = 1;
    Process process = Process::random_walk();
};

/// Throws std::invalid_argument unless n >= 10, reps >= 1 and the process is valid.
void validate(const SimConfig& cfg);

struct ReplicationStat {
    double slope = 0.0;
    double t = 0.0;
    double p_value = 1.0;
    double r_squared = 0.0;
    bool reject = false;
};

struct ExperimentSummary {
    std::size_t reps = 0;
    double rejection_rate = 0.0;  ///< share of |t| > 1.96
    double mean_abs_t = 0.0;
    double mean_r2 = 0.0;
    /// (probability, quantile of |t|)
    std::vector<std::pair<double, double>> abs_t_quantiles;
};

struct ExperimentResult {
    ExperimentSummary summary;
    std::vector<ReplicationStat> replications;
};

/// Regresses one simulated series on an independent second one, `reps` times,
/// recording the nominal 5% t-test of the slope. With `differenced`, both
/// series are first-differenced before the regression. Requires reps >= 100.
[[nodiscard]] ExperimentResult spurious_experiment(const SimConfig& cfg, bool differenced = false);

/// Summary JSON for a levels/differences experiment pair: two-space indent,
/// trailing newline, stable key order.
[[nodiscard]] std::string render_json(const SimConfig& cfg, const ExperimentSummary& levels,
                                      const ExperimentSummary& differences);

/// One CSV row per replication and regression form.
[[nodiscard]] std::string render_replications_csv(const ExperimentResult& levels, const ExperimentResult& differences);

/// Neumaier-compensated sum; with a fixed input order the result is bit
/// reproducible.
[[nodiscard]] double compensated_sum(std::span<const double> values) noexcept;

/// Linear-interpolation sample quantile of unsorted data.
[[nodiscard]] double quantile(std::vector<double> values, double prob);

/// Runs fn(rep) for rep in [0, reps) on up to `threads` workers and returns
/// the results in replication order, so the outcome never depends on
/// scheduling.
template <class Fn>
auto run_replications(std::size_t reps, Fn&& fn, unsigned threads = std::thread::hardware_concurrency())
    -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(reps);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
    if (workers == 1) {
        for (std::size_t r = 0; r < reps; ++r) out[r] = fn(r);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t r = w; r < reps; r += workers) out[r] = fn(r);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace tsaudit::mc
