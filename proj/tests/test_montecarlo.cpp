#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "tsaudit/diagnostics.hpp"
#include "tsaudit/montecarlo.hpp"

namespace tsaudit {
namespace {

using namespace tsaudit::mc;

TEST(Generate, WhiteNoiseMoments) {
    const auto v = generate(Process::white_noise(), 100000, 1).observed();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_GE(sd, 0.99);
    EXPECT_LE(sd, 1.01);
}

TEST(Generate, RandomWalkIncrementsAreWhite) {
    const auto s = generate(Process::random_walk(), 2000, 2);
    const auto a = acf(diff(s), 40);
    int inside = 0;
    for (int k = 1; k <= 40; ++k) inside += std::abs(a[k].value) < a[k].conf_band;
    EXPECT_GE(inside, 34);
    // Cumulative sum of the same innovations.
    Philox4x32 rng(2, 0);
    double level = 0.0;
    for (std::size_t t = 0; t < 50; ++t) {
        level += rng.normal();
        EXPECT_EQ(*s[t], level);
    }
}

TEST(Generate, Ar1LagOneAutocorrelation) {
    const auto s = generate(Process::ar1(0.6), 100000, 3);
    EXPECT_NEAR(acf(s, 1)[1].value, 0.6, 0.01);
}

TEST(Generate, Arma11StationaryStart) {
    // Variance of the first draw across streams matches gamma0 = (1 + 2 rho theta + theta^2) / (1 - rho^2).
    const double rho = 0.6, theta = 0.3;
    const double gamma0 = (1.0 + 2.0 * rho * theta + theta * theta) / (1.0 - rho * rho);
    const double gamma1 = (1.0 + rho * theta) * (rho + theta) / (1.0 - rho * rho);
    double s0 = 0.0, s01 = 0.0;
    const int reps = 40000;
    for (int r = 0; r < reps; ++r) {
        const auto v = generate(Process::arma11(rho, theta), 2, 4, static_cast<std::uint64_t>(r));
        s0 += *v[0] * *v[0];
        s01 += *v[0] * *v[1];
    }
    EXPECT_NEAR(s0 / reps, gamma0, 0.05 * gamma0);
    EXPECT_NEAR(s01 / reps, gamma1, 0.05 * gamma0);
}

TEST(Generate, DeterministicAndValidated) {
    EXPECT_EQ(generate(Process::arma11(0.5, -0.2), 300, 77, 5), generate(Process::arma11(0.5, -0.2), 300, 77, 5));
    EXPECT_NE(generate(Process::random_walk(), 300, 77, 5), generate(Process::random_walk(), 300, 77, 6));
    EXPECT_THROW((void)generate(Process::ar1(1.0), 10, 1), std::invalid_argument);
    EXPECT_THROW((void)generate(Process::arma11(0.2, -1.0), 10, 1), std::invalid_argument);
    EXPECT_THROW((void)generate(Process::white_noise(0.0), 10, 1), std::invalid_argument);
    SimConfig bad;
    bad.n = 9;
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad.n = 10;
    bad.reps = 0;
    EXPECT_THROW(validate(bad), std::invalid_argument);
}

TEST(StreamId, NoCollisions) {
    EXPECT_NE(stream_id(0, 1), stream_id(1, 0));
    EXPECT_EQ(stream_id(3, 2), (3u << 8) | 2u);
}

TEST(Experiment, SpuriousLevelsVsDifferences) {
    SimConfig cfg;
    cfg.n = 229;
    cfg.reps = 500;
    cfg.seed = 10;
    const auto lev = spurious_experiment(cfg, false);
    const auto dif = spurious_experiment(cfg, true);
    EXPECT_GT(lev.summary.rejection_rate, 0.5);
    EXPECT_NEAR(dif.summary.rejection_rate, 0.05, 0.03);
    EXPECT_GE(lev.summary.rejection_rate, 0.0);
    EXPECT_LE(lev.summary.rejection_rate, 1.0);
    EXPECT_EQ(lev.replications.size(), 500u);
    EXPECT_EQ(lev.summary.abs_t_quantiles.size(), 4u);
}

TEST(Experiment, RejectionGrowsWithLength) {
    SimConfig shortc;
    shortc.n = 25;
    shortc.reps = 1000;
    shortc.seed = 12;
    SimConfig longc = shortc;
    longc.n = 500;
    EXPECT_LT(spurious_experiment(shortc).summary.rejection_rate, spurious_experiment(longc).summary.rejection_rate);
}

TEST(Experiment, ReproducibleAndThreadIndependent) {
    SimConfig cfg;
    cfg.n = 100;
    cfg.reps = 200;
    cfg.seed = 99;
    const auto a = spurious_experiment(cfg);
    const auto b = spurious_experiment(cfg);
    EXPECT_EQ(render_json(cfg, a.summary, a.summary), render_json(cfg, b.summary, b.summary));

    const auto f = [](std::size_t r) { return static_cast<double>(r) * 0.5; };
    EXPECT_EQ(run_replications(37, f, 1), run_replications(37, f, 4));
    EXPECT_THROW((void)run_replications(10, [](std::size_t r) -> int {
        if (r == 7) throw std::runtime_error("boom");
        return 0;
    }, 3), std::runtime_error);
    cfg.reps = 99;
    EXPECT_THROW((void)spurious_experiment(cfg), std::invalid_argument);
}

TEST(Reduction, CompensatedSumAndQuantile) {
    std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    EXPECT_EQ(compensated_sum(v), 2.0);
    EXPECT_EQ(quantile({3, 1, 2, 4, 5}, 0.5), 3.0);
    EXPECT_EQ(quantile({1, 2}, 0.25), 1.25);
    EXPECT_THROW((void)quantile({}, 0.5), std::invalid_argument);
}

TEST(Process, ParseNames) {
    for (const auto k : {ProcessKind::WhiteNoise, ProcessKind::RandomWalk, ProcessKind::Ar1, ProcessKind::Arma11}) {
        EXPECT_EQ(parse_process_kind(to_string(k)), k);
    }
    EXPECT_THROW((void)parse_process_kind("garch"), std::invalid_argument);
}

}  // namespace
}  // namespace tsaudit
