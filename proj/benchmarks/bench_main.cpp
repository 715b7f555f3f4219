#include <benchmark/benchmark.h>

#include <vector>

#include "tsaudit/arimax.hpp"
#include "tsaudit/diagnostics.hpp"
#include "tsaudit/montecarlo.hpp"
#include "tsaudit/regress.hpp"
#include "tsaudit/unitroot.hpp"

namespace {

using namespace tsaudit;

Series levels(std::size_t n, std::uint64_t stream) { return mc::generate(mc::Process::random_walk(), n, 2024, stream); }

struct ArmaxData {
    Series y;
    Series x;
};

ArmaxData armax_data(std::size_t n) {
    const auto x = mc::generate(mc::Process::white_noise(), n, 7, 0).observed();
    const auto e = mc::generate(mc::Process::arma11(0.6, 0.3), n, 7, 1).observed();
    std::vector<double> ly(n + 1, 0.0), lx(n + 1, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        lx[t + 1] = lx[t] + x[t];
        ly[t + 1] = ly[t] + 0.5 * x[t] + e[t];
    }
    const auto start = MonthIndex::from_year_month(2000, 1);
    return {Series("y", start, std::span<const double>(ly)), Series("x", start, std::span<const double>(lx))};
}

void BM_Ols(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto y = levels(n, 1);
    const auto x = levels(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ols_fit(y, x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Ols)->Arg(229)->Arg(2000)->Arg(20000)->Complexity();

void BM_DurbinAlt(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto y = levels(n, 1);
    const auto x = levels(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(durbin_alternative(y, x, 12));
}
BENCHMARK(BM_DurbinAlt)->Arg(229)->Arg(2000);

void BM_Adf(benchmark::State& state) {
    const auto s = levels(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(adf_test(s, 12));
}
BENCHMARK(BM_Adf)->Arg(229)->Arg(2000);

void BM_AcfPacf(benchmark::State& state) {
    const auto s = mc::generate(mc::Process::ar1(0.5), static_cast<std::size_t>(state.range(0)), 4, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(acf(s, 20));
        benchmark::DoNotOptimize(pacf(s, 20));
    }
}
BENCHMARK(BM_AcfPacf)->Arg(229)->Arg(2000);

void BM_KalmanLoglik(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const auto d = armax_data(static_cast<std::size_t>(n));
    const auto dy = diff(d.y).observed();
    const auto dx = diff(d.x).observed();
    Eigen::MatrixXd X(n, 2);
    X.col(0).setOnes();
    X.col(1) = Eigen::Map<const Eigen::VectorXd>(dx.data(), n);
    const ArmaxLikelihood lik(Eigen::Map<const Eigen::VectorXd>(dy.data(), n), X, true, true);
    Eigen::VectorXd p(5);
    p << 0.0, 0.5, 0.6, 0.3, 1.0;
    Eigen::VectorXd g;
    for (auto _ : state) benchmark::DoNotOptimize(lik.value_and_gradient(p, g));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KalmanLoglik)->Arg(229)->Arg(2000)->Complexity();

void BM_ArmaxFit(benchmark::State& state) {
    const auto d = armax_data(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fit_armax(d.y, d.x));
}
BENCHMARK(BM_ArmaxFit)->Arg(229)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SpuriousExperiment(benchmark::State& state) {
    mc::SimConfig cfg;
    cfg.reps = 200;
    for (auto _ : state) benchmark::DoNotOptimize(mc::spurious_experiment(cfg));
}
BENCHMARK(BM_SpuriousExperiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
