#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "tsaudit/montecarlo.hpp"
#include "tsaudit/unitroot.hpp"

namespace tsaudit {
namespace {

TEST(MacKinnon, MatchesReferenceSurface) {
    const auto& ref = test::reference()["mackinnon"];
    for (const auto& [key, spec] : {std::pair{"c", Deterministic::Constant}, std::pair{"ct", Deterministic::ConstantTrend}}) {
        for (const auto& row : ref[key]) {
            const double tau = row[0];
            const double expected = row[1];
            EXPECT_NEAR(mackinnon_pvalue(tau, spec).raw, expected, 1e-12 + 1e-10 * expected) << key << " tau=" << tau;
        }
    }
}

TEST(MacKinnon, ClassicalCriticalValues) {
    EXPECT_NEAR(mackinnon_pvalue(-3.43).value, 0.01, 0.005);
    EXPECT_NEAR(mackinnon_pvalue(-2.86).value, 0.05, 0.005);
    EXPECT_NEAR(mackinnon_pvalue(-2.57).value, 0.10, 0.005);
    EXPECT_GT(mackinnon_pvalue(0.0).value, 0.9);
}

TEST(MacKinnon, ClampsAndFlags) {
    const auto low = mackinnon_pvalue(-8.0);
    EXPECT_EQ(low.value, 0.001);
    EXPECT_TRUE(low.clamped);
    EXPECT_LT(low.raw, 0.001);
    const auto high = mackinnon_pvalue(4.0);
    EXPECT_EQ(high.value, 0.999);
    EXPECT_TRUE(high.clamped);
    EXPECT_FALSE(mackinnon_pvalue(-2.0).clamped);
    EXPECT_THROW((void)mackinnon_pvalue(NAN), std::invalid_argument);
}

TEST(MacKinnon, StrictlyDecreasingInMinusTau) {
    double prev = 0.0;
    for (double tau = -12.0; tau <= 2.7; tau += 0.01) {
        const double p = mackinnon_pvalue(tau).raw;
        EXPECT_GT(p, prev) << "tau=" << tau;
        prev = p;
    }
}

TEST(Adf, MatchesReference) {
    const auto& ref = test::reference()["synthetic_levels"]["adf"];
    const auto d = test::synthetic_levels();
    const auto y = d.column("y");
    const auto x = interpolate_linear(d.column("x"));
    for (const auto& [key, s] : {std::pair{"y", y}, std::pair{"x", x}, std::pair{"dy", diff(y)}, std::pair{"dx", diff(x)}}) {
        const auto r = adf_test(s, 12);
        EXPECT_NEAR(r.tau, ref[key]["tau"], 1e-10) << key;
        EXPECT_NEAR(r.p_value_raw, ref[key]["p"], 1e-10) << key;
        EXPECT_EQ(r.nobs_used, ref[key]["nobs"]) << key;
        EXPECT_EQ(r.lags, 12);
        EXPECT_EQ(r.spec, Deterministic::Constant);
    }
}

TEST(Adf, NobsUsed) {
    const auto s = mc::generate(mc::Process::random_walk(), 100, 1, 0);
    for (const int lags : {0, 1, 5, 12}) EXPECT_EQ(adf_test(s, lags).nobs_used, 100 - lags - 1);
}

TEST(Adf, AffineInvariance) {
    const auto s = mc::generate(mc::Process::random_walk(), 250, 9, 0);
    std::vector<double> t;
    for (const double v : s.observed()) t.push_back(-0.25 * v + 1e3);
    const auto a = adf_test(s, 4);
    const auto b = adf_test(test::make(t), 4);
    EXPECT_NEAR(a.tau, b.tau, 1e-8);
    EXPECT_NEAR(a.p_value, b.p_value, 1e-8);
}

TEST(Adf, GapsAndShortSeries) {
    const Series gappy("g", MonthIndex::from_year_month(2000, 1),
                       std::vector<Value>{{}, 1.0, 2.0, {}, 4.0, 3.0, 5.0, 4.0, 6.0, 5.0, 7.0, {}});
    EXPECT_THROW((void)adf_test(gappy, 0), std::invalid_argument);
    EXPECT_THROW((void)adf_test(test::make({1, 2, 1, 3, 2, 4, 3}), 3), std::invalid_argument);
    EXPECT_THROW((void)adf_test(test::make(std::vector<double>(50, 1.0)), 1), std::invalid_argument);
}

TEST(Adf, LeadingAndTrailingGapsAreTrimmed) {
    const auto s = mc::generate(mc::Process::random_walk(), 80, 4, 0);
    std::vector<Value> v{Value{}, Value{}};
    for (const auto& x : s.values()) v.push_back(x);
    v.emplace_back();
    const Series padded("p", MonthIndex::from_year_month(1999, 11), v);
    EXPECT_EQ(adf_test(padded, 2).tau, adf_test(s, 2).tau);
}

}  // namespace
}  // namespace tsaudit
