#pragma once

#include <string_view>

#include "tsaudit/series.hpp"

namespace tsaudit {

/// Deterministic terms in the Dickey-Fuller regression.
enum class Deterministic {
    Constant,
    ConstantTrend,
};

[[nodiscard]] std::string_view to_string(Deterministic d) noexcept;

struct ApproxPValue {
    double value = 1.0;  ///< reported p, clamped to [0.001, 0.999]
    double raw = 1.0;    ///< unclamped response-surface value
    bool clamped = false;
};

/// Approximate p-value for a Dickey-Fuller tau statistic from the MacKinnon
/// response surface shipped in data/mackinnon1994_tau.csv.
[[nodiscard]] ApproxPValue mackinnon_pvalue(double tau, Deterministic spec = Deterministic::Constant);

struct AdfResult {
    double tau = 0.0;    ///< t-statistic on the lagged level
    double gamma = 0.0;  ///< coefficient on the lagged level
    int lags = 0;
    int nobs_used = 0;   ///< n - lags - 1
    double p_value = 1.0;
    double p_value_raw = 1.0;
    bool p_clamped = false;
    Deterministic spec = Deterministic::Constant;
};

/// Augmented Dickey-Fuller test: OLS of D.s_t on the deterministic terms,
/// s_{t-1} and D.s_{t-1} .. D.s_{t-lags}.
///
/// The series is trimmed to its observed support, which must be gap free.
/// Throws std::invalid_argument for negative lags, too few observations or a
/// constant series.
[[nodiscard]] AdfResult adf_test(const Series& s, int lags, Deterministic spec = Deterministic::Constant);

}  // namespace tsaudit
