#include "tsaudit/unitroot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsaudit/distributions.hpp"
#include "tsaudit/error.hpp"
#include "tsaudit/regress.hpp"

namespace tsaudit {

namespace {

#include "mackinnon_table.inc"

constexpr double kPFloor = 0.001;
constexpr double kPCeiling = 0.999;

struct Surface {
    double tau_max = 0.0;
    double tau_min = 0.0;
    double tau_star = 0.0;
    std::vector<double> small;
    std::vector<double> large;
};

std::map<std::string, Surface> parse_table(std::string_view text) {
    std::map<std::string, Surface> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() < 3) throw std::logic_error("malformed MacKinnon table line");
        std::vector<double> coef;
        for (std::size_t i = 2; i < fields.size(); ++i) {
            double v = 0.0;
            const auto f = fields[i];
            if (std::from_chars(f.data(), f.data() + f.size(), v).ec != std::errc{}) {
                throw std::logic_error("malformed MacKinnon coefficient");
            }
            coef.push_back(v);
        }
        Surface& s = out[std::string(fields[0])];
        const auto region = fields[1];
        if (region == "max") s.tau_max = coef.at(0);
        else if (region == "min") s.tau_min = coef.at(0);
        else if (region == "star") s.tau_star = coef.at(0);
        else if (region == "small") s.small = coef;
        else if (region == "large") s.large = coef;
        else throw std::logic_error("unknown MacKinnon table region");
    }
    return out;
}

const Surface& surface(Deterministic spec) {
    static const std::map<std::string, Surface> table = parse_table(kMackinnonTable);
    return table.at(std::string(to_string(spec)));
}

double polyval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace

std::string_view to_string(Deterministic d) noexcept {
    switch (d) {
        case Deterministic::Constant: return "c";
        case Deterministic::ConstantTrend: return "ct";
    }
    return "c";
}

ApproxPValue mackinnon_pvalue(double tau, Deterministic spec) {
    if (std::isnan(tau)) throw std::invalid_argument("tau is NaN");
    const Surface& s = surface(spec);
    double raw = 0.0;
    if (tau > s.tau_max) raw = 1.0;
    else if (tau < s.tau_min) raw = 0.0;
    else raw = dist::normal_cdf(polyval(tau <= s.tau_star ? s.small : s.large, tau));

    ApproxPValue out;
    out.raw = raw;
    out.value = std::clamp(raw, kPFloor, kPCeiling);
    out.clamped = out.value != raw;
    return out;
}

AdfResult adf_test(const Series& s, int lags, Deterministic spec) {
    if (lags < 0) throw std::invalid_argument("ADF lag order must be >= 0");
    const Series support = s.trimmed();
    if (!support.fully_observed()) {
        throw std::invalid_argument("ADF needs a gap-free series; interpolate '" + s.name() + "' first");
    }
    const auto z = support.observed();
    const int n = static_cast<int>(z.size());
    const int nobs = n - lags - 1;
    const int k = 2 + lags + (spec == Deterministic::ConstantTrend ? 1 : 0);
    if (nobs <= std::max(k, lags + 3)) {
        throw std::invalid_argument("too few observations (" + std::to_string(n) + ") for an ADF test with " +
                                    std::to_string(lags) + " lags");
    }
    bool constant = true;
    for (const double v : z) constant = constant && v == z.front();
    if (constant) throw std::invalid_argument("ADF test is undefined for a constant series");

    Eigen::MatrixXd X(nobs, k);
    Eigen::VectorXd y(nobs);
    for (int i = 0; i < nobs; ++i) {
        const int t = i + lags + 1;
        y(i) = z[static_cast<std::size_t>(t)] - z[static_cast<std::size_t>(t - 1)];
        int c = 0;
        X(i, c++) = 1.0;
        if (spec == Deterministic::ConstantTrend) X(i, c++) = static_cast<double>(t);
        X(i, c++) = z[static_cast<std::size_t>(t - 1)];
        for (int j = 1; j <= lags; ++j) {
            X(i, c++) = z[static_cast<std::size_t>(t - j)] - z[static_cast<std::size_t>(t - j - 1)];
        }
    }
    const LeastSquares ls = least_squares(X, y);
    const int level = spec == Deterministic::ConstantTrend ? 2 : 1;
    const double se = std::sqrt(ls.vcov(level, level));
    if (!(se > 0.0)) throw NumericalError("ADF regression fits exactly; tau is undefined");

    AdfResult out;
    out.gamma = ls.coef(level);
    out.tau = out.gamma / se;
    out.lags = lags;
    out.nobs_used = nobs;
    out.spec = spec;
    const auto p = mackinnon_pvalue(out.tau, spec);
    out.p_value = p.value;
    out.p_value_raw = p.raw;
    out.p_clamped = p.clamped;
    return out;
}

}  // namespace tsaudit
