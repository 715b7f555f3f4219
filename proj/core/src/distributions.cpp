#include "tsaudit/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace tsaudit::dist {

double student_t_two_sided(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("t distribution needs positive degrees of freedom");
    if (std::isnan(t)) throw std::invalid_argument("t statistic is NaN");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    // P(|T| > |t|) = I_{dof/(dof+t^2)}(dof/2, 1/2)
    const double x = dof / (dof + t * t);
    return boost::math::ibeta(dof / 2.0, 0.5, x);
}

double chi2_upper(double x, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("chi-squared distribution needs positive degrees of freedom");
    if (std::isnan(x)) throw std::invalid_argument("chi-squared statistic is NaN");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double normal_cdf(double z) { return 0.5 * boost::math::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal quantile needs p in (0, 1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

}  // namespace tsaudit::dist
