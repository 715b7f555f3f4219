#pragma once

namespace tsaudit::dist {

/// P(|T| >= |t|) for Student's t with `dof` degrees of freedom, via the
/// regularized incomplete beta function. Infinite |t| gives 0.
[[nodiscard]] double student_t_two_sided(double t, double dof);

/// P(X >= x) for a chi-squared variable with `df` degrees of freedom, via the
/// regularized upper incomplete gamma function.
[[nodiscard]] double chi2_upper(double x, double df);

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double z);

/// Standard normal quantile, p in (0, 1).
[[nodiscard]] double normal_quantile(double p);

}  // namespace tsaudit::dist
