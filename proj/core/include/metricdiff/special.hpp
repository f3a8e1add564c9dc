#pragma once

// Distribution functions used by the hypothesis tests. Everything here is
// computed in-house from the regularized incomplete beta/gamma functions so
// that no third-party statistics package silently defines our p-values.

namespace metricdiff::special {

// Regularized incomplete beta I_x(a, b). Continued fraction (modified Lentz),
// accurate to ~1e-15 for a, b up to ~1e5.
[[nodiscard]] double reg_inc_beta(double a, double b, double x);

// Regularized lower/upper incomplete gamma P(a, x), Q(a, x) = 1 - P(a, x).
[[nodiscard]] double reg_lower_gamma(double a, double x);
[[nodiscard]] double reg_upper_gamma(double a, double x);

[[nodiscard]] double normal_cdf(double x);
[[nodiscard]] double normal_sf(double x);
// Inverse of normal_cdf, AS 241 rational approximation (double precision).
[[nodiscard]] double normal_quantile(double p);

[[nodiscard]] double student_t_cdf(double t, double nu);
[[nodiscard]] double student_t_sf(double t, double nu);

[[nodiscard]] double f_cdf(double x, double d1, double d2);
[[nodiscard]] double f_sf(double x, double d1, double d2);

[[nodiscard]] double chi_square_cdf(double x, double df);
[[nodiscard]] double chi_square_sf(double x, double df);
[[nodiscard]] double chi_square_quantile(double p, double df);

// Kolmogorov distribution of sup_t |B(t)| for a Brownian bridge B. The CDF
// uses the theta-function form for small arguments and the alternating
// exponential series otherwise; both converge to full double precision.
[[nodiscard]] double kolmogorov_cdf(double x);
[[nodiscard]] double kolmogorov_sf(double x);

}  // namespace metricdiff::special
