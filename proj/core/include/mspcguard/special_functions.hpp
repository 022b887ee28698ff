#pragma once

namespace mspcguard {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double regularized_gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double regularized_beta(double a, double b, double x);

/// Inverse CDF of the chi-squared distribution with `dof` degrees of freedom.
double chi_squared_quantile(double p, double dof);

/// Inverse CDF of the F distribution with (d1, d2) degrees of freedom.
double f_quantile(double p, double d1, double d2);

}  // namespace mspcguard
