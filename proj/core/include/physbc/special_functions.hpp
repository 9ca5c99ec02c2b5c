#pragma once

namespace physbc {

/// log B(a, b), accurate when one argument is very large.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b). Continued fraction, evaluated on
/// the side of the symmetry switch x > (a + 1) / (a + b + 2) where it
/// converges fast.
double beta_inc(double x, double a, double b);

/// Density of Beta(a, b) at x.
double beta_density(double x, double a, double b);

/// x with beta_inc(x, a, b) = p: bisection down to a 1e-3 relative bracket,
/// then bracketed Newton.
double beta_inc_inv(double p, double a, double b);

}  // namespace physbc
