#pragma once

// Exact formula for the expected number of k-cycles at time t,
//   E(s_k(t)) = C(n,k) [ (1/k) x phi(x) + int_x^1 phi(y) dy ],
// phi(y) = y^(n-k) (1-y)^(k-1), x = exp(-k t), and the quantities derived
// from it (distance profile, slowdown curve, small-cycle densities).

#include <gmpxx.h>

namespace interchange::closed_form {

struct ModelParams {
  int n = 1;
  int k = 1;
  double t = 0.0;

  /// Validates 1 <= k <= n and t >= 0.
  static ModelParams make(int n, int k, double t);

  double x() const;
  /// 1 - x without cancellation for small k t.
  double one_minus_x() const;
};

struct ClosedFormParts {
  double phi_at_x = 0.0;
  double tail = 0.0;  // int_x^1 phi
  double head = 0.0;  // int_0^x phi
  double value = 0.0;
};

/// y^(n-k) (1-y)^(k-1) with 0^0 = 1.
double phi(double y, int n, int k);

/// Beta(n-k+1, k) = (n-k)! (k-1)! / n!.
double beta_integral(int n, int k);

/// int_x^1 phi(y) dy.
double incomplete_beta_tail(double x, int n, int k);
/// int_0^x phi(y) dy.
double incomplete_beta_head(double x, int n, int k);

ClosedFormParts expected_cycles_parts(int n, int k, double t);

double expected_cycles(int n, int k, double t);

/// Floating route at a given x. one_minus_x is passed separately so callers
/// holding 1-x accurately do not lose it.
double expected_cycles_from_x(int n, int k, double x, double one_minus_x);
double expected_cycles_from_x(int n, int k, double x);

/// Exact rational value of the formula at rational x in [0,1].
mpq_class expected_cycles_at_x(int n, int k, const mpq_class& x);

/// n - sum_k E(s_k(t)): expected Cayley distance from the identity.
double expected_distance(int n, double t);

/// u(c) = 1 - sum_k k^(k-2)/k! (1/c) (c e^-c)^k, truncated with a certified tail below tol.
double slowdown_u(double c, double tol = 1e-12);

/// Limit of E(s_k(c/n))/n: k^(k-2)/k! (1/c) (c e^-c)^k.
double small_k_density(int k, double c);

/// Positive root of 1 - z = exp(-c z) for c > 1.
double giant_component_theta(double c, double tol = 1e-14);

}  // namespace interchange::closed_form
