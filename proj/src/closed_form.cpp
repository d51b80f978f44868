#include "interchange/closed_form.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace interchange::closed_form {

namespace {

void check_nk(int n, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("need 1 <= k <= n (got n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
}

void check_unit(double y, const char* what) {
  if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

double log_binomial(int n, int k) {
  // boost's double binomial is accurate to a few ulp until it overflows near n = 1030
  if (n <= 1000) return std::log(boost::math::binomial_coefficient<double>(n, k));
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// p * log(q) with 0 * log(0) = 0.
double xlogy(double p, double log_q) { return p == 0.0 ? 0.0 : p * log_q; }

}  // namespace

ModelParams ModelParams::make(int n, int k, double t) {
  check_nk(n, k);
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  return ModelParams{n, k, t};
}

double ModelParams::x() const { return std::exp(-static_cast<double>(k) * t); }
double ModelParams::one_minus_x() const { return -std::expm1(-static_cast<double>(k) * t); }

double phi(double y, int n, int k) {
  check_nk(n, k);
  check_unit(y, "phi: y");
  const double a = n - k;
  const double b = k - 1;
  if ((y == 0.0 && a > 0) || (y == 1.0 && b > 0)) return 0.0;
  return std::exp(xlogy(a, std::log(y)) + xlogy(b, std::log1p(-y)));
}

double beta_integral(int n, int k) {
  check_nk(n, k);
  return boost::math::beta(static_cast<double>(n - k + 1), static_cast<double>(k));
}

double incomplete_beta_tail(double x, int n, int k) {
  check_nk(n, k);
  check_unit(x, "x");
  if (x == 1.0) return 0.0;
  return boost::math::betac(static_cast<double>(n - k + 1), static_cast<double>(k), x);
}

double incomplete_beta_head(double x, int n, int k) {
  check_nk(n, k);
  check_unit(x, "x");
  if (x == 0.0) return 0.0;
  return boost::math::beta(static_cast<double>(n - k + 1), static_cast<double>(k), x);
}

double expected_cycles_from_x(int n, int k, double x, double one_minus_x) {
  check_nk(n, k);
  check_unit(x, "x");
  check_unit(one_minus_x, "1-x");
  const double a = n - k + 1;
  const double b = k;

  // (1/k) C(n,k) x phi(x), assembled in log space.
  double prefactor = 0.0;
  const bool vanishes = x == 0.0 || (one_minus_x == 0.0 && k > 1);
  if (!vanishes) {
    const double log_powers = a * std::log(x) + xlogy(b - 1, std::log(one_minus_x));
    if (n <= 1000 && log_powers > -700.0) {
      // keeps x = 1 exact: E(s_1(0)) = n
      prefactor = boost::math::binomial_coefficient<double>(n, k) / k * std::exp(log_powers);
    } else {
      prefactor = std::exp(log_binomial(n, k) - std::log(static_cast<double>(k)) + log_powers);
    }
  }
  // C(n,k) int_x^1 phi = (1/k) * regularized upper tail, since C(n,k) Beta(n-k+1,k) = 1/k.
  const double tail = x == 1.0 ? 0.0 : boost::math::ibetac(a, b, x) / k;
  return prefactor + tail;
}

double expected_cycles_from_x(int n, int k, double x) { return expected_cycles_from_x(n, k, x, 1.0 - x); }

double expected_cycles(int n, int k, double t) {
  const auto p = ModelParams::make(n, k, t);
  return expected_cycles_from_x(n, k, p.x(), p.one_minus_x());
}

ClosedFormParts expected_cycles_parts(int n, int k, double t) {
  const auto p = ModelParams::make(n, k, t);
  const double x = p.x();
  ClosedFormParts parts;
  parts.phi_at_x = phi(x, n, k);
  parts.tail = incomplete_beta_tail(x, n, k);
  parts.head = incomplete_beta_head(x, n, k);
  parts.value = expected_cycles_from_x(n, k, x, p.one_minus_x());
  return parts;
}

mpq_class expected_cycles_at_x(int n, int k, const mpq_class& x) {
  check_nk(n, k);
  if (x < 0 || x > 1) throw std::domain_error("x must lie in [0,1]");
  const unsigned long m = static_cast<unsigned long>(k - 1);
  const unsigned long low = static_cast<unsigned long>(n - k + 1);  // n - m

  auto pow_q = [](const mpq_class& base, unsigned long e) {
    mpq_class out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
    return out;
  };
  mpz_class nk, mi;
  mpz_bin_uiui(nk.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));

  // int_0^x phi = sum_i C(m,i) (-1)^i x^(n-m+i) / (n-m+i)
  mpq_class head = 0;
  mpq_class power = pow_q(x, low);
  for (unsigned long i = 0; i <= m; ++i) {
    mpz_bin_uiui(mi.get_mpz_t(), m, i);
    mpq_class term = power * mi / (low + i);
    if (i % 2) head -= term;
    else head += term;
    power *= x;
  }
  mpz_class fnk, fk1, fn;
  mpz_fac_ui(fnk.get_mpz_t(), static_cast<unsigned long>(n - k));
  mpz_fac_ui(fk1.get_mpz_t(), m);
  mpz_fac_ui(fn.get_mpz_t(), static_cast<unsigned long>(n));
  mpq_class beta(fnk * fk1, fn);
  beta.canonicalize();

  mpq_class prefactor = pow_q(x, low) * pow_q(mpq_class(1 - x), m) / k;
  mpq_class out = nk * (prefactor + beta - head);
  out.canonicalize();
  return out;
}

double expected_distance(int n, double t) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  // Neumaier-compensated sum of E(s_k) over k.
  double sum = 0.0, carry = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double v = expected_cycles(n, k, t);
    const double s = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - s) + v : (v - s) + sum;
    sum = s;
  }
  return n - (sum + carry);
}

double slowdown_u(double c, double tol) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::domain_error("slowdown_u: c must be > 0");
  if (!(tol > 0.0)) throw std::domain_error("slowdown_u: tol must be > 0");

  constexpr long kMaxTerms = 1L << 31;
  const double log_z = std::log(c) - c;          // log(c e^-c)
  const double log_r = std::log(c) + 1.0 - c;    // log(c e^(1-c)) <= 0
  const double bound_scale = 1.0 / (c * std::sqrt(2.0 * std::numbers::pi));

  // log of term_k = k^(k-2)/k! (1/c) z^k, advanced by the ratio (1+1/k)^(k-2) z.
  double log_term = -std::log(c) + log_z;  // k = 1
  double sum = 0.0, carry = 0.0;
  for (long k = 1; k <= kMaxTerms; ++k) {
    const double v = std::exp(log_term);
    const double s = sum + v;
    carry += (sum - s) + v;
    sum = s;

    // Stirling: term_j <= bound_scale j^(-5/2) r^j.
    const double kd = static_cast<double>(k);
    const double p_series = bound_scale * std::exp((kd + 1.0) * log_r) * (2.0 / 3.0) * std::pow(kd, -1.5);
    double tail = p_series;
    if (log_r < 0.0) {
      const double geometric =
          bound_scale * std::pow(kd + 1.0, -2.5) * std::exp((kd + 1.0) * log_r) / -std::expm1(log_r);
      tail = std::min(tail, geometric);
    }
    if (tail < tol) return 1.0 - (sum + carry);

    log_term += (kd - 2.0) * std::log1p(1.0 / kd) + log_z;
  }
  throw std::runtime_error("slowdown_u: tolerance not reached within the iteration cap");
}

double small_k_density(int k, double c) {
  if (k < 1) throw std::invalid_argument("small_k_density: k must be >= 1");
  if (!(c > 0.0)) throw std::domain_error("small_k_density: c must be > 0");
  const double kd = k;
  return std::exp((kd - 2.0) * std::log(kd) - std::lgamma(kd + 1.0) - std::log(c) + kd * (std::log(c) - c));
}

double giant_component_theta(double c, double tol) {
  if (!(c > 1.0)) throw std::domain_error("giant_component_theta: needs c > 1");
  if (std::isinf(c)) return 1.0;
  // g(z) = (1 - e^{-cz})/z - 1 is decreasing on (0,1], g(0+) = c - 1 > 0, g(1) = -e^{-c} < 0.
  auto g = [c](double z) { return -std::expm1(-c * z) / z - 1.0; };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > std::max(tol, 1e-6)) {
    const double mid = 0.5 * (lo + hi);
    (mid > 0.0 && g(mid) > 0.0 ? lo : hi) = mid;
  }
  // Newton on f(z) = 1 - z - e^{-cz}
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double e = std::exp(-c * z);
    const double f = 1.0 - z - e;
    const double df = -1.0 + c * e;
    if (df == 0.0) break;
    const double step = f / df;
    const double next = z - step;
    if (!(next >= lo && next <= hi)) break;
    z = next;
    if (std::abs(step) <= tol * 0.01 + std::numeric_limits<double>::epsilon() * z) break;
  }
  return z;
}

}  // namespace interchange::closed_form
