#include <doctest.h>

#include "interchange/closed_form.hpp"
#include "interchange/oracle.hpp"
#include "interchange/transition.hpp"

#include <cmath>
#include <random>

using namespace interchange;
using namespace interchange::closed_form;

namespace {

double bisect(auto&& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) > 0) == (f(mid) > 0)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// u(c) = 1 - (T - T^2/2)/c with T e^{-T} = c e^{-c}, T <= 1 (tree function).
double slowdown_by_tree_function(double c) {
  const double z = c * std::exp(-c);
  const double tree = bisect([z](double s) { return s * std::exp(-s) - z; }, 0.0, 1.0);
  return 1.0 - (tree - 0.5 * tree * tree) / c;
}

}  // namespace

TEST_CASE("phi") {
  CHECK(phi(1.0, 6, 1) == 1.0);
  CHECK(phi(1.0, 6, 3) == 0.0);
  CHECK(phi(0.0, 6, 3) == 0.0);
  CHECK(phi(0.0, 1, 1) == 1.0);  // 0^0 (1-0)^0
  CHECK(phi(0.3, 7, 3) == doctest::Approx(std::pow(0.3, 4) * std::pow(0.7, 2)).epsilon(1e-14));
  CHECK_THROWS_AS(phi(1.5, 6, 3), std::domain_error);

  // maximizer (n-k)/(n-1)
  const int n = 40, k = 13;
  const double peak = static_cast<double>(n - k) / (n - 1);
  for (double y = 0.001; y < 1.0; y += 0.001) CHECK(phi(y, n, k) <= phi(peak, n, k));
}

TEST_CASE("incomplete beta tail") {
  CHECK(incomplete_beta_tail(1.0, 9, 4) == 0.0);
  CHECK(incomplete_beta_tail(0.5, 2, 2) == doctest::Approx(0.125).epsilon(1e-14));
  // x = 0: (n-k)!(k-1)!/n!
  CHECK(incomplete_beta_tail(0.0, 6, 2) == doctest::Approx(24.0 * 1.0 / 720.0).epsilon(1e-14));
  CHECK(beta_integral(6, 2) == doctest::Approx(24.0 / 720.0).epsilon(1e-14));
}

TEST_CASE("head + tail = Beta(n-k+1, k)") {
  for (int n : {2, 5, 17, 60, 150}) {
    for (int k = 1; k <= n; k += std::max(1, n / 9)) {
      for (double x : {0.0, 0.1, 0.5, 0.77, 0.999, 1.0}) {
        const double b = beta_integral(n, k);
        CHECK(incomplete_beta_head(x, n, k) + incomplete_beta_tail(x, n, k) == doctest::Approx(b).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("expected cycles boundary values") {
  CHECK(expected_cycles(5, 1, 0.0) == 5.0);
  CHECK(expected_cycles(5, 3, 0.0) == 0.0);
  for (int n : {3, 10, 50}) {
    for (int k = 1; k <= n; ++k) CHECK(expected_cycles(n, k, 200.0) == doctest::Approx(1.0 / k).epsilon(1e-12));
  }
  // k = 1: E = 1 + (n-1) e^{-nt}
  for (double t : {0.001, 0.02, 0.3}) CHECK(expected_cycles(30, 1, t) == doctest::Approx(1.0 + 29.0 * std::exp(-30 * t)));
  CHECK_THROWS_AS(expected_cycles(5, 6, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(expected_cycles(5, 2, -0.1), std::domain_error);
}

TEST_CASE("expected cycles against the class-chain oracle") {
  CHECK(expected_cycles(4, 2, 0.1) == doctest::Approx(oracle::brute_force_expected_cycles(4, 2, 0.1)).epsilon(1e-12));
  for (int k = 1; k <= 6; ++k) {
    CHECK(expected_cycles(6, k, 0.3) == doctest::Approx(oracle::brute_force_expected_cycles(6, k, 0.3)).epsilon(1e-10));
  }
}

TEST_CASE("parts are consistent") {
  const auto parts = expected_cycles_parts(30, 12, 0.02);
  CHECK(parts.tail >= 0.0);
  CHECK(parts.head >= 0.0);
  CHECK(parts.phi_at_x > 0.0);
  CHECK(parts.head + parts.tail == doctest::Approx(beta_integral(30, 12)).epsilon(1e-12));
  const double c = 86493225.0;  // C(30,12)
  const double x = std::exp(-12 * 0.02);
  CHECK(parts.value == doctest::Approx(c * (x * parts.phi_at_x / 12 + parts.tail)).epsilon(1e-11));
}

TEST_CASE("exact rational route") {
  for (const mpq_class& x : {mpq_class(0), mpq_class(1, 3), mpq_class(5, 7), mpq_class(1)}) {
    CHECK(expected_cycles_at_x(2, 2, x) == (1 - x) / 2);
  }
  CHECK(expected_cycles_at_x(9, 1, 1) == 9);
  CHECK(expected_cycles_at_x(9, 4, 0) == mpq_class(1, 4));

  const mpq_class exact = expected_cycles_at_x(60, 30, mpq_class(1, 2));
  const double floating = expected_cycles_from_x(60, 30, 0.5, 0.5);
  CHECK(std::abs(floating - exact.get_d()) <= 1e-10 * exact.get_d());
}

TEST_CASE("floating and exact routes agree at identical x (property)") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick_n(1, 60);
  std::uniform_real_distribution<double> pick_scale(0.1, 5.0);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = pick_n(rng);
    const int k = std::uniform_int_distribution<int>(1, n)(rng);
    const double t = pick_scale(rng) * transition::reference_time(n, k);
    const double x = std::exp(-k * t);
    const mpq_class exact = expected_cycles_at_x(n, k, mpq_class(x));  // exact dyadic value of x
    const double floating = expected_cycles_from_x(n, k, x, 1.0 - x);
    CAPTURE(n);
    CAPTURE(k);
    CAPTURE(t);
    CHECK(std::abs(floating - exact.get_d()) <= 1e-10 * exact.get_d());
  }
}

TEST_CASE("expected distance") {
  CHECK(expected_distance(40, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  double harmonic = 0.0;
  for (int k = 1; k <= 40; ++k) harmonic += 1.0 / k;
  CHECK(expected_distance(40, 50.0) == doctest::Approx(40.0 - harmonic).epsilon(1e-12));
  for (double t : {0.01, 0.1, 1.0}) {
    const double d = expected_distance(40, t);
    CHECK(d >= 0.0);
    CHECK(d <= 39.0);
  }
}

TEST_CASE("slowdown u(c)") {
  CHECK(slowdown_u(0.5) == doctest::Approx(0.25).epsilon(1e-9));
  for (double c = 0.1; c < 0.95; c += 0.1) CHECK(std::abs(slowdown_u(c, 1e-10) - c / 2) <= 1e-6);
  const double u2 = slowdown_u(2.0, 1e-12);
  CHECK(u2 == doctest::Approx(slowdown_by_tree_function(2.0)).epsilon(1e-10));
  CHECK(u2 == doctest::Approx(0.8381).epsilon(1e-4));
  for (double c : {1.5, 2.0, 3.0}) {
    CHECK(slowdown_u(c, 1e-10) < c / 2);
    CHECK(slowdown_u(c, 1e-10) == doctest::Approx(slowdown_by_tree_function(c)).epsilon(1e-9));
  }
  // continuity at c = 1, where the series converges only polynomially
  CHECK(slowdown_u(1.0, 1e-8) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(std::abs(slowdown_u(1.001, 1e-8) - slowdown_u(0.999, 1e-8)) < 3e-3);
  CHECK_THROWS_AS(slowdown_u(0.0), std::domain_error);
}

TEST_CASE("small-k density") {
  for (double c : {0.3, 1.0, 2.5}) CHECK(small_k_density(1, c) == doctest::Approx(std::exp(-c)).epsilon(1e-14));
  CHECK(small_k_density(2, 1.0) == doctest::Approx(std::exp(-2.0) / 2).epsilon(1e-14));
  // 3^1/3! (1/2) (2e^-2)^3
  CHECK(small_k_density(3, 2.0) == doctest::Approx(0.5 * 0.5 * 8 * std::exp(-6.0)).epsilon(1e-14));

  double previous = 1.0;
  for (int n : {500, 1000, 2000}) {
    const double err = std::abs(expected_cycles(n, 3, 2.0 / n) / n - small_k_density(3, 2.0));
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("giant component fraction") {
  const double oracle = bisect([](double z) { return 1.0 - z - std::exp(-2.0 * z); }, 0.5, 0.99);
  CHECK(giant_component_theta(2.0) == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(giant_component_theta(2.0) == doctest::Approx(0.79681).epsilon(1e-5));
  CHECK(giant_component_theta(1.0001) < 1e-3);
  CHECK(giant_component_theta(1.0001) > 0.0);
  CHECK(giant_component_theta(40.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double c : {1.1, 1.5, 3.0, 7.0}) {
    const double z = giant_component_theta(c);
    CHECK(1.0 - z == doctest::Approx(std::exp(-c * z)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(giant_component_theta(1.0), std::domain_error);
  CHECK_THROWS_AS(giant_component_theta(0.5), std::domain_error);
}
