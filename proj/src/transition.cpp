#include "interchange/transition.hpp"

#include "interchange/closed_form.hpp"

#include <boost/math/special_functions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace interchange::transition {

namespace {

void check_nk(int n, int k) {
  if (n < 2 || k < 1 || k >= n) {
    throw std::invalid_argument("transition needs 1 <= k < n (got n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ")");
  }
}

double log_binomial(int n, int k) {
  if (n <= 1000) return std::log(boost::math::binomial_coefficient<double>(n, k));
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

TransitionParams TransitionParams::make(int n, int k) {
  check_nk(n, k);
  TransitionParams p;
  p.n = n;
  p.k = k;
  p.t_crit = critical_time(n, k);
  p.y_peak = static_cast<double>(n - k) / (n - 1);
  p.q = std::pow(n, 1.5) * std::pow(k, -1.5) / std::sqrt(static_cast<double>(n - k));
  return p;
}

double critical_time(int n, int k) {
  check_nk(n, k);
  // -(1/k) log((n-k)/(n-1)) = (1/k) log1p((k-1)/(n-k))
  return std::log1p(static_cast<double>(k - 1) / (n - k)) / k;
}

double reference_time(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("reference_time: need 1 <= k <= n");
  if (n == 1) return 1.0;
  if (k == 1) return 1.0 / n;
  if (k == n) return std::log(static_cast<double>(n)) / n;
  return critical_time(n, k);
}

double psi(double y, int n, int k) {
  check_nk(n, k);
  if (!(y > 0.0 && y < 1.0)) throw std::domain_error("psi: y must lie in (0,1)");
  return (n - k) * std::log(y) + (k - 1) * std::log1p(-y);
}

double theorem2_envelope(int n, int k, double t, double big_c, double small_c) {
  const auto p = TransitionParams::make(n, k);
  const double dk = (t - p.t_crit) * k;
  return big_c * p.q * std::exp(-small_c * (n - k) * std::min(dk * dk, 1.0));
}

double step_deviation(int n, int k, double t) {
  const double t_crit = critical_time(n, k);
  const double limit = t > t_crit ? 1.0 / k : 0.0;
  return std::abs(closed_form::expected_cycles(n, k, t) - limit);
}

double fit_envelope_constant(int n, int k, std::span<const double> ts, double small_c) {
  double big_c = 0.0;
  for (double t : ts) big_c = std::max(big_c, step_deviation(n, k, t) / theorem2_envelope(n, k, t, 1.0, small_c));
  return big_c;
}

std::vector<double> envelope_grid(int n, int k, int points) {
  if (points < 2) throw std::invalid_argument("envelope_grid: need at least 2 points");
  const double t_max = 3.0 * critical_time(n, k);
  std::vector<double> ts(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) ts[static_cast<std::size_t>(i)] = t_max * i / (points - 1);
  return ts;
}

double b1_term(int n, int k, double x) {
  check_nk(n, k);
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("b1_term: x must lie in [0,1]");
  return closed_form::phi(x, n, k) * std::exp(log_binomial(n, k)) / k;
}

double b1_envelope(int n, int k, double x) {
  const auto p = TransitionParams::make(n, k);
  const double eps = std::min(std::abs((x - p.y_peak) / p.y_peak), 0.25);
  return p.q / k * std::exp(-eps * eps * (n - k) / 4.0);
}

double fit_b1_constant(int n, int k, std::span<const double> xs) {
  double c = 0.0;
  for (double x : xs) c = std::max(c, b1_term(n, k, x) / b1_envelope(n, k, x));
  return c;
}

double window_scale(int n, int k) {
  check_nk(n, k);
  return 1.0 / (k * std::sqrt(static_cast<double>(n - k)));
}

TransitionProfile measure_window(int n, int k, double f_lo, double f_hi, int resolution) {
  check_nk(n, k);
  if (!(f_lo > 0.0 && f_lo < f_hi && f_hi < 1.0)) {
    throw std::invalid_argument("measure_window: need 0 < f_lo < f_hi < 1");
  }
  if (resolution < 8) throw std::invalid_argument("measure_window: resolution must be >= 8");

  TransitionProfile out;
  out.n = n;
  out.k = k;
  out.t_crit = critical_time(n, k);
  const double scale = window_scale(n, k);
  const double min_spacing = 1e-3 * scale;
  auto value = [&](double t) { return closed_form::expected_cycles(n, k, t); };

  std::vector<std::pair<double, double>> grid;
  auto build = [&](double half_width) {
    grid.clear();
    const double lo = std::max(0.0, out.t_crit - half_width);
    const double hi = out.t_crit + half_width;
    for (int i = 0; i < resolution; ++i) {
      const double t = lo + (hi - lo) * i / (resolution - 1);
      grid.emplace_back(t, value(t));
    }
  };
  // First grid index whose value reaches level, provided the profile starts below it.
  auto bracket = [&](double level) -> std::ptrdiff_t {
    if (grid.front().second >= level) return -1;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (grid[i].second >= level) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
  };

  build(10.0 * scale);
  if (bracket(f_lo / k) < 0 || bracket(f_hi / k) < 0) {
    build(40.0 * scale);
    if (bracket(f_lo / k) < 0 || bracket(f_hi / k) < 0) {
      throw std::runtime_error("measure_window: crossings not bracketed for n=" + std::to_string(n) +
                               ", k=" + std::to_string(k));
    }
  }

  for (double f : {f_lo, f_hi}) {
    const double level = f / k;
    std::ptrdiff_t i = bracket(level);
    // Refine the bracketing interval by midpoint insertion.
    while (grid[static_cast<std::size_t>(i)].first - grid[static_cast<std::size_t>(i - 1)].first > min_spacing) {
      const double mid = 0.5 * (grid[static_cast<std::size_t>(i)].first + grid[static_cast<std::size_t>(i - 1)].first);
      grid.insert(grid.begin() + i, {mid, value(mid)});
      i = bracket(level);
    }
    const auto& [t0, e0] = grid[static_cast<std::size_t>(i - 1)];
    const auto& [t1, e1] = grid[static_cast<std::size_t>(i)];
    out.crossings[f] = t0 + (level - e0) * (t1 - t0) / (e1 - e0);
  }
  out.grid = std::move(grid);
  out.width = out.crossings.at(f_hi) - out.crossings.at(f_lo);
  return out;
}

}  // namespace interchange::transition
