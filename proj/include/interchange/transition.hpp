#pragma once

// Sharp transition of E(s_k(t)) from 0 to 1/k around the critical time
// t_crit, defined by exp(-k t_crit) = (n-k)/(n-1).

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace interchange::transition {

struct TransitionParams {
  int n = 0;
  int k = 0;
  double t_crit = 0.0;
  double y_peak = 0.0;  // (n-k)/(n-1), the maximizer of phi
  double q = 0.0;       // n^(3/2) k^(-3/2) (n-k)^(-1/2)

  /// Requires 1 <= k < n.
  static TransitionParams make(int n, int k);
};

double critical_time(int n, int k);

/// Time scale for grids over 1 <= k <= n: t_crit when 1 < k < n, 1/n for
/// k = 1 (where t_crit = 0), log(n)/n for k = n (where t_crit is undefined).
double reference_time(int n, int k);

/// (n-k) log y + (k-1) log(1-y) for 0 < y < 1.
double psi(double y, int n, int k);

/// bigC q exp(-smallc (n-k) min(|t - t_crit|^2 k^2, 1)).
double theorem2_envelope(int n, int k, double t, double big_c, double small_c);

/// |E(s_k(t)) - (1/k) 1{t > t_crit}|.
double step_deviation(int n, int k, double t);

/// Smallest bigC for which the envelope with small_c covers step_deviation at every t.
double fit_envelope_constant(int n, int k, std::span<const double> ts, double small_c);

/// `points` equally spaced times on [0, 3 t_crit].
std::vector<double> envelope_grid(int n, int k, int points = 200);

/// (1/k) C(n,k) x^(n-k) (1-x)^(k-1).
double b1_term(int n, int k, double x);
/// (q/k) exp(-min(|eps|,1/4)^2 (n-k)/4), eps = (x - y_peak)/y_peak; the bound without its constant.
double b1_envelope(int n, int k, double x);
/// Smallest C' with b1_term <= C' b1_envelope over xs.
double fit_b1_constant(int n, int k, std::span<const double> xs);

/// Half-width scale 1/(k sqrt(n-k)) of the transition in t.
double window_scale(int n, int k);

struct TransitionProfile {
  int n = 0;
  int k = 0;
  double t_crit = 0.0;
  std::vector<std::pair<double, double>> grid;  // (t, E(s_k(t))), increasing t
  std::map<double, double> crossings;            // fraction f -> first t with E = f/k
  double width = 0.0;                            // t(f_hi) - t(f_lo)
};

inline constexpr double kDefaultLowFraction = 0.25;
inline constexpr double kDefaultHighFraction = 0.75;

/// Profiles E(s_k) around t_crit and locates the f_lo/k and f_hi/k crossings.
/// Throws std::runtime_error if a crossing is not bracketed after one widening.
TransitionProfile measure_window(int n, int k, double f_lo = kDefaultLowFraction,
                                 double f_hi = kDefaultHighFraction, int resolution = 64);

}  // namespace interchange::transition
