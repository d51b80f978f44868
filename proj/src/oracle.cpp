#include "interchange/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace interchange::oracle {

namespace {

Partition cycle_type(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  Partition out;
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (std::size_t v = s; !seen[v]; v = static_cast<std::size_t>(perm[v])) {
      seen[v] = 1;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Consecutive cycles (0 1 .. p1-1)(p1 .. p1+p2-1)...
std::vector<int> representative(const Partition& p, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  int start = 0;
  for (int part : p) {
    for (int i = 0; i < part; ++i) perm[static_cast<std::size_t>(start + i)] = start + (i + 1) % part;
    start += part;
  }
  return perm;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

std::vector<Partition> partitions(int n) {
  if (n < 1) throw std::invalid_argument("partitions: n must be >= 1");
  std::vector<Partition> out;
  Partition current;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      current.push_back(part);
      rec(remaining - part, part);
      current.pop_back();
    }
  };
  rec(n, n);
  return out;
}

int ClassChain::index_of(const Partition& p) const {
  const auto it = std::find(classes.begin(), classes.end(), p);
  if (it == classes.end()) throw std::out_of_range("unknown cycle type");
  return static_cast<int>(it - classes.begin());
}

int ClassChain::identity_class() const { return index_of(Partition(static_cast<std::size_t>(n), 1)); }

ClassChain build_class_chain(int n) {
  if (n < 2 || n > kMaxOracleN) {
    throw std::invalid_argument("build_class_chain: need 2 <= n <= " + std::to_string(kMaxOracleN));
  }
  ClassChain chain;
  chain.n = n;
  chain.classes = partitions(n);
  const std::size_t m = chain.classes.size();
  chain.rates.assign(m, std::vector<double>(m, 0.0));
  chain.cycle_counts.assign(m, std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  chain.class_weights.assign(m, 0.0);

  for (std::size_t c = 0; c < m; ++c) {
    const Partition& p = chain.classes[c];
    for (int part : p) ++chain.cycle_counts[c][static_cast<std::size_t>(part)];
    // |class| / n! = 1 / prod_k k^{m_k} m_k!
    double log_centralizer = 0.0;
    for (int k = 1; k <= n; ++k) {
      const int mk = chain.cycle_counts[c][static_cast<std::size_t>(k)];
      log_centralizer += mk * std::log(static_cast<double>(k)) + log_factorial(mk);
    }
    chain.class_weights[c] = std::exp(-log_centralizer);

    const std::vector<int> base = representative(p, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        std::vector<int> perm = base;
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        chain.rates[c][static_cast<std::size_t>(chain.index_of(cycle_type(perm)))] += 1.0;
      }
    }
    chain.rates[c][c] -= 0.5 * n * (n - 1);
  }
  return chain;
}

std::vector<double> class_probabilities(const ClassChain& chain, double t) {
  if (!(t >= 0.0)) throw std::domain_error("class_probabilities: t must be >= 0");
  const std::size_t m = chain.classes.size();
  std::vector<double> start(m, 0.0);
  start[static_cast<std::size_t>(chain.identity_class())] = 1.0;
  if (t == 0.0) return start;

  // Uniformization at rate L = n(n-1)/2: P = I + Q/L, p(t) = sum_j Pois(Lt; j) p0 P^j.
  const double rate = 0.5 * chain.n * (chain.n - 1);
  std::vector<std::vector<double>> step(m, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) step[a][b] = (a == b ? 1.0 : 0.0) + chain.rates[a][b] / rate;
  }
  const double mean = rate * t;
  const auto terms = static_cast<long>(std::ceil(mean + 40.0 * std::sqrt(mean) + 20.0));

  std::vector<double> current = start, next(m), out(m, 0.0);
  for (long j = 0; j <= terms; ++j) {
    const double weight = std::exp(-mean + j * std::log(mean) - std::lgamma(j + 1.0));
    for (std::size_t a = 0; a < m; ++a) out[a] += weight * current[a];
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      if (current[a] == 0.0) continue;
      for (std::size_t b = 0; b < m; ++b) next[b] += current[a] * step[a][b];
    }
    current.swap(next);
  }
  return out;
}

double expected_cycles(const ClassChain& chain, int k, double t) {
  if (k < 1 || k > chain.n) throw std::invalid_argument("expected_cycles: need 1 <= k <= n");
  const auto probs = class_probabilities(chain, t);
  double sum = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c) sum += probs[c] * chain.cycle_counts[c][static_cast<std::size_t>(k)];
  return sum;
}

double brute_force_expected_cycles(int n, int k, double t) { return expected_cycles(build_class_chain(n), k, t); }

}  // namespace interchange::oracle
