#pragma once

// Brute-force ground truth for small n: the random-transposition walk
// projected onto conjugacy classes (cycle types), exponentiated by
// uniformization.

#include <vector>

namespace interchange::oracle {

inline constexpr int kMaxOracleN = 8;

using Partition = std::vector<int>;  // non-increasing parts

/// All partitions of n, in reverse lexicographic order ([n] first, [1^n] last).
std::vector<Partition> partitions(int n);

struct ClassChain {
  int n = 0;
  std::vector<Partition> classes;
  std::vector<std::vector<double>> rates;  // rates[from][to]; diagonal = -n(n-1)/2
  std::vector<std::vector<int>> cycle_counts;  // cycle_counts[class][k] = multiplicity of part k, k = 0..n
  std::vector<double> class_weights;           // |class| / n!

  int index_of(const Partition& p) const;
  int identity_class() const;
};

/// Requires 2 <= n <= 8.
ClassChain build_class_chain(int n);

/// Class probabilities at time t starting from the identity.
std::vector<double> class_probabilities(const ClassChain& chain, double t);

/// sum over classes of P(class at t) * alpha_k(class).
double expected_cycles(const ClassChain& chain, int k, double t);

double brute_force_expected_cycles(int n, int k, double t);

}  // namespace interchange::oracle
