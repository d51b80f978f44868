#pragma once

// Representation-theoretic decomposition of the k-cycle count on S_n and
// the spectral evaluation of E(s_k(t)) for the interchange process on K_n.

#include <gmpxx.h>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "interchange/big_float.hpp"

namespace interchange::rep {

/// A partition of n written as non-increasing positive rows.
class YoungDiagram {
 public:
  /// Throws std::invalid_argument unless rows is non-empty, positive and non-increasing.
  explicit YoungDiagram(std::vector<int> rows);

  std::span<const int> rows() const { return rows_; }
  int size() const { return n_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  /// Length of column j (0-based), i.e. number of rows longer than j.
  int column_length(int j) const;

  std::string to_string() const;

  friend bool operator==(const YoungDiagram&, const YoungDiagram&) = default;

 private:
  std::vector<int> rows_;
  int n_ = 0;
};

/// n! / prod(hook lengths).
mpz_class hook_length_dimension(const YoungDiagram& diagram);

/// Character ratio chi(tau)/d at a transposition: sum_i rho_i^2 - (2i-1) rho_i over n(n-1).
mpq_class frobenius_ratio(const YoungDiagram& diagram);

/// One irreducible representation in the decomposition of alpha_k.
struct RepTerm {
  YoungDiagram diagram;
  std::optional<int> index;  // nullopt for the trivial representation [n]
  mpq_class a;               // coefficient of chi_rho in alpha_k
  mpz_class d;               // dimension
  mpq_class r;               // character ratio at a transposition
  mpq_class lambda;          // eigenvalue C(n,2)(r - 1) of the generator on rho
};

struct CycleBasis {
  int n = 0;
  int k = 0;
  std::vector<RepTerm> terms;  // terms[0] is the trivial representation

  /// sum_rho a_rho d_rho, the value of alpha_k at the identity.
  mpq_class identity_value() const;
};

/// n!(n-2k+i+1) / (i! k (n-k)! (k-i-1)! (n-k+i+1)) as an exact rational. Equals
/// the dimension of [n-k, k-i, 1^i] when that diagram exists; for the
/// [k-i-1, n-k+1, 1^i] family (k > n/2) it is minus the dimension.
mpq_class closed_dimension(int n, int k, int i);

/// Full non-zero decomposition of alpha_k, 1 <= k <= n.
CycleBasis cycle_basis(int n, int k);

/// ceil(log2 C(n,k)) + 64: starting working precision for the spectral sum.
int default_precision_bits(int n, int k);

class InsufficientPrecision : public std::runtime_error {
 public:
  InsufficientPrecision(const std::string& what, int bits, double relative_error_bound)
      : std::runtime_error(what), bits_(bits), relative_error_bound_(relative_error_bound) {}
  int bits() const { return bits_; }
  double relative_error_bound() const { return relative_error_bound_; }

 private:
  int bits_;
  double relative_error_bound_;
};

struct SpectralResult {
  BigFloat value;
  double error_bound = 0.0;  // absolute, certified to first order in 2^-bits
  int precision_bits = 0;

  double to_double() const { return value.to_double(); }
};

/// Relative error allowed before a fixed-precision evaluation gives up (2^-30).
inline constexpr double kSpectralRelativeTolerance = 0x1p-30;

/// sum_rho a_rho d_rho exp(lambda_rho t) at the given working precision.
/// Throws InsufficientPrecision when error_bound > max_relative_error * |value|.
SpectralResult spectral_sum(const CycleBasis& basis, double t, int precision_bits,
                            double max_relative_error = kSpectralRelativeTolerance);

SpectralResult spectral_expected_cycles(int n, int k, double t, int precision_bits,
                                        double max_relative_error = kSpectralRelativeTolerance);

/// Starts at default_precision_bits(n, k) and raises the precision until the
/// certified relative error is below max_relative_error.
SpectralResult spectral_expected_cycles_adaptive(int n, int k, double t,
                                                 double max_relative_error = 0x1p-60,
                                                 int max_bits = 1 << 16);

/// Same escalation loop over a caller-supplied basis.
SpectralResult spectral_sum_adaptive(const CycleBasis& basis, double t,
                                     double max_relative_error = 0x1p-60, int max_bits = 1 << 16);

}  // namespace interchange::rep
