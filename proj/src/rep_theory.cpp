#include "interchange/rep_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace interchange::rep {

namespace {

mpz_class factorial(long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

mpz_class binomial(long n, long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

std::vector<int> hook_shape(int first, int second, int ones) {
  std::vector<int> rows{first};
  if (second > 0) rows.push_back(second);
  rows.insert(rows.end(), static_cast<std::size_t>(ones), 1);
  return rows;
}

void check_k(int n, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("cycle size k must satisfy 1 <= k <= n (got n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ")");
  }
}

// n(n-1) r for the diagrams carrying alpha_k; identical for both families.
long ratio_numerator(long n, long k, long i) { return (n - k) * (n - k) - n - 2 * k + k * k - 2 * i * k; }

RepTerm make_term(int n, std::vector<int> rows, std::optional<int> index, mpq_class a) {
  YoungDiagram diagram(std::move(rows));
  mpz_class d = hook_length_dimension(diagram);
  mpq_class r = n >= 2 ? frobenius_ratio(diagram) : mpq_class(1);
  mpq_class lambda = mpq_class(mpz_class(n) * (n - 1), 2) * (r - 1);
  lambda.canonicalize();
  return RepTerm{std::move(diagram), index, std::move(a), std::move(d), std::move(r), std::move(lambda)};
}

}  // namespace

YoungDiagram::YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("Young diagram needs at least one row");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] < 1) throw std::invalid_argument("Young diagram rows must be positive: " + to_string());
    if (i > 0 && rows_[i] > rows_[i - 1]) {
      throw std::invalid_argument("Young diagram rows must be non-increasing: " + to_string());
    }
    n_ += rows_[i];
  }
}

int YoungDiagram::column_length(int j) const {
  return static_cast<int>(std::count_if(rows_.begin(), rows_.end(), [j](int len) { return len > j; }));
}

std::string YoungDiagram::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_.size(); ++i) os << (i ? "," : "") << rows_[i];
  os << ']';
  return os.str();
}

mpz_class hook_length_dimension(const YoungDiagram& diagram) {
  mpz_class hooks = 1;
  const auto rows = diagram.rows();
  for (int r = 0; r < diagram.num_rows(); ++r) {
    for (int c = 0; c < rows[r]; ++c) {
      const int arm = rows[r] - c - 1;
      const int leg = diagram.column_length(c) - r - 1;
      hooks *= arm + leg + 1;
    }
  }
  mpz_class out = factorial(diagram.size());
  mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), hooks.get_mpz_t());
  return out;
}

mpq_class frobenius_ratio(const YoungDiagram& diagram) {
  const long n = diagram.size();
  if (n < 2) throw std::invalid_argument("character ratio at a transposition needs n >= 2");
  mpz_class numerator = 0;
  const auto rows = diagram.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const long row = rows[i];
    const long idx = static_cast<long>(i) + 1;
    numerator += row * row - (2 * idx - 1) * row;
  }
  mpq_class out(numerator, mpz_class(n) * (n - 1));
  out.canonicalize();
  return out;
}

mpq_class CycleBasis::identity_value() const {
  mpq_class sum = 0;
  for (const auto& term : terms) sum += term.a * term.d;
  return sum;
}

mpq_class closed_dimension(int n, int k, int i) {
  if (i < 0 || i > k - 1) throw std::invalid_argument("closed_dimension: need 0 <= i <= k-1");
  mpz_class num = factorial(n) * (n - 2 * k + i + 1);
  mpz_class den = factorial(i) * k * factorial(n - k) * factorial(k - i - 1) * (n - k + i + 1);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

CycleBasis cycle_basis(int n, int k) {
  check_k(n, k);
  CycleBasis basis{n, k, {}};
  basis.terms.push_back(make_term(n, {n}, std::nullopt, mpq_class(1, k)));

  auto sign = [](int i) { return (i % 2 == 0) ? 1 : -1; };
  auto push = [&](int i, std::vector<int> rows, int coefficient_sign, int dimension_sign) {
    RepTerm term = make_term(n, std::move(rows), i, mpq_class(coefficient_sign, k));
    // Cross-check against the closed dimension and the common ratio expression.
    if (mpq_class(term.d * dimension_sign) != closed_dimension(n, k, i)) {
      throw std::logic_error("dimension mismatch for " + term.diagram.to_string());
    }
    if (n >= 2 && term.r * n * (n - 1) != ratio_numerator(n, k, i)) {
      throw std::logic_error("character ratio mismatch for " + term.diagram.to_string());
    }
    basis.terms.push_back(std::move(term));
  };

  if (2 * k <= n) {
    for (int i = 0; i <= k - 1; ++i) push(i, hook_shape(n - k, k - i, i), sign(i), 1);
  } else {
    for (int i = 0; i <= 2 * k - n - 2; ++i) push(i, hook_shape(k - i - 1, n - k + 1, i), -sign(i), -1);
    // no representation at i = 2k - n - 1
    for (int i = 2 * k - n; i <= k - 1; ++i) push(i, hook_shape(n - k, k - i, i), sign(i), 1);
  }
  return basis;
}

int default_precision_bits(int n, int k) {
  check_k(n, k);
  mpz_class c = binomial(n, k);
  const int log2_ceil = c > 1 ? static_cast<int>(mpz_sizeinbase(mpz_class(c - 1).get_mpz_t(), 2)) : 0;
  return log2_ceil + 64;
}

SpectralResult spectral_sum(const CycleBasis& basis, double t, int precision_bits, double max_relative_error) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("spectral_sum: t must be finite and >= 0");
  if (precision_bits < 64) throw std::invalid_argument("spectral_sum: precision_bits must be >= 64");

  // Integer coefficients z = a*d*D over a common denominator D.
  mpz_class common = 1;
  for (const auto& term : basis.terms) {
    mpq_class c = term.a * term.d;
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), c.get_den_mpz_t());
  }

  const long prec = precision_bits;
  const double unit = std::ldexp(1.0, 1 - precision_bits);
  BigFloat sum(prec), arg(prec), term_value(prec), abs_term(64), error(64), scratch(64);

  for (const auto& term : basis.terms) {
    mpq_class cq = term.a * term.d * common;
    const mpz_class z = cq.get_num();  // exact: D clears every denominator
    if (z == 0) continue;

    int inexact_arg = mpfr_set_q(arg.get(), term.lambda.get_mpq_t(), MPFR_RNDN);
    inexact_arg |= mpfr_mul_d(arg.get(), arg.get(), t, MPFR_RNDN);
    const int inexact_exp = mpfr_exp(term_value.get(), arg.get(), MPFR_RNDN);
    const int inexact_mul = mpfr_mul_z(term_value.get(), term_value.get(), z.get_mpz_t(), MPFR_RNDN);

    double relative = 0.0;
    if (inexact_arg) relative += std::abs(mpfr_get_d(arg.get(), MPFR_RNDU)) * unit * 1.01;
    if (inexact_exp) relative += unit;
    if (inexact_mul) relative += unit;
    mpfr_abs(abs_term.get(), term_value.get(), MPFR_RNDU);
    mpfr_mul_d(scratch.get(), abs_term.get(), relative, MPFR_RNDU);
    mpfr_add(error.get(), error.get(), scratch.get(), MPFR_RNDU);

    if (mpfr_add(sum.get(), sum.get(), term_value.get(), MPFR_RNDN) != 0) {
      mpfr_abs(scratch.get(), sum.get(), MPFR_RNDU);
      mpfr_mul_d(scratch.get(), scratch.get(), unit, MPFR_RNDU);
      mpfr_add(error.get(), error.get(), scratch.get(), MPFR_RNDU);
    }
  }

  mpfr_div_z(error.get(), error.get(), common.get_mpz_t(), MPFR_RNDU);
  if (mpfr_div_z(sum.get(), sum.get(), common.get_mpz_t(), MPFR_RNDN) != 0) {
    mpfr_abs(scratch.get(), sum.get(), MPFR_RNDU);
    mpfr_mul_d(scratch.get(), scratch.get(), unit, MPFR_RNDU);
    mpfr_add(error.get(), error.get(), scratch.get(), MPFR_RNDU);
  }

  // error <= tol * |sum| ?
  mpfr_abs(scratch.get(), sum.get(), MPFR_RNDD);
  mpfr_mul_d(scratch.get(), scratch.get(), max_relative_error, MPFR_RNDD);
  if (mpfr_cmp(error.get(), scratch.get()) > 0) {
    const double rel = sum.is_zero() ? std::numeric_limits<double>::infinity()
                                     : mpfr_get_d(error.get(), MPFR_RNDU) / std::abs(sum.to_double());
    throw InsufficientPrecision("spectral sum for n=" + std::to_string(basis.n) + ", k=" + std::to_string(basis.k) +
                                    " needs more than " + std::to_string(precision_bits) + " bits",
                                precision_bits, rel);
  }
  return SpectralResult{std::move(sum), mpfr_get_d(error.get(), MPFR_RNDU), precision_bits};
}

SpectralResult spectral_expected_cycles(int n, int k, double t, int precision_bits, double max_relative_error) {
  return spectral_sum(cycle_basis(n, k), t, precision_bits, max_relative_error);
}

SpectralResult spectral_sum_adaptive(const CycleBasis& basis, double t, double max_relative_error, int max_bits) {
  int bits = default_precision_bits(basis.n, basis.k);
  for (;;) {
    try {
      return spectral_sum(basis, t, bits, max_relative_error);
    } catch (const InsufficientPrecision& e) {
      if (bits >= max_bits) throw;
      const double deficit = std::log2(e.relative_error_bound() / max_relative_error);
      const int step = std::isfinite(deficit) ? std::max(32, static_cast<int>(std::ceil(deficit)) + 16) : bits;
      bits = std::min(max_bits, bits + step);
    }
  }
}

SpectralResult spectral_expected_cycles_adaptive(int n, int k, double t, double max_relative_error, int max_bits) {
  return spectral_sum_adaptive(cycle_basis(n, k), t, max_relative_error, max_bits);
}

}  // namespace interchange::rep
