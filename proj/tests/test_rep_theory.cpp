#include <doctest.h>

#include "interchange/closed_form.hpp"
#include "interchange/rep_theory.hpp"
#include "interchange/transition.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

using namespace interchange;
using rep::YoungDiagram;

namespace {

// Number of standard Young tableaux of the given shape, by filling 1..n one box at a time.
long count_tableaux(const std::vector<int>& shape) {
  std::vector<int> filled(shape.size(), 0);
  const int n = std::accumulate(shape.begin(), shape.end(), 0);
  std::function<long(int)> fill = [&](int placed) -> long {
    if (placed == n) return 1;
    long total = 0;
    for (std::size_t r = 0; r < shape.size(); ++r) {
      const bool room = filled[r] < shape[r];
      const bool supported = r == 0 || filled[r - 1] > filled[r];
      if (room && supported) {
        ++filled[r];
        total += fill(placed + 1);
        --filled[r];
      }
    }
    return total;
  };
  return fill(0);
}

const rep::RepTerm* find_term(const rep::CycleBasis& basis, const std::vector<int>& rows) {
  for (const auto& term : basis.terms) {
    if (term.diagram == YoungDiagram(rows)) return &term;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("Young diagram validation") {
  CHECK_THROWS_AS(YoungDiagram({}), std::invalid_argument);
  CHECK_THROWS_AS(YoungDiagram({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(YoungDiagram({2, 0}), std::invalid_argument);
  YoungDiagram d({3, 1, 1});
  CHECK(d.size() == 5);
  CHECK(d.column_length(0) == 3);
  CHECK(d.column_length(1) == 1);
  CHECK(d.to_string() == "[3,1,1]");
}

TEST_CASE("hook length dimension matches tableau enumeration") {
  CHECK(rep::hook_length_dimension(YoungDiagram({7})) == 1);
  CHECK(rep::hook_length_dimension(YoungDiagram({2, 2})) == 2);
  CHECK(rep::hook_length_dimension(YoungDiagram({3, 1})) == 3);
  CHECK(count_tableaux({2, 2}) == 2);
  CHECK(count_tableaux({3, 1}) == 3);

  const std::vector<std::vector<int>> shapes{{1}, {2, 1}, {3, 2}, {2, 2, 1}, {4, 2, 1}, {3, 3, 2}, {5, 1, 1, 1}, {4, 3, 2, 1}};
  for (const auto& shape : shapes) {
    CAPTURE(YoungDiagram(shape).to_string());
    CHECK(rep::hook_length_dimension(YoungDiagram(shape)) == count_tableaux(shape));
  }
}

TEST_CASE("Frobenius character ratio") {
  CHECK(rep::frobenius_ratio(YoungDiagram({6})) == 1);
  CHECK(rep::frobenius_ratio(YoungDiagram({1, 1, 1, 1, 1})) == -1);
  CHECK_THROWS_AS(rep::frobenius_ratio(YoungDiagram({1})), std::invalid_argument);
  // [n-k, k-i, 1^i]: ((n-k)^2 - n - 2k + k^2 - 2ik) / (n(n-1))
  for (int n = 4; n <= 14; ++n) {
    for (int k = 1; 2 * k <= n; ++k) {
      for (int i = 0; i < k; ++i) {
        std::vector<int> rows{n - k, k - i};
        rows.insert(rows.end(), static_cast<std::size_t>(i), 1);
        mpq_class expected((n - k) * (n - k) - n - 2 * k + k * k - 2 * i * k, n * (n - 1));
        expected.canonicalize();
        CHECK(rep::frobenius_ratio(YoungDiagram(rows)) == expected);
      }
    }
  }
}

TEST_CASE("cycle basis n=4 k=2") {
  const auto basis = rep::cycle_basis(4, 2);
  REQUIRE(basis.terms.size() == 3);
  const auto* trivial = find_term(basis, {4});
  const auto* i0 = find_term(basis, {2, 2});
  const auto* i1 = find_term(basis, {2, 1, 1});
  REQUIRE(trivial);
  REQUIRE(i0);
  REQUIRE(i1);
  CHECK(trivial->a == mpq_class(1, 2));
  CHECK(trivial->d == 1);
  CHECK(!trivial->index.has_value());
  CHECK(i0->a == mpq_class(1, 2));
  CHECK(i0->d == 2);
  CHECK(i1->a == mpq_class(-1, 2));
  CHECK(i1->d == 3);
  CHECK(basis.identity_value() == 0);
}

TEST_CASE("cycle basis n=3 k=3 uses the k > n/2 rules") {
  // S_3 character table: alpha_3 = (chi_[3] - chi_[2,1] + chi_[1,1,1]) / 3.
  const auto basis = rep::cycle_basis(3, 3);
  REQUIRE(basis.terms.size() == 3);
  const auto* standard = find_term(basis, {2, 1});
  const auto* sign = find_term(basis, {1, 1, 1});
  REQUIRE(standard);
  REQUIRE(sign);
  CHECK(standard->a == mpq_class(-1, 3));
  CHECK(standard->d == 2);
  CHECK(*standard->index == 0);
  CHECK(sign->a == mpq_class(1, 3));
  CHECK(*sign->index == 1);
  for (const auto& term : basis.terms) CHECK(term.index != 2);  // i = 2k - n - 1 is absent
  CHECK(basis.identity_value() == 0);
}

TEST_CASE("cycle basis k=1") {
  for (int n = 2; n <= 12; ++n) {
    const auto basis = rep::cycle_basis(n, 1);
    REQUIRE(basis.terms.size() == 2);
    CHECK(basis.terms[1].diagram == YoungDiagram({n - 1, 1}));
    CHECK(basis.terms[1].a == 1);
    CHECK(basis.terms[1].d == n - 1);
    CHECK(basis.identity_value() == n);
  }
  CHECK(rep::cycle_basis(1, 1).identity_value() == 1);
  CHECK_THROWS_AS(rep::cycle_basis(5, 0), std::invalid_argument);
  CHECK_THROWS_AS(rep::cycle_basis(5, 6), std::invalid_argument);
}

TEST_CASE("basis invariants over all n <= 30") {
  for (int n = 2; n <= 30; ++n) {
    for (int k = 1; k <= n; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      const auto basis = rep::cycle_basis(n, k);
      CHECK(basis.identity_value() == (k == 1 ? n : 0));
      const std::size_t nontrivial = 2 * k <= n ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k - 1);
      CHECK(basis.terms.size() == nontrivial + 1);
      for (const auto& term : basis.terms) {
        CHECK(term.d >= 1);
        CHECK(term.r >= -1);
        CHECK(term.r <= 1);
        CHECK(term.lambda <= 0);
        CHECK((term.lambda == 0) == (term.diagram == YoungDiagram({n})));
        CHECK(mpq_class(term.lambda * 2).get_den() == 1);
        CHECK(mpq_class(term.r * n * (n - 1)).get_den() == 1);
        if (term.index && 2 * k <= n) CHECK(mpq_class(term.d) == rep::closed_dimension(n, k, *term.index));
      }
    }
  }
}

TEST_CASE("spectral sum at t = 0 is exact") {
  for (int n = 1; n <= 25; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto r = rep::spectral_expected_cycles(n, k, 0.0, rep::default_precision_bits(n, k));
      CHECK(r.to_double() == (k == 1 ? n : 0));
      CHECK(r.error_bound == 0.0);
    }
  }
}

TEST_CASE("spectral sum n=2 k=2 is the two-state chain") {
  for (double t : {0.01, 0.3, 1.0, 4.0}) {
    const double expected = 0.5 * -std::expm1(-2.0 * t);
    CHECK(rep::spectral_expected_cycles(2, 2, t, 64).to_double() == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("spectral sum agrees with the closed form at n=20 k=10") {
  const double spectral = rep::spectral_expected_cycles_adaptive(20, 10, 0.08).to_double();
  const double closed = closed_form::expected_cycles(20, 10, 0.08);
  CHECK(std::abs(spectral - closed) <= 1e-10 * closed);
}

TEST_CASE("spectral sum stays within [0, n/k]") {
  for (int n : {5, 9, 16}) {
    for (int k = 1; k <= n; ++k) {
      for (double t : {0.001, 0.05, 0.5, 3.0}) {
        const double v = rep::spectral_expected_cycles_adaptive(n, k, t).to_double();
        CHECK(v >= -1e-12);
        CHECK(v <= static_cast<double>(n) / k + 1e-12);
      }
    }
  }
}

TEST_CASE("default precision signals when cancellation is too deep") {
  const int n = 60, k = 53;
  const double t = transition::critical_time(n, k) / 4.0;
  CHECK(rep::default_precision_bits(n, k) < 100);
  CHECK_THROWS_AS(rep::spectral_expected_cycles(n, k, t, rep::default_precision_bits(n, k)),
                  rep::InsufficientPrecision);
  const auto r = rep::spectral_expected_cycles_adaptive(n, k, t);
  CHECK(r.precision_bits > rep::default_precision_bits(n, k));
  CHECK(r.to_double() == doctest::Approx(closed_form::expected_cycles(n, k, t)).epsilon(1e-10));
  CHECK_THROWS_AS(rep::spectral_expected_cycles(n, k, t, 32), std::invalid_argument);
}
