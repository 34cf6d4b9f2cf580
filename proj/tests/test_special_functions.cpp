#include "doctest.h"

#include <cmath>
#include <vector>

#include "qbnf/errors.hpp"
#include "qbnf/gevrey_indices.hpp"
#include "qbnf/multi_index.hpp"
#include "qbnf/special_functions.hpp"

using namespace qbnf;

TEST_CASE("gamma at half-integers matches sqrt(pi) closed forms") {
  const double sqrt_pi = 1.7724538509055159;
  CHECK(gamma_fn(0.5) == doctest::Approx(sqrt_pi).epsilon(1e-14));
  CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-14));
  CHECK(gamma_fn(2.5) == doctest::Approx(0.75 * sqrt_pi).epsilon(1e-14));
}

TEST_CASE("gamma at integer arguments is the exact factorial") {
  for (int m = 1; m <= 21; ++m) {
    CHECK(gamma_fn(static_cast<double>(m)) == factorial_real(m - 1));
  }
  CHECK(factorial_exact(20) == 2432902008176640000ull);
  CHECK_THROWS_AS(factorial_exact(21), SizeError);
}

TEST_CASE("gamma recurrence and domain") {
  for (double x : {0.37, 3.7, 24.7, 150.3}) {
    CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-2.0), DomainError);
  CHECK_THROWS_AS(beta_fn(0.0, 1.0), DomainError);
}

TEST_CASE("gamma_plus clamps below 1") {
  CHECK(gamma_plus(0.0) == 1.0);
  CHECK(gamma_plus(0.3) == 1.0);
  CHECK(gamma_plus(1.0) == 1.0);
  CHECK(gamma_plus(5.0) == doctest::Approx(24.0).epsilon(1e-14));
}

TEST_CASE("beta closed forms, symmetry, and the independent quadrature route") {
  CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta_fn(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  for (auto [x, y] : std::vector<std::pair<double, double>>{{0.5, 7.25}, {3.0, 3.0}, {10.5, 0.25}}) {
    CHECK(beta_fn(x, y) == doctest::Approx(beta_fn(y, x)).epsilon(1e-13));
    CHECK(log_beta_integral(x, y) == doctest::Approx(log_beta_fn(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("product identity and domination inequality hold on a grid") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) xs.push_back(1.0 + 39.0 * i / 11.0);
  for (int j = 0; j < 8; ++j) ys.push_back(40.0 * (j + 1) / 8.0);
  auto rep = check_gamma_beta_lemmas(xs, ys);
  CHECK(rep.points_checked == 96);
  CHECK(rep.max_identity_rel_err <= 1e-12);
  CHECK(rep.inequality_violations == 0);
  // x = 1 makes the inequality an exact equality; the margin may only dip by
  // rounding, which the default tolerance absorbs.
  CHECK(rep.min_inequality_margin >= -5e-13);
}

TEST_CASE("binomial-gamma domination: neutral sample pins the constant at 1") {
  auto idx = GevreyIndices::make(2.0, 9.0, 9.0, 3.0);
  auto rep = check_binomial_gamma_lemma({BinomialGammaSample{0, 0, 0, 0, 1.0, 1.0}}, idx);
  CHECK(rep.samples_checked == 1);
  // All binomials are 1, both Gamma factors are Gamma(1), B(1,1) = 1: the
  // two sides coincide and the fitted constant is exactly the ratio 1.
  CHECK(rep.fitted_m == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.ratios.size() == 1);
}

TEST_CASE("binomial-gamma domination: grid constants stay finite and ordered") {
  auto idx = GevreyIndices::make(2.0, 9.0, 10.0, 3.0);
  auto samples = binomial_gamma_sample_grid(2, {1.0, 2.5});
  auto rep = check_binomial_gamma_lemma(samples, idx);
  CHECK(rep.samples_checked == static_cast<int>(samples.size()));
  CHECK(rep.ratios.size() == samples.size());
  CHECK(rep.fitted_m >= 1.0 - 1e-12);
  CHECK(std::isfinite(rep.fitted_m));
  double worst_ratio = 0.0;
  for (double r : rep.ratios) {
    CHECK(std::isfinite(r));
    worst_ratio = std::max(worst_ratio, r);
  }
  CHECK(rep.fitted_m == doctest::Approx(worst_ratio).epsilon(1e-12));
}

TEST_CASE("multi-index arithmetic and enumeration") {
  MultiIndex a({2, 0, 1}), b({1, 0, 1});
  CHECK(a.order() == 3);
  CHECK(a.factorial() == 2.0);
  CHECK(b.leq(a));
  CHECK_FALSE(a.leq(b));
  CHECK(a.minus(b) == MultiIndex({1, 0, 0}));
  CHECK(a.plus(b) == MultiIndex({3, 0, 2}));

  auto level = multi_indices_of_order(2, 3);
  CHECK(level.size() == 4); // (3,0) (2,1) (1,2) (0,3)
  auto upto = multi_indices_up_to(2, 3);
  CHECK(upto.size() == 10);
  // Ordered by (total order, lex); successive orders partition the list.
  for (size_t i = 1; i < upto.size(); ++i) CHECK(upto[i - 1].order() <= upto[i].order());
}
