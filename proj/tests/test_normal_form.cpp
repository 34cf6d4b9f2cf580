#include "doctest.h"

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "qbnf/errors.hpp"
#include "qbnf/normal_form.hpp"
#include "qbnf/special_functions.hpp"

using namespace qbnf;
using testutil::kGoldenMean;

namespace {

ApproximationFunction delta2() { return ApproximationFunction::polynomial(2.0, 2.0); }

} // namespace

TEST_CASE("recursion slices demand their prerequisites") {
  SymbolShape sh{1, 0, 2, 1, {1.0}, 0.0};
  TorusSymbol slice(sh);
  CHECK_THROWS_AS(f_j1({}, {slice}, 3), SequencingError);
  CHECK_THROWS_AS(f_j1({slice}, {slice}, 1), SequencingError);
  CHECK_THROWS_AS(f_j2({slice}, {}, 2), SequencingError);
}

TEST_CASE("golden-mean pendulum: conjugator and normal form match hand values") {
  auto p = testutil::golden_symbol();
  auto res = run_recursion(p, testutil::golden_frequency(), delta2(), 0.05, 6);

  const double phi = kGoldenMean;
  // a_1 solves (1/i) L_omega a_1 = -cos(phi-angle) with the action-dependent
  // divisor (phi + x): mode +1 carries -1/2 times the expansion of 1/(phi+x).
  CHECK(res.a.coeff(1, {1}, MultiIndex({0})).real() ==
        doctest::Approx(-0.5 / phi).epsilon(1e-13));
  CHECK(res.a.coeff(1, {1}, MultiIndex({1})).real() ==
        doctest::Approx(0.5 / (phi * phi)).epsilon(1e-13));
  CHECK(res.a.coeff(1, {1}, MultiIndex({2})).real() ==
        doctest::Approx(-0.5 / (phi * phi * phi)).epsilon(1e-13));
  CHECK(res.a.coeff(1, {-1}, MultiIndex({0})).real() ==
        doctest::Approx(0.5 / phi).epsilon(1e-13));
  // Conjugator orders are mean-free and a_0 = 1.
  CHECK(res.a.coeff(0, {0}, MultiIndex({0})) == std::complex<double>(1.0));
  CHECK(res.a.order_slice(1).angle_average().total_norm() == 0.0);

  // Odd normal-form orders vanish by parity; the first correction is the
  // classical second-order term 1/(4 I0^2) at the base action.
  CHECK(res.p0.order_slice(1).total_norm() == 0.0);
  CHECK(res.p0.order_slice(2).total_norm() == 0.0);
  CHECK(res.p0.order_slice(3).total_norm() == 0.0);
  CHECK(res.p0.order_slice(5).total_norm() == 0.0);
  CHECK(res.p0.coeff(4, {0}, MultiIndex({0})).real() ==
        doctest::Approx(0.09549150281252627).epsilon(1e-12)); // (2 - phi)/4 = 1/(4 phi^2)
  CHECK(res.p0.coeff(6, {0}, MultiIndex({0})).real() != 0.0);
  CHECK(res.reality_deviation_p0 <= 1e-14);
  CHECK(res.fourier_clipped == 0.0);

  // Divisor bookkeeping: order 2 solves on modes +-1 against |omega| = phi.
  // Both modes tie at |<k, omega>| = phi; the strict minimum keeps the first
  // stored mode, and map order visits {-1} before {1}.
  REQUIRE(!res.divisor_stats.empty());
  CHECK(res.divisor_stats.front().order == 2);
  CHECK(res.divisor_stats.front().worst_k == std::vector<int>{-1});
  CHECK(res.divisor_stats.front().worst_divisor == doctest::Approx(phi).epsilon(1e-15));

  auto rep = verify_conjugacy(p, res);
  CHECK(rep.widened_radius == 48);
  CHECK(rep.diag.fourier_clipped == 0.0);
  CHECK(rep.max_residual <= 1e-10 * rep.p_total_norm);
}

TEST_CASE("two-torus instance verifies with zero Fourier clipping") {
  auto p = testutil::t2_symbol();
  auto res = run_recursion(p, testutil::t2_frequency(), delta2(), 0.05, 5);
  CHECK(res.fourier_clipped == 0.0);
  auto rep = verify_conjugacy(p, res);
  CHECK(rep.diag.fourier_clipped == 0.0);
  CHECK(rep.max_residual <= 1e-10 * rep.p_total_norm);
  CHECK(res.reality_deviation_p0 <= 1e-13);
}

TEST_CASE("zero perturbation is an exact fixed point") {
  const double phi = kGoldenMean;
  SymbolShape sh{1, 4, 3, 2, {phi}, 0.0};
  TorusSymbol p(sh);
  p.set_coeff(0, {0}, MultiIndex({0}), phi * phi / 2.0);
  p.set_coeff(0, {0}, MultiIndex({1}), phi);
  p.set_coeff(0, {0}, MultiIndex({2}), 0.5);
  auto res = run_recursion(p, testutil::golden_frequency(), delta2(), 0.05, 4);
  auto one = TorusSymbol::constant_one(1, 3, 2, {phi}, 0.0);
  CHECK(res.a.order_slice(0).serialize() == one.serialize());
  for (int j = 1; j < 4; ++j) CHECK(res.a.order_slice(j).total_norm() == 0.0);
  CHECK(res.p0.serialize() == p.retruncate(4, 3, 2).serialize());
  for (const auto& [order, norm] : res.residual_norms) {
    (void)order;
    CHECK(norm == 0.0);
  }
}

TEST_CASE("recursion preconditions are enforced") {
  auto p = testutil::golden_symbol();
  CHECK_THROWS_AS(run_recursion(p, testutil::golden_frequency(), delta2(), 0.05, 1), DomainError);
  CHECK_THROWS_AS(run_recursion(p, testutil::golden_frequency(), delta2(), 0.05, 7), ShapeError);
  CHECK_THROWS_AS(run_recursion(p, testutil::golden_frequency(), delta2(), 0.0, 4), DomainError);

  auto bad = testutil::golden_symbol();
  bad.set_coeff(1, {1}, MultiIndex({0}), 0.25); // p_1 must vanish
  CHECK_THROWS_AS(run_recursion(bad, testutil::golden_frequency(), delta2(), 0.05, 6), ShapeError);

  auto angle0 = testutil::golden_symbol();
  angle0.set_coeff(0, {2}, MultiIndex({0}), 0.25); // p_0 must be integrable
  CHECK_THROWS_AS(run_recursion(angle0, testutil::golden_frequency(), delta2(), 0.05, 6),
                  ShapeError);

  // Frequency disagreeing with grad p_0 at the base action.
  auto wrong = FrequencySpec::constant({1.0}, {kGoldenMean});
  CHECK_THROWS_AS(run_recursion(p, wrong, delta2(), 0.05, 6), ShapeError);
}

TEST_CASE("resonant frequency aborts the recursion naming the mode") {
  SymbolShape sh{2, 3, 3, 1, {0.2, 0.3}, 0.0};
  TorusSymbol p(sh);
  p.set_coeff(0, {0, 0}, MultiIndex({0, 0}), 0.5); // <omega, I0> value irrelevant
  p.set_coeff(0, {0, 0}, MultiIndex({1, 0}), 1.0);
  p.set_coeff(0, {0, 0}, MultiIndex({0, 1}), 1.0);
  p.set_coeff(2, {1, -1}, MultiIndex({0, 0}), 0.5);
  p.set_coeff(2, {-1, 1}, MultiIndex({0, 0}), 0.5);
  auto freq = FrequencySpec::constant({1.0, 1.0}, {0.2, 0.3});
  CHECK_THROWS_AS(run_recursion(p, freq, delta2(), 1e-6, 3), ResonanceError);
}

namespace {

// Wrap synthetic per-order conjugator norms into a result fit_growth accepts.
NormalFormResult synthetic_growth(const std::vector<double>& norms) {
  SymbolShape sh{1, static_cast<int>(norms.size()), 1, 0, {1.0}, 0.0};
  TorusSymbol a(sh), p0(sh);
  a.set_coeff(0, {0}, MultiIndex({0}), 1.0);
  for (size_t j = 0; j < norms.size(); ++j)
    a.set_coeff(static_cast<int>(j + 1), {1}, MultiIndex({0}), norms[j]);
  NormalFormResult r{std::move(a), std::move(p0), {}, {}, {}, 0.0, 0.0, 0.0};
  return r;
}

} // namespace

TEST_CASE("growth fit recovers factorial, geometric, and flat profiles") {
  std::vector<double> fac, geo, flat;
  for (int j = 1; j <= 11; ++j) {
    fac.push_back(gamma_fn(2.0 * j));
    geo.push_back(std::pow(2.0, j));
    flat.push_back(1.0);
  }
  auto ffit = fit_growth(synthetic_growth(fac));
  CHECK(ffit.rho_bar_hat == doctest::Approx(2.0).epsilon(0.1));
  CHECK(ffit.r2 >= 0.999);
  CHECK(ffit.orders_used == 11);

  auto gfit = fit_growth(synthetic_growth(geo));
  CHECK(std::abs(gfit.rho_bar_hat) <= 0.05);
  CHECK(gfit.log_d_hat == doctest::Approx(std::log(2.0)).epsilon(0.02));

  auto zfit = fit_growth(synthetic_growth(flat));
  CHECK(std::abs(zfit.rho_bar_hat) <= 1e-9);
  CHECK(std::abs(zfit.log_d_hat) <= 1e-9);
  CHECK(std::abs(zfit.intercept) <= 1e-9);

  CHECK_THROWS_AS(fit_growth(synthetic_growth({1.0, 2.0, 3.0})), FitError);
}

TEST_CASE("superasymptotic truncation stops at the smallest nonzero term") {
  SymbolShape sh{1, 14, 0, 0, {1.0}, 0.0};
  TorusSymbol p0(sh);
  for (int j = 0; j <= 14; ++j)
    p0.set_coeff(j, {0}, MultiIndex({0}), factorial_real(j));
  auto ev = optimal_truncation_eval(p0, {1.0}, 0.0, 0.1, 1.0, 23.0);
  // j! 0.1^j reaches its minimum 3.6288e-4 at j = 9 (tied with j = 10; ties
  // resolve to the smaller order).
  CHECK(ev.J_used == 9);
  CHECK(ev.last_term == doctest::Approx(3.6288e-4).epsilon(1e-12));
  CHECK(ev.term_magnitudes.size() == 15);
  // Exponent rule: floor(eta h^{-1/rho_bar}) = floor(10^{1/23}) = 1.
  CHECK(ev.J_theorem == 1);
  CHECK(ev.value_theorem.real() == doctest::Approx(1.0 + 0.1).epsilon(1e-14));
}

TEST_CASE("truncation skips exactly vanishing parity orders") {
  SymbolShape sh{1, 4, 0, 0, {1.0}, 0.0};
  TorusSymbol p0(sh);
  p0.set_coeff(0, {0}, MultiIndex({0}), 1.0);
  p0.set_coeff(4, {0}, MultiIndex({0}), 1e-3);
  auto ev = optimal_truncation_eval(p0, {1.0}, 0.0, 0.1, 1.0, 23.0);
  CHECK(ev.J_used == 4); // the exact zeros at j = 1..3 carry no size information
  CHECK(ev.value.real() == doctest::Approx(1.0 + 1e-3 * 1e-4).epsilon(1e-14));

  TorusSymbol zero(sh);
  auto zev = optimal_truncation_eval(zero, {1.0}, 0.0, 0.1, 1.0, 23.0);
  CHECK(zev.J_used == 0);
  CHECK(zev.value == std::complex<double>(0.0));
}

TEST_CASE("decreasing series truncates at the last computed order") {
  SymbolShape sh{1, 6, 0, 0, {1.0}, 0.0};
  TorusSymbol p0(sh);
  for (int j = 0; j <= 6; ++j)
    p0.set_coeff(j, {0}, MultiIndex({0}), std::pow(0.5, j));
  auto ev = optimal_truncation_eval(p0, {1.0}, 0.0, 0.1, 1.0, 23.0);
  CHECK(ev.J_used == 6);
  // Geometric sum of (0.05)^j over j = 0..6.
  double expect = (1.0 - std::pow(0.05, 7)) / (1.0 - 0.05);
  CHECK(ev.value.real() == doctest::Approx(expect).epsilon(1e-13));
}
