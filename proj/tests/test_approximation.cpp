#include "doctest.h"

#include <cmath>

#include "qbnf/approximation.hpp"
#include "qbnf/errors.hpp"

using namespace qbnf;

TEST_CASE("delta evaluation matches the defining formulas") {
  auto poly = ApproximationFunction::polynomial(2.0, 2.0);
  CHECK(poly.evaluate(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(poly.evaluate(3.0) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(poly.log_evaluate(3.0) == doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-14));

  auto sub = ApproximationFunction::sub_exponential(0.4, 2.0);
  CHECK(sub.log_evaluate(2.7) == doctest::Approx(std::pow(2.7, 0.4) / 0.4).epsilon(1e-14));

  auto logt = ApproximationFunction::log_tempered(2.0, 2.0);
  double expected = std::sqrt(5.0) / (1.0 + std::pow(std::log(6.0), 2.0));
  CHECK(logt.log_evaluate(5.0) == doctest::Approx(expected).epsilon(1e-14));

  auto prod =
      ApproximationFunction::product_with_power(2.0, ApproximationFunction::polynomial(1.5, 2.0));
  CHECK(prod.log_evaluate(4.0) == doctest::Approx(3.5 * std::log(5.0)).epsilon(1e-14));
}

TEST_CASE("delta constructor domain checks") {
  CHECK_THROWS_AS(ApproximationFunction::polynomial(-1.0, 2.0), DomainError);
  CHECK_THROWS_AS(ApproximationFunction::polynomial(2.0, 1.0), DomainError);
  CHECK_THROWS_AS(ApproximationFunction::sub_exponential(0.0, 2.0), DomainError);
  CHECK_THROWS_AS(ApproximationFunction::log_tempered(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(ApproximationFunction::product_with_power(
                      0.5, ApproximationFunction::polynomial(1.0, 2.0)),
                  DomainError);
  auto poly = ApproximationFunction::polynomial(2.0, 2.0);
  CHECK_THROWS_AS(poly.log_evaluate(-0.1), DomainError);
}

TEST_CASE("validity verdicts per kind") {
  CHECK(check_validity(ApproximationFunction::polynomial(2.0, 2.0)).valid());
  CHECK(check_validity(ApproximationFunction::sub_exponential(0.3, 2.0)).valid());
  CHECK(check_validity(ApproximationFunction::log_tempered(1.4, 2.0)).valid());
  CHECK(check_validity(ApproximationFunction::product_with_power(
                           3.0, ApproximationFunction::polynomial(2.0, 2.0)))
            .valid());

  // exp(sqrt(t)/(1 + log^1.5(1+t))) dips around t in (3, 4.6) at sigma = 2:
  // the growth-ratio and integral conditions pass but Delta itself is not
  // non-decreasing, which the spot check reports.
  auto dip = check_validity(ApproximationFunction::log_tempered(1.5, 2.0));
  CHECK_FALSE(dip.valid());
  CHECK_FALSE(dip.monotone_delta_ok);
  CHECK(dip.monotone_ratio_ok);
  CHECK(dip.integral_converges);

  // Degenerate flat Delta: no positive decreasing ratio to speak of.
  CHECK_FALSE(check_validity(ApproximationFunction::polynomial(0.0, 2.0)).valid());

  // Sub-exponential at and above the exponent boundary a = 1/sigma: the ratio
  // log Delta / t^{1/sigma} stops decaying and the weighted integral diverges.
  auto boundary = check_validity(ApproximationFunction::sub_exponential(0.5, 2.0));
  CHECK_FALSE(boundary.valid());
  CHECK_FALSE(boundary.integral_converges);
  auto beyond = check_validity(ApproximationFunction::sub_exponential(0.6, 2.0));
  CHECK_FALSE(beyond.valid());
  CHECK_FALSE(beyond.monotone_ratio_ok);
}

TEST_CASE("weighted sup matches the closed form for polynomial delta") {
  // For Delta = (1+t)^2, sigma = 2, s = 0, eta = 1 the objective
  // 2 log(1+t) - sqrt(t) peaks at t = 7 + 4 sqrt 3.
  auto poly = ApproximationFunction::polynomial(2.0, 2.0);
  auto g0 = gamma_sup(poly, 0.0, 1.0);
  CHECK(g0.value == doctest::Approx(5.3358794072676075).epsilon(1e-9));
  CHECK(g0.argmax_t == doctest::Approx(13.928203230275509).epsilon(1e-6));

  // s = 1 folds into (1+t)^3: peak at t = (3 + 2 sqrt 2)^2.
  auto g1 = gamma_sup(poly, 1.0, 1.0);
  CHECK(g1.value == doctest::Approx(125.85026220546446).epsilon(1e-9));
  CHECK(g1.argmax_t == doctest::Approx(33.970562748477136).epsilon(1e-6));

  // Flat Delta: the sup is attained at t = 0 with value 1.
  auto flat = gamma_sup(ApproximationFunction::polynomial(0.0, 2.0), 0.0, 1.0);
  CHECK(flat.value == 1.0);
  CHECK(flat.argmax_t == 0.0);
}

TEST_CASE("weighted sup is monotone in eta and at least 1") {
  auto d = ApproximationFunction::log_tempered(2.0, 2.0);
  double prev = gamma_sup(d, 2.0, 0.3).log_value;
  for (double eta : {0.6, 1.2, 2.4, 4.8}) {
    double cur = gamma_sup(d, 2.0, eta).log_value;
    CHECK(cur <= prev + 1e-12);
    CHECK(cur >= -1e-12); // value >= 1 since the objective is 0 at t = 0
    prev = cur;
  }
}

TEST_CASE("weighted sup resolves far-out peaks near the growth boundary") {
  // exp(t^a / a) with a = 0.45, eta = 0.35: stationarity t^{a-1} = (eta/2) t^{-1/2}
  // puts the peak at t = (eta/2)^{1/(a - 1/2)} ~ 1.4e15.
  auto d = ApproximationFunction::sub_exponential(0.45, 2.0);
  auto g = gamma_sup(d, 0.0, 0.35);
  double predicted = std::pow(0.35 / 2.0, 1.0 / (0.45 - 0.5));
  CHECK(g.argmax_t == doctest::Approx(predicted).epsilon(0.05));
  CHECK(g.log_value ==
        doctest::Approx(d.log_evaluate(g.argmax_t) - 0.35 * std::sqrt(g.argmax_t)).epsilon(1e-12));
}

TEST_CASE("threshold bound certifies the sup with tight slack") {
  auto poly = ApproximationFunction::polynomial(2.0, 2.0);
  auto rep = threshold_bound(poly, 0.0, 1.0);
  CHECK(rep.holds);
  CHECK(rep.threshold_t > 1e-2);
  CHECK(rep.gamma_value <= rep.bound * (1.0 + 1e-9));
  CHECK(rep.bound == doctest::Approx(std::exp(rep.log_bound)).epsilon(1e-14));
  // At the resolved threshold the budget is met with near-equality from above.
  CHECK(rep.a_part + 0.0 * rep.c_part <= 1.0 + 1e-6);
  CHECK(rep.a_part >= 0.0);
  CHECK(rep.c_part > 0.0);
}

TEST_CASE("threshold bound survives thresholds beyond the quadrature window") {
  // a = 0.42 close to 1/sigma = 0.5 pushes T to ~e^62; the certified bound
  // e^{eta sqrt T} overflows but the log-domain comparison stays exact.
  auto d = ApproximationFunction::sub_exponential(0.42, 2.0);
  auto rep = threshold_bound(d, 0.0, 0.3);
  CHECK(rep.holds);
  double log_t = std::log(rep.threshold_t);
  // Exact tail: T^{-0.08}/(0.42*0.08) = 0.3 log 2 gives log T = 62.09...
  CHECK(log_t == doctest::Approx(62.09).epsilon(0.02));
  CHECK(std::isinf(rep.bound));
  CHECK(rep.slack == 0.0);
  CHECK(rep.log_bound > 1e12);
}

TEST_CASE("threshold bound domain and divergence errors") {
  auto poly = ApproximationFunction::polynomial(2.0, 2.0);
  CHECK_THROWS_AS(threshold_bound(poly, 0.0, 1.0, 2.5), DomainError);
  CHECK_THROWS_AS(threshold_bound(poly, 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(threshold_bound(poly, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(threshold_bound(poly, 0.0, 0.0), DomainError);
  // Divergent weighted integral: no threshold exists at all.
  auto bad = ApproximationFunction::sub_exponential(0.6, 2.0);
  CHECK_THROWS_AS(threshold_bound(bad, 0.0, 1.0), NumericError);
}
