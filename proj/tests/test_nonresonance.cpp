#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "qbnf/approximation.hpp"
#include "qbnf/errors.hpp"
#include "qbnf/frequency.hpp"
#include "qbnf/nonresonance.hpp"

using namespace qbnf;

namespace {
const double kPhi = 1.6180339887498949;
}

TEST_CASE("shell cardinality closed form matches brute enumeration") {
  CHECK(shell_cardinality(1, 0) == 1);
  CHECK(shell_cardinality(1, 5) == 2);
  CHECK(shell_cardinality(2, 4) == 16);
  CHECK(shell_cardinality(2, 5) == 20);
  CHECK(shell_cardinality(3, 2) == 18);
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 6; ++m)
      CHECK(shell_cardinality(n, m) == enumerate_shell(n, m).size());
}

TEST_CASE("shell enumeration is deterministic with descending first coordinate") {
  auto shell = enumerate_shell(2, 1);
  REQUIRE(shell.size() == 4);
  CHECK(shell[0] == std::vector<int>{1, 0});
  CHECK(shell[1] == std::vector<int>{0, 1});
  CHECK(shell[2] == std::vector<int>{0, -1});
  CHECK(shell[3] == std::vector<int>{-1, 0});
  CHECK_THROWS_AS(enumerate_shell(3, 40, 10), SizeError);
}

TEST_CASE("golden-mean divisor scan matches the frozen oracle") {
  auto delta = ApproximationFunction::polynomial(1.0, 2.0);
  auto rep = scan_divisors({1.0, kPhi}, delta, 10);
  CHECK(rep.radius == 10);
  CHECK(rep.kappa_max == doctest::Approx(1.3130823037528376).epsilon(1e-12));
  CHECK(rep.worst_k == std::vector<int>{5, -3});
  CHECK(rep.tau_fit == doctest::Approx(0.9256558848408236).epsilon(1e-12));

  const std::vector<double> shell_minima = {
      2.0, 1.8541019662496847, 1.5278640450004204, 6.180339887498949, 1.4164078649987388,
      5.347524157501471, 6.832815729997478, 1.3130823037528376, 11.458980337503153,
      5.193495504995376};
  for (int m = 1; m <= 10; ++m)
    CHECK(rep.kappa_max_per_shell.at(m) ==
          doctest::Approx(shell_minima[static_cast<size_t>(m - 1)]).epsilon(1e-12));

  CHECK(rep.holds_for(rep.kappa_max));
  CHECK(rep.holds_for(0.05));
  CHECK_FALSE(rep.holds_for(rep.kappa_max * (1.0 + 1e-9)));
}

TEST_CASE("scan against a brute-force box gives identical minima") {
  auto delta = ApproximationFunction::polynomial(1.0, 2.0);
  const int K = 8;
  auto rep = scan_divisors({1.0, kPhi}, delta, K);
  double brute = std::numeric_limits<double>::infinity();
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      int m = std::abs(k1) + std::abs(k2);
      if (m == 0 || m > K) continue;
      double d = std::abs(k1 * 1.0 + k2 * kPhi) * delta.evaluate(static_cast<double>(m));
      brute = std::min(brute, d);
    }
  CHECK(rep.kappa_max == brute); // same arithmetic, bitwise equal
}

TEST_CASE("exact resonance is raised with the canonical mode named") {
  auto delta = ApproximationFunction::polynomial(1.0, 2.0);
  CHECK_THROWS_WITH_AS(scan_divisors({1.0, 1.0}, delta, 4),
                       doctest::Contains("k = (1,-1)"), ResonanceError);
  try {
    scan_divisors({2.0, 1.0}, delta, 4);
    FAIL("expected resonance");
  } catch (const ResonanceError& e) {
    CHECK(e.mode() == std::vector<int>{1, -2});
  }
}

TEST_CASE("nonresonant grid screens actions and tolerates resonant points") {
  // omega(I) = I on the one-torus: I = 0 is an exact resonance, I = phi is not.
  FrequencyComponent comp;
  comp.terms.push_back({MultiIndex({0}), {kPhi}});
  comp.terms.push_back({MultiIndex({1}), {1.0}});
  auto freq = FrequencySpec::polynomial({comp}, {kPhi});
  auto delta = ApproximationFunction::polynomial(1.0, 2.0);

  auto grid = mark_nonresonant_grid(freq, delta, 0.05, 6, {{kPhi}, {0.0}}, 0.0);
  REQUIRE(grid.flags.size() == 2);
  CHECK(grid.flags[0]);
  CHECK_FALSE(grid.flags[1]);
  CHECK(grid.kappa_max[1] == 0.0);
  CHECK(grid.kappa_max[0] > 0.05);
  CHECK(grid.radius == 6);
}

TEST_CASE("derivative probe reproduces reciprocal-divisor derivatives") {
  // omega(I) = I in one dimension about I0 = 2: g(I) = 1/I has derivatives
  // g' = -1/I^2, g'' = 2/I^3.
  FrequencyComponent comp;
  comp.terms.push_back({MultiIndex({0}), {2.0}});
  comp.terms.push_back({MultiIndex({1}), {1.0}});
  auto freq = FrequencySpec::polynomial({comp}, {2.0});
  auto delta = ApproximationFunction::polynomial(1.0, 2.0);

  auto rep = divisor_derivative_probe(freq, delta, {1}, 2, 0.0, 4.0, 2.0);
  REQUIRE(!rep.rows.empty());
  bool saw_value = false, saw_d1 = false, saw_d2 = false;
  for (const auto& row : rep.rows) {
    if (row.dt_order != 0) continue;
    if (row.alpha.order() == 0) {
      CHECK(row.fd_value == doctest::Approx(0.5).epsilon(1e-10));
      saw_value = true;
    } else if (row.alpha == MultiIndex({1})) {
      CHECK(row.fd_value == doctest::Approx(-0.25).epsilon(1e-6));
      saw_d1 = true;
    } else if (row.alpha == MultiIndex({2})) {
      CHECK(row.fd_value == doctest::Approx(0.25).epsilon(1e-5));
      saw_d2 = true;
    }
    CHECK(row.envelope > 0.0);
    CHECK(row.ratio <= 1.0);
  }
  CHECK(saw_value);
  CHECK(saw_d1);
  CHECK(saw_d2);
}

TEST_CASE("derivative probe handles deformation-parameter derivatives") {
  // omega(t) = 1 + t constant in I: g = 1/(1+t), dg/dt at t = 0 is -1.
  auto freq = FrequencySpec::constant_t({TPoly{1.0, 1.0}}, {0.5});
  auto delta = ApproximationFunction::polynomial(1.0, 2.0);
  auto rep = divisor_derivative_probe(freq, delta, {1}, 2, 0.0, 4.0, 2.0);
  bool saw_dt = false;
  for (const auto& row : rep.rows) {
    if (row.alpha.order() == 0 && row.dt_order == 1) {
      CHECK(row.fd_value == doctest::Approx(-1.0).epsilon(1e-6));
      saw_dt = true;
    }
  }
  CHECK(saw_dt);
}
