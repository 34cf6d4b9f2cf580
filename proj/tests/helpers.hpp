#pragma once

// Shared builders for the test binaries.
//
// Dyadic randomness: coefficients of the form (integer in [-8,8]) / 8 and
// scalars from {+-1, +-2, +-1/2} keep every product and sum exactly
// representable in binary64, so algebraic identities (bilinearity, unit laws,
// mode-power derivatives) can be checked bitwise via the canonical
// serialization instead of with tolerances.
//
// Model instances: a one-torus pendulum-type symbol about the golden-mean
// action and a two-torus instance with frequency (1, sqrt(2)-1); both have
// perturbation modes of |k|_1 = 1 only, so the order-j conjugator content
// stays inside Fourier radius j and the recursion runs without clipping.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qbnf/frequency.hpp"
#include "qbnf/multi_index.hpp"
#include "qbnf/symbol.hpp"

namespace testutil {

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  return std::mt19937_64(seed ^ (salt * 0x9E3779B97F4A7C15ull) ^ 0xA5A5A5A55A5A5A5Aull);
}

inline double dyadic(std::mt19937_64& g) {
  return std::uniform_int_distribution<int>(-8, 8)(g) / 8.0;
}

inline std::complex<double> dyadic_complex(std::mt19937_64& g) {
  return {dyadic(g), dyadic(g)};
}

inline double dyadic_scalar(std::mt19937_64& g) {
  static const double pool[] = {1.0, -1.0, 2.0, -2.0, 0.5, -0.5};
  return pool[std::uniform_int_distribution<int>(0, 5)(g)];
}

// A random lattice vector with |k|_1 <= radius.
inline std::vector<int> random_mode(std::mt19937_64& g, int dim, int radius) {
  std::vector<int> k(static_cast<size_t>(dim), 0);
  int budget = std::uniform_int_distribution<int>(0, radius)(g);
  for (int used = 0; used < budget; ++used) {
    int d = std::uniform_int_distribution<int>(0, dim - 1)(g);
    k[static_cast<size_t>(d)] += std::uniform_int_distribution<int>(0, 1)(g) ? 1 : -1;
  }
  return k;
}

// Multi-index with every component <= comp_cap (gamma! then stays in {1, 2, 4...},
// exactly invertible in binary64) and |gamma| <= order_cap.
inline qbnf::MultiIndex random_gamma(std::mt19937_64& g, int dim, int order_cap, int comp_cap = 2) {
  std::vector<int> e(static_cast<size_t>(dim), 0);
  int total = 0;
  for (int d = 0; d < dim; ++d) {
    int cap = std::min(comp_cap, order_cap - total);
    if (cap < 0) cap = 0;
    e[static_cast<size_t>(d)] = std::uniform_int_distribution<int>(0, cap)(g);
    total += e[static_cast<size_t>(d)];
  }
  return qbnf::MultiIndex(e);
}

// Dense-ish random symbol with dyadic coefficients; per-component Taylor
// exponents capped so gamma! divisions in the composition stay exact.
inline qbnf::TorusSymbol random_symbol(std::mt19937_64& g, const qbnf::SymbolShape& shape,
                                       int entries_per_order = 6, int taylor_comp_cap = 2) {
  qbnf::TorusSymbol s(shape);
  for (int j = 0; j <= shape.h_order; ++j) {
    for (int e = 0; e < entries_per_order; ++e) {
      auto mode = random_mode(g, shape.dim, shape.fourier_radius);
      auto gamma = random_gamma(g, shape.dim, shape.taylor_degree, taylor_comp_cap);
      std::complex<double> c = dyadic_complex(g);
      if (c != 0.0) s.set_coeff(j, mode, gamma, s.coeff(j, mode, gamma) + c);
    }
  }
  s.prune_zeros();
  return s;
}

inline constexpr double kGoldenMean = 1.6180339887498949; // (1 + sqrt 5) / 2

// One-torus instance: p = I^2/2 + h^2 cos(phi), Taylor jets about I0 = golden
// mean, truncations (N, K, M) = (6, 8, 2).
inline qbnf::TorusSymbol golden_symbol() {
  const double phi = kGoldenMean;
  qbnf::SymbolShape shape{1, 6, 8, 2, {phi}, 0.0};
  qbnf::TorusSymbol p(shape);
  p.set_coeff(0, {0}, qbnf::MultiIndex({0}), phi * phi / 2.0);
  p.set_coeff(0, {0}, qbnf::MultiIndex({1}), phi);
  p.set_coeff(0, {0}, qbnf::MultiIndex({2}), 0.5);
  p.set_coeff(2, {1}, qbnf::MultiIndex({0}), 0.5);
  p.set_coeff(2, {-1}, qbnf::MultiIndex({0}), 0.5);
  return p;
}

// omega(I) = I for the one-torus instance, written as a polynomial map about
// the base action (constant term I0, slope 1).
inline qbnf::FrequencySpec golden_frequency() {
  const double phi = kGoldenMean;
  qbnf::FrequencyComponent comp;
  comp.terms.push_back({qbnf::MultiIndex({0}), {phi}});
  comp.terms.push_back({qbnf::MultiIndex({1}), {1.0}});
  return qbnf::FrequencySpec::polynomial({comp}, {phi});
}

inline constexpr double kOmega2 = 0.41421356237309515; // sqrt(2) - 1

// Two-torus instance: p0 = <omega, I> with omega = (1, sqrt(2)-1) about
// I0 = (0.3, 0.4); perturbation h^2 [cos(phi1)(1 + (I1-I01)) +
// 0.7 cos(phi2)(0.5 + 0.25 (I2-I02))].  Both perturbation modes have
// |k|_1 = 1 so order j never outgrows Fourier radius j.
inline qbnf::TorusSymbol t2_symbol() {
  const double w2 = kOmega2;
  qbnf::SymbolShape shape{2, 5, 6, 2, {0.3, 0.4}, 0.0};
  qbnf::TorusSymbol p(shape);
  p.set_coeff(0, {0, 0}, qbnf::MultiIndex({0, 0}), 0.3 + 0.4 * w2);
  p.set_coeff(0, {0, 0}, qbnf::MultiIndex({1, 0}), 1.0);
  p.set_coeff(0, {0, 0}, qbnf::MultiIndex({0, 1}), w2);
  for (int sgn : {1, -1}) {
    std::vector<int> k1 = {sgn, 0}, k2 = {0, sgn};
    p.set_coeff(2, k1, qbnf::MultiIndex({0, 0}), 0.5);
    p.set_coeff(2, k1, qbnf::MultiIndex({1, 0}), 0.5);
    p.set_coeff(2, k2, qbnf::MultiIndex({0, 0}), 0.35);
    p.set_coeff(2, k2, qbnf::MultiIndex({0, 1}), 0.175);
  }
  return p;
}

inline qbnf::FrequencySpec t2_frequency() {
  return qbnf::FrequencySpec::constant({1.0, kOmega2}, {0.3, 0.4});
}

} // namespace testutil
