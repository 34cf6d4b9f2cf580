#include "qbnf/properties.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <sstream>

#include "qbnf/approximation.hpp"
#include "qbnf/config.hpp"
#include "qbnf/errors.hpp"
#include "qbnf/homological.hpp"
#include "qbnf/multi_index.hpp"
#include "qbnf/nonresonance.hpp"
#include "qbnf/normal_form.hpp"
#include "qbnf/special_functions.hpp"
#include "qbnf/symbol.hpp"
#include "qbnf/version.hpp"

namespace qbnf {

namespace {

using Rng = std::mt19937_64;
using C = std::complex<double>;

// Dyadic coefficients (n/8 with small n) keep every algebraic identity exact
// in binary64: sums/products of such values round to nothing.
C dyadic(Rng& rng) {
  std::uniform_int_distribution<int> d(-8, 8);
  return {d(rng) / 8.0, d(rng) / 8.0};
}

double dyadic_scalar(Rng& rng) {
  static const double pool[] = {1.0, -1.0, 2.0, -2.0, 0.5, -0.5};
  std::uniform_int_distribution<int> d(0, 5);
  return pool[d(rng)];
}

std::vector<int> random_mode(Rng& rng, int dim, int radius) {
  std::uniform_int_distribution<int> d(-radius, radius);
  for (;;) {
    std::vector<int> k(dim);
    int m = 0;
    for (int& v : k) {
      v = d(rng);
      m += std::abs(v);
    }
    if (m <= radius) return k;
  }
}

MultiIndex random_gamma(Rng& rng, int dim, int max_per_component, int max_total) {
  std::uniform_int_distribution<int> d(0, max_per_component);
  for (;;) {
    std::vector<int> g(dim);
    int tot = 0;
    for (int& v : g) {
      v = d(rng);
      tot += v;
    }
    if (tot <= max_total) return MultiIndex(g);
  }
}

// Random dyadic symbol; per-mode jets restricted to |gamma| <= max_gamma with
// per-component exponents <= 2 (so gamma! is 1 or 2 and stays exact).
TorusSymbol random_symbol(Rng& rng, int dim, int h_order, int radius, int degree, int max_gamma,
                          int terms_per_order) {
  SymbolShape shape{dim, h_order, radius, degree, std::vector<double>(dim, 0.0), 0.0};
  TorusSymbol p(shape);
  for (int j = 0; j <= h_order; ++j)
    for (int i = 0; i < terms_per_order; ++i) {
      std::vector<int> k = random_mode(rng, dim, radius);
      MultiIndex g = random_gamma(rng, dim, 2, max_gamma);
      p.set_coeff(j, k, g, dyadic(rng));
    }
  p.prune_zeros();
  return p;
}

struct Check {
  PropertyResult result;
  explicit Check(std::string name) { result.name = std::move(name); }
  void trial(bool ok, const std::string& detail) {
    ++result.trials;
    if (!ok) {
      ++result.failures;
      if (result.detail.empty()) result.detail = detail;
    }
  }
};

Rng stream(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return Rng(seed ^ h);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

ApproximationFunction random_delta(Rng& rng, double sigma) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind(rng)) {
  case 0:
    return ApproximationFunction::polynomial(1.0 + 2.0 * u(rng), sigma);
  case 1:
    return ApproximationFunction::sub_exponential((0.1 + 0.8 * u(rng)) / sigma, sigma);
  case 2:
    return ApproximationFunction::log_tempered(1.5 + 1.5 * u(rng), sigma);
  default:
    return ApproximationFunction::product_with_power(
        1.0 + u(rng), ApproximationFunction::polynomial(1.0 + u(rng), sigma));
  }
}

// ---------------------------------------------------------------------------

PropertyResult prop_gamma_recurrence(std::uint64_t seed) {
  Check c("gamma_recurrence");
  Rng rng = stream(seed, c.result.name);
  std::uniform_real_distribution<double> u(0.1, 50.0);
  for (int i = 0; i < 64; ++i) {
    double x = u(rng);
    double lhs = gamma_fn(x + 1.0), rhs = x * gamma_fn(x);
    double rel = std::abs(lhs - rhs) / std::abs(lhs);
    c.trial(rel <= 1e-12, "x = " + fmt(x) + ", rel = " + fmt(rel));
  }
  return c.result;
}

PropertyResult prop_beta_symmetry(std::uint64_t seed) {
  Check c("beta_symmetry");
  Rng rng = stream(seed, c.result.name);
  std::uniform_real_distribution<double> u(0.1, 20.0);
  for (int i = 0; i < 64; ++i) {
    double x = u(rng), y = u(rng);
    double a = beta_fn(x, y), b = beta_fn(y, x);
    double rel = std::abs(a - b) / std::abs(a);
    c.trial(rel <= 1e-13, "x = " + fmt(x) + ", y = " + fmt(y) + ", rel = " + fmt(rel));
  }
  return c.result;
}

PropertyResult prop_multi_index_order(std::uint64_t) {
  Check c("multi_index_partial_order");
  for (int n = 1; n <= 3; ++n) {
    auto all = multi_indices_up_to(n, 5);
    bool ok = true;
    for (const auto& a : all) {
      if (!a.leq(a)) ok = false;
      for (const auto& b : all) {
        if (a.leq(b) && b.leq(a) && !(a == b)) ok = false;
        if (!ok) break;
        for (const auto& d : all)
          if (a.leq(b) && b.leq(d) && !a.leq(d)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (!ok) break;
    }
    c.trial(ok, "partial-order axiom failed at dim " + std::to_string(n));
  }
  return c.result;
}

PropertyResult prop_gamma_integer(std::uint64_t) {
  Check c("gamma_integer_factorial");
  double fact = 1.0;
  for (int m = 1; m <= 20; ++m) {
    if (m > 1) fact *= m - 1;
    c.trial(gamma_fn(m) == fact, "m = " + std::to_string(m));
  }
  return c.result;
}

PropertyResult prop_gamma_sup_monotone(std::uint64_t seed) {
  Check c("gamma_sup_monotone_in_eta");
  Rng rng = stream(seed, c.result.name);
  for (int i = 0; i < 6; ++i) {
    ApproximationFunction delta = random_delta(rng, 2.0);
    double s = static_cast<double>(i % 3);
    double prev = -1.0;
    bool ok = true;
    for (double eta : {0.3, 0.6, 1.2, 2.4}) {
      double v = gamma_sup(delta, s, eta).log_value;
      if (prev >= 0.0 && v > prev + 1e-10) ok = false;
      prev = v < 0.0 ? 0.0 : v;
    }
    c.trial(ok, delta.describe() + ", s = " + fmt(s));
  }
  return c.result;
}

PropertyResult prop_product_rule_validity(std::uint64_t seed) {
  Check c("product_power_stays_valid");
  Rng rng = stream(seed, c.result.name);
  for (int i = 0; i < 5; ++i) {
    ApproximationFunction delta = random_delta(rng, 2.0);
    double s = 1.0 + 0.75 * (i % 3);
    ApproximationFunction prod = ApproximationFunction::product_with_power(s, delta);
    ValidityReport rep = check_validity(prod);
    c.trial(rep.valid(), prod.describe());
  }
  return c.result;
}

PropertyResult prop_threshold_bound(std::uint64_t seed) {
  Check c("threshold_bound_holds");
  Rng rng = stream(seed, c.result.name);
  for (int i = 0; i < 5; ++i) {
    ApproximationFunction delta = random_delta(rng, 2.0);
    double s = static_cast<double>(i % 2);
    double eta = (i % 2) ? 1.0 : 0.5;
    ThresholdBoundReport rep = threshold_bound(delta, s, eta);
    c.trial(rep.holds, delta.describe() + ", s = " + fmt(s) + ", eta = " + fmt(eta) +
                           ", slack = " + fmt(rep.slack));
  }
  return c.result;
}

PropertyResult prop_gamma_sup_dominates(std::uint64_t seed) {
  Check c("gamma_sup_dominates_members");
  Rng rng = stream(seed, c.result.name);
  std::uniform_real_distribution<double> tp(0.0, 100.0);
  for (int i = 0; i < 6; ++i) {
    ApproximationFunction delta = random_delta(rng, 2.0);
    double s = static_cast<double>(i % 3), eta = 0.8;
    GammaSupResult sup = gamma_sup(delta, s, eta);
    bool ok = true;
    double worst = 0.0;
    for (int probe = 0; probe < 16; ++probe) {
      double t = tp(rng);
      double member =
          s * std::log1p(t) + delta.log_evaluate(t) - eta * std::pow(t, 1.0 / delta.sigma());
      if (member > sup.log_value + 1e-9) {
        ok = false;
        worst = member - sup.log_value;
      }
    }
    c.trial(ok, delta.describe() + " exceeded by member, gap " + fmt(worst));
  }
  return c.result;
}

PropertyResult prop_shell_count(std::uint64_t) {
  Check c("shell_count_matches_box");
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 8; ++m) {
      // Brute force over the box [-m, m]^n.
      std::uint64_t count = 0;
      std::vector<int> k(n, -m);
      for (;;) {
        int l1 = 0;
        for (int v : k) l1 += std::abs(v);
        if (l1 == m) ++count;
        int d = 0;
        while (d < n && k[d] == m) k[d++] = -m;
        if (d == n) break;
        ++k[d];
      }
      c.trial(shell_cardinality(n, m) == count,
              "n = " + std::to_string(n) + ", m = " + std::to_string(m));
    }
  return c.result;
}

PropertyResult prop_kappa_monotone_radius(std::uint64_t seed) {
  Check c("kappa_max_monotone_in_radius");
  Rng rng = stream(seed, c.result.name);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  ApproximationFunction delta = ApproximationFunction::polynomial(2.0, 2.0);
  for (int i = 0; i < 8; ++i) {
    int n = 1 + i % 2;
    std::vector<double> omega(n);
    for (double& w : omega) w = u(rng);
    double prev = -1.0;
    bool ok = true;
    for (int K : {4, 6, 8}) {
      double v = scan_divisors(omega, delta, K).kappa_max;
      if (prev >= 0.0 && v > prev * (1.0 + 1e-12)) ok = false;
      prev = v;
    }
    c.trial(ok, "omega[0] = " + fmt(omega[0]));
  }
  return c.result;
}

PropertyResult prop_kappa_monotone_delta(std::uint64_t seed) {
  Check c("kappa_max_monotone_in_delta");
  Rng rng = stream(seed, c.result.name);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  ApproximationFunction d1 = ApproximationFunction::polynomial(1.0, 2.0);
  ApproximationFunction d2 = ApproximationFunction::polynomial(2.0, 2.0);
  for (int i = 0; i < 8; ++i) {
    std::vector<double> omega = {u(rng), u(rng)};
    double k1 = scan_divisors(omega, d1, 6).kappa_max;
    double k2 = scan_divisors(omega, d2, 6).kappa_max;
    c.trial(k2 >= k1 * (1.0 - 1e-12), "omega = (" + fmt(omega[0]) + ", " + fmt(omega[1]) + ")");
  }
  return c.result;
}

PropertyResult prop_grid_idempotent(std::uint64_t seed) {
  Check c("nonresonant_grid_idempotent");
  Rng rng = stream(seed, c.result.name);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  ApproximationFunction delta = ApproximationFunction::polynomial(2.0, 2.0);
  for (int i = 0; i < 4; ++i) {
    std::vector<std::vector<double>> actions;
    for (int a = 0; a < 5; ++a) actions.push_back({u(rng), u(rng)});
    FrequencySpec freq = FrequencySpec::polynomial(
        {FrequencyComponent{{{MultiIndex({1, 0}), {1.0}}}},
         FrequencyComponent{{{MultiIndex({0, 1}), {1.0}}}}},
        {0.0, 0.0});
    auto g1 = mark_nonresonant_grid(freq, delta, 0.05, 5, actions, 0.0);
    auto g2 = mark_nonresonant_grid(freq, delta, 0.05, 5, actions, 0.0);
    bool ok = g1.flags == g2.flags && g1.kappa_max == g2.kappa_max;
    // Order independence: reversed action list gives reversed verdicts.
    auto rev = actions;
    std::reverse(rev.begin(), rev.end());
    auto g3 = mark_nonresonant_grid(freq, delta, 0.05, 5, rev, 0.0);
    for (size_t a = 0; a < actions.size() && ok; ++a)
      ok = g3.flags[actions.size() - 1 - a] == g1.flags[a] &&
           g3.kappa_max[actions.size() - 1 - a] == g1.kappa_max[a];
    c.trial(ok, "grid verdict changed between identical runs");
  }
  return c.result;
}

PropertyResult prop_compose_bilinear(std::uint64_t seed) {
  Check c("compose_bilinear_exact");
  Rng rng = stream(seed, c.result.name);
  for (int i = 0; i < 12; ++i) {
    int dim = 1 + i % 2;
    TorusSymbol p = random_symbol(rng, dim, 3, 2, 2, 2, 3);
    TorusSymbol q = random_symbol(rng, dim, 3, 2, 2, 2, 3);
    TorusSymbol r = random_symbol(rng, dim, 3, 2, 2, 2, 3);
    double alpha = dyadic_scalar(rng), beta = dyadic_scalar(rng);
    TorusSymbol lin = p.scale(alpha) + q.scale(beta);
    TorusSymbol lhs = compose(lin, r);
    TorusSymbol rhs = compose(p, r).scale(alpha) + compose(q, r).scale(beta);
    TorusSymbol lhs2 = compose(r, lin);
    TorusSymbol rhs2 = compose(r, p).scale(alpha) + compose(r, q).scale(beta);
    lhs.prune_zeros(); rhs.prune_zeros(); lhs2.prune_zeros(); rhs2.prune_zeros();
    bool ok = lhs.serialize() == rhs.serialize() && lhs2.serialize() == rhs2.serialize();
    c.trial(ok, "bilinearity broke at trial " + std::to_string(i));
  }
  return c.result;
}

PropertyResult prop_compose_identity(std::uint64_t seed) {
  Check c("compose_identity_exact");
  Rng rng = stream(seed, c.result.name);
  for (int i = 0; i < 12; ++i) {
    int dim = 1 + i % 2;
    TorusSymbol p = random_symbol(rng, dim, 3, 2, 2, 2, 3);
    TorusSymbol one =
        TorusSymbol::constant_one(dim, p.fourier_radius(), p.taylor_degree(),
                                  p.base_action(), p.t_value());
    CompositionOptions opts;
    opts.h_order = p.h_order();
    TorusSymbol left = compose(one, p, opts);
    TorusSymbol right = compose(p, one, opts);
    left.prune_zeros(); right.prune_zeros();
    TorusSymbol ref = p;
    ref.prune_zeros();
    bool ok = left.serialize() == ref.serialize() && right.serialize() == ref.serialize();
    c.trial(ok, "identity composition changed coefficients at trial " + std::to_string(i));
  }
  return c.result;
}

PropertyResult prop_compose_leading_order(std::uint64_t seed) {
  Check c("compose_leading_order_pointwise");
  Rng rng = stream(seed, c.result.name);
  std::uniform_real_distribution<double> ang(0.0, 6.28), off(-0.1, 0.1);
  for (int i = 0; i < 8; ++i) {
    int dim = 1 + i % 2;
    TorusSymbol p = random_symbol(rng, dim, 2, 2, 2, 2, 3);
    TorusSymbol q = random_symbol(rng, dim, 2, 2, 2, 2, 3);
    CompositionOptions wide;
    wide.fourier_radius = 2 * p.fourier_radius();
    wide.taylor_degree = 2 * p.taylor_degree();
    TorusSymbol pq = compose(p, q, wide);
    bool ok = true;
    double worst = 0.0;
    for (int probe = 0; probe < 4; ++probe) {
      std::vector<double> phi(dim), I(dim);
      for (double& v : phi) v = ang(rng);
      for (double& v : I) v = off(rng);
      C a = p.order_slice(0).evaluate(phi, I, 1.0);
      C b = q.order_slice(0).evaluate(phi, I, 1.0);
      C d = pq.order_slice(0).evaluate(phi, I, 1.0);
      double err = std::abs(d - a * b) / (1.0 + std::abs(a * b));
      if (err > 1e-12) {
        ok = false;
        worst = err;
      }
    }
    c.trial(ok, "leading-order product mismatch " + fmt(worst));
  }
  return c.result;
}

PropertyResult prop_compose_associative(std::uint64_t seed) {
  Check c("compose_associative_safe_truncation");
  Rng rng = stream(seed, c.result.name);
  for (int i = 0; i < 8; ++i) {
    int dim = 1 + i % 2;
    const int K = 2, M = 3, N = 3;
    // Per-factor Taylor degree 1 so the triple product (degree <= 3) fits M
    // and both association orders compute the exact same algebra element.
    TorusSymbol p = random_symbol(rng, dim, N, K, M, 1, 3);
    TorusSymbol q = random_symbol(rng, dim, N, K, M, 1, 3);
    TorusSymbol r = random_symbol(rng, dim, N, K, M, 1, 3);
    CompositionOptions opts;
    opts.h_order = N;
    opts.fourier_radius = 3 * K;
    opts.taylor_degree = M;
    CompositionDiagnostics diag;
    TorusSymbol left = compose(compose(p, q, opts, &diag), r, opts, &diag);
    TorusSymbol right = compose(p, compose(q, r, opts, &diag), opts, &diag);
    double scale = std::max(left.total_norm(), right.total_norm());
    double diff = (left - right).total_norm();
    bool ok = diff <= 1e-12 * (1.0 + scale) && diag.fourier_clipped == 0.0 &&
              diag.taylor_clipped == 0.0;
    c.trial(ok, "assoc diff = " + fmt(diff) + ", clipped = " +
                    fmt(diag.fourier_clipped + diag.taylor_clipped));
  }
  return c.result;
}

PropertyResult prop_angle_derivative_power(std::uint64_t seed) {
  Check c("angle_derivative_mode_power");
  Rng rng = stream(seed, c.result.name);
  for (int i = 0; i < 16; ++i) {
    int dim = 1 + i % 3;
    TorusSymbol p = random_symbol(rng, dim, 0, 3, 1, 1, 4);
    MultiIndex g = random_gamma(rng, dim, 3, 3);
    TorusSymbol dp = p.derivative_angle(g, AngleDerivative::weighted);
    bool ok = true;
    for (const auto& [mode, jet] : p.order(0)) {
      long long kp = 1;
      for (int d = 0; d < dim; ++d)
        for (int e = 0; e < g[d]; ++e) kp *= mode[d];
      for (int idx = 0; idx < jet.layout()->size(); ++idx) {
        C expect = jet.at(idx) * static_cast<double>(kp);
        C got = dp.order(0).count(mode) ? dp.order(0).at(mode).at(idx) : C{0.0, 0.0};
        if (!(got == expect)) ok = false;
      }
    }
    c.trial(ok, "k^gamma scaling not exact at trial " + std::to_string(i));
  }
  return c.result;
}

PropertyResult prop_solve_linear(std::uint64_t seed) {
  Check c("homological_solve_linear");
  Rng rng = stream(seed, c.result.name);
  OmegaField omega = OmegaField::constant({1.0, 0.6180339887498949});
  ApproximationFunction delta = ApproximationFunction::polynomial(2.0, 2.0);
  const double kappa = 1e-3;
  for (int i = 0; i < 8; ++i) {
    TorusSymbol f = random_symbol(rng, 2, 0, 4, 1, 1, 6);
    TorusSymbol g = random_symbol(rng, 2, 0, 4, 1, 1, 6);
    double alpha = dyadic_scalar(rng), beta = dyadic_scalar(rng);
    TorusSymbol mix = f.scale(alpha) + g.scale(beta);
    TorusSymbol u_mix = solve_homological(mix, omega, delta, kappa).u;
    TorusSymbol u_lin = solve_homological(f, omega, delta, kappa).u.scale(alpha) +
                        solve_homological(g, omega, delta, kappa).u.scale(beta);
    double diff = (u_mix - u_lin).total_norm();
    double scale = u_mix.total_norm();
    c.trial(diff <= 1e-13 * (1.0 + scale), "linearity residue " + fmt(diff));
  }
  return c.result;
}

PropertyResult prop_solve_deterministic(std::uint64_t seed) {
  Check c("homological_solve_deterministic");
  Rng rng = stream(seed, c.result.name);
  OmegaField omega = OmegaField::constant({1.0, 0.6180339887498949});
  ApproximationFunction delta = ApproximationFunction::polynomial(2.0, 2.0);
  for (int i = 0; i < 4; ++i) {
    TorusSymbol f = random_symbol(rng, 2, 0, 4, 2, 2, 6);
    auto s1 = solve_homological(f, omega, delta, 1e-3);
    auto s2 = solve_homological(f, omega, delta, 1e-3);
    c.trial(s1.u.serialize() == s2.u.serialize(), "repeated solve differed");
  }
  return c.result;
}

PropertyResult prop_amplification_bound(std::uint64_t seed) {
  Check c("per_shell_amplification_bound");
  Rng rng = stream(seed, c.result.name);
  OmegaField omega = OmegaField::constant({1.0, 0.6180339887498949});
  ApproximationFunction delta = ApproximationFunction::polynomial(2.0, 2.0);
  const double kappa = 1e-3;
  for (int i = 0; i < 6; ++i) {
    TorusSymbol f = random_symbol(rng, 2, 0, 4, 1, 1, 6);
    TorusSymbol u = solve_homological(f, omega, delta, kappa).u;
    // Per-shell l1 mass of u vs f scaled by Delta(m)/kappa.
    std::map<int, double> fu, uu;
    for (const auto& [mode, jet] : f.order(0)) {
      int m = 0;
      for (int v : mode) m += std::abs(v);
      if (m > 0) fu[m] += jet.l1_norm();
    }
    for (const auto& [mode, jet] : u.order(0)) {
      int m = 0;
      for (int v : mode) m += std::abs(v);
      uu[m] += jet.l1_norm();
    }
    bool ok = true;
    for (const auto& [m, mass] : uu)
      if (mass > fu[m] * delta.evaluate(m) / kappa * (1.0 + 1e-9)) ok = false;
    c.trial(ok, "shell mass exceeded Delta(m)/kappa amplification");
  }
  return c.result;
}

PropertyResult prop_jet_mode_matches_constant(std::uint64_t seed) {
  Check c("jet_omega_degree0_matches_constant");
  Rng rng = stream(seed, c.result.name);
  std::vector<double> w = {1.0, 0.6180339887498949};
  ApproximationFunction delta = ApproximationFunction::polynomial(2.0, 2.0);
  auto layout = JetLayout::get(2, 0);
  std::vector<Jet> jets = {Jet::constant(layout, w[0]), Jet::constant(layout, w[1])};
  OmegaField constant = OmegaField::constant(w);
  OmegaField as_jets = OmegaField::from_jets(jets);
  for (int i = 0; i < 6; ++i) {
    TorusSymbol f = random_symbol(rng, 2, 0, 4, 0, 0, 6);
    auto u1 = solve_homological(f, constant, delta, 1e-3);
    auto u2 = solve_homological(f, as_jets, delta, 1e-3);
    c.trial(u1.u.serialize() == u2.u.serialize(), "degree-0 jet path diverged from constant path");
  }
  return c.result;
}

PropertyResult prop_recursion_deterministic(std::uint64_t) {
  Check c("recursion_deterministic");
  const double golden = 1.6180339887498949;
  SymbolShape shape{1, 4, 6, 2, {golden}, 0.0};
  TorusSymbol p(shape);
  auto layout = JetLayout::get(1, 2);
  Jet k0(layout);
  k0.set_coeff(MultiIndex({0}), golden * golden / 2.0);
  k0.set_coeff(MultiIndex({1}), golden);
  k0.set_coeff(MultiIndex({2}), 0.5);
  p.set_mode_jet(0, {0}, k0);
  p.set_coeff(2, {1}, MultiIndex({0}), 0.5);
  p.set_coeff(2, {-1}, MultiIndex({0}), 0.5);
  FrequencySpec freq = FrequencySpec::polynomial(
      {FrequencyComponent{{{MultiIndex({0}), {golden}}, {MultiIndex({1}), {1.0}}}}}, {golden});
  ApproximationFunction delta = ApproximationFunction::polynomial(2.0, 2.0);
  auto r1 = run_recursion(p, freq, delta, 0.05, 4);
  auto r2 = run_recursion(p, freq, delta, 0.05, 4);
  c.trial(r1.a.serialize() == r2.a.serialize() && r1.p0.serialize() == r2.p0.serialize(),
          "repeated recursion differed");
  return c.result;
}

PropertyResult prop_zero_perturbation(std::uint64_t seed) {
  Check c("zero_perturbation_fixed_point");
  Rng rng = stream(seed, c.result.name);
  for (int i = 0; i < 4; ++i) {
    int dim = 1 + i % 2;
    std::vector<double> base(dim, 1.0 + 0.25 * i);
    SymbolShape shape{dim, 4, 4, 2, base, 0.0};
    TorusSymbol p(shape);
    auto layout = JetLayout::get(dim, 2);
    Jet k0(layout);
    // Integrable part with a nondegenerate random positive gradient.
    std::uniform_int_distribution<int> d(1, 8);
    for (int comp = 0; comp < dim; ++comp) {
      std::vector<int> e(dim, 0);
      e[comp] = 1;
      k0.set_coeff(MultiIndex(e), d(rng) / 4.0);
      e[comp] = 2;
      k0.set_coeff(MultiIndex(e), d(rng) / 8.0);
    }
    p.set_mode_jet(0, std::vector<int>(dim, 0), k0);
    // Frequency = exact gradient of the integrable part.
    std::vector<FrequencyComponent> comps(dim);
    for (int comp = 0; comp < dim; ++comp) {
      std::vector<int> e(dim, 0);
      e[comp] = 1;
      Jet grad = k0.derivative(MultiIndex(e));
      comps[comp].terms.push_back(
          {MultiIndex(std::vector<int>(dim, 0)), {grad.constant_term().real()}});
      comps[comp].terms.push_back({MultiIndex(e), {grad.coeff(MultiIndex(e)).real()}});
    }
    FrequencySpec freq = FrequencySpec::polynomial(comps, base);
    ApproximationFunction delta = ApproximationFunction::polynomial(2.0, 2.0);
    auto res = run_recursion(p, freq, delta, 1e-6, 4);
    TorusSymbol a_expect(SymbolShape{dim, 3, 4, 2, base, 0.0});
    a_expect.set_coeff(0, std::vector<int>(dim, 0), MultiIndex(std::vector<int>(dim, 0)), 1.0);
    bool ok = res.a.serialize() == a_expect.serialize() && res.p0.serialize() == p.serialize();
    c.trial(ok, "integrable input did not fix the recursion at trial " + std::to_string(i));
  }
  return c.result;
}

PropertyResult prop_config_round_trip(std::uint64_t seed) {
  Check c("config_round_trip");
  Rng rng = stream(seed, c.result.name);
  std::uniform_int_distribution<int> d(1, 4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 8; ++i) {
    ProblemConfig cfg;
    cfg.dimension = 1 + i % 2;
    cfg.gevrey = {2.0, 3.0 + u(rng), 4.0 + u(rng), 2.0 + 0.5 * u(rng), 0.0};
    cfg.gevrey.rho_bar = cfg.gevrey.lambda * cfg.gevrey.mu + cfg.gevrey.sigma;
    cfg.delta.kind = "polynomial";
    cfg.delta.exponent = 1.0 + d(rng);
    cfg.kappa = 0.01 * u(rng);
    cfg.frequency.form = "constant";
    for (int n = 0; n < cfg.dimension; ++n) cfg.frequency.omega.push_back({u(rng), u(rng)});
    cfg.base_action.assign(cfg.dimension, u(rng));
    cfg.h_order = 2 + d(rng) % 3;
    cfg.fourier_radius = 3 + d(rng);
    cfg.taylor_degree = 2;
    cfg.t_values = {0.0, u(rng)};
    SymbolTermConfig term;
    term.j = 2;
    term.mode.assign(cfg.dimension, 0);
    term.mode[0] = 1;
    term.taylor.assign(cfg.dimension, 0);
    term.t_poly = {{u(rng), 0.0}, {0.0, u(rng)}};
    cfg.symbol_terms.push_back(term);
    cfg.eta = u(rng);
    cfg.h_values = {0.1, 0.05};
    cfg.seed = rng();
    std::string text1 = write_config(cfg);
    std::string text2 = write_config(parse_config(text1));
    c.trial(text1 == text2, "round trip changed canonical form at trial " + std::to_string(i));
  }
  return c.result;
}

} // namespace

std::vector<PropertyResult> run_properties(std::uint64_t seed) {
  return {
      prop_gamma_recurrence(seed),
      prop_beta_symmetry(seed),
      prop_multi_index_order(seed),
      prop_gamma_integer(seed),
      prop_gamma_sup_monotone(seed),
      prop_product_rule_validity(seed),
      prop_threshold_bound(seed),
      prop_gamma_sup_dominates(seed),
      prop_shell_count(seed),
      prop_kappa_monotone_radius(seed),
      prop_kappa_monotone_delta(seed),
      prop_grid_idempotent(seed),
      prop_compose_bilinear(seed),
      prop_compose_identity(seed),
      prop_compose_leading_order(seed),
      prop_compose_associative(seed),
      prop_angle_derivative_power(seed),
      prop_solve_linear(seed),
      prop_solve_deterministic(seed),
      prop_amplification_bound(seed),
      prop_jet_mode_matches_constant(seed),
      prop_recursion_deterministic(seed),
      prop_zero_perturbation(seed),
      prop_config_round_trip(seed),
  };
}

nlohmann::json properties_to_json(const std::vector<PropertyResult>& results,
                                  std::uint64_t seed) {
  nlohmann::json props = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    props.push_back({{"name", r.name},
                     {"trials", r.trials},
                     {"failures", r.failures},
                     {"detail", r.detail}});
    all = all && r.passed();
  }
  return nlohmann::json{{"tool_version", tool_version},
                        {"seed", seed},
                        {"properties", std::move(props)},
                        {"success", all}};
}

} // namespace qbnf
