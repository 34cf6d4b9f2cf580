#include "qbnf/nonresonance.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qbnf/errors.hpp"

namespace qbnf {

namespace {

std::string mode_to_string(const std::vector<int>& k) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < k.size(); ++i) {
    if (i) os << ",";
    os << k[i];
  }
  os << ")";
  return os.str();
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw SizeError("shell cardinality overflows uint64");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw SizeError("shell cardinality overflows uint64");
  return r;
}

std::uint64_t binom_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = checked_mul(r, static_cast<std::uint64_t>(n - k + i)) / i;
  return r;
}

void fill_shell(int n, int remaining, std::vector<int>& scratch, int pos,
                std::vector<std::vector<int>>& out) {
  if (pos == n - 1) {
    if (remaining == 0) {
      scratch[static_cast<size_t>(pos)] = 0;
      out.push_back(scratch);
    } else {
      scratch[static_cast<size_t>(pos)] = remaining;
      out.push_back(scratch);
      scratch[static_cast<size_t>(pos)] = -remaining;
      out.push_back(scratch);
    }
    return;
  }
  for (int v = remaining; v >= -remaining; --v) {
    scratch[static_cast<size_t>(pos)] = v;
    fill_shell(n, remaining - std::abs(v), scratch, pos + 1, out);
  }
}

} // namespace

std::uint64_t shell_cardinality(int n, int m) {
  if (n < 1) throw DomainError("shell cardinality requires n >= 1");
  if (m < 0) throw DomainError("shell cardinality requires m >= 0");
  if (m == 0) return 1;
  // Count by the number j of nonzero components: choose their positions,
  // distribute the modulus m over j positive parts, pick signs.
  std::uint64_t total = 0;
  for (int j = 1; j <= std::min(n, m); ++j) {
    std::uint64_t term = checked_mul(binom_u64(n, j), binom_u64(m - 1, j - 1));
    term = checked_mul(term, std::uint64_t{1} << j);
    total = checked_add(total, term);
  }
  return total;
}

std::vector<std::vector<int>> enumerate_shell(int n, int m, std::uint64_t cap) {
  std::uint64_t count = shell_cardinality(n, m);
  if (count > cap) throw SizeError("shell |k|_1 = " + std::to_string(m) + " in dimension " +
                                   std::to_string(n) + " has " + std::to_string(count) +
                                   " points, above the cap");
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<size_t>(count));
  std::vector<int> scratch(static_cast<size_t>(n), 0);
  if (m == 0) {
    out.push_back(scratch);
    return out;
  }
  fill_shell(n, m, scratch, 0, out);
  return out;
}

DivisorReport scan_divisors(const std::vector<double>& omega, const ApproximationFunction& delta,
                            int K) {
  int n = static_cast<int>(omega.size());
  if (n < 1) throw ShapeError("scan_divisors requires a nonempty frequency vector");
  if (K < 1) throw DomainError("scan_divisors requires radius K >= 1");

  DivisorReport rep;
  rep.radius = K;
  rep.kappa_max = std::numeric_limits<double>::infinity();
  double tau = -std::numeric_limits<double>::infinity();
  bool tau_seen = false;

  for (int m = 1; m <= K; ++m) {
    double delta_m = delta.evaluate(static_cast<double>(m));
    double shell_min = std::numeric_limits<double>::infinity();
    for (const auto& k : enumerate_shell(n, m)) {
      // Canonical half-lattice: first nonzero component positive.
      int lead = 0;
      for (int v : k)
        if (v != 0) {
          lead = v;
          break;
        }
      if (lead <= 0) continue;
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += static_cast<double>(k[static_cast<size_t>(i)]) *
                                       omega[static_cast<size_t>(i)];
      if (d == 0.0)
        throw ResonanceError("exact resonance: <k, omega> = 0 at k = " + mode_to_string(k), k);
      double ad = std::abs(d);
      double weighted = ad * delta_m;
      if (weighted < shell_min) shell_min = weighted;
      if (weighted < rep.kappa_max) {
        rep.kappa_max = weighted;
        rep.worst_k = k;
      }
      if (m >= 2) {
        double cand = -std::log(ad) / std::log(static_cast<double>(m));
        if (cand > tau) {
          tau = cand;
          tau_seen = true;
        }
      }
    }
    rep.kappa_max_per_shell[m] = shell_min;
  }
  rep.tau_fit = tau_seen ? tau : 0.0;
  return rep;
}

NonresonantGrid mark_nonresonant_grid(const FrequencySpec& freq, const ApproximationFunction& delta,
                                      double kappa, int K,
                                      const std::vector<std::vector<double>>& actions, double t) {
  if (!(kappa > 0.0)) throw DomainError("mark_nonresonant_grid requires kappa > 0");
  NonresonantGrid grid;
  grid.t = t;
  grid.kappa = kappa;
  grid.radius = K;
  grid.actions = actions;
  grid.flags.reserve(actions.size());
  grid.kappa_max.reserve(actions.size());
  for (const auto& I : actions) {
    std::vector<double> omega = freq.omega_at(I, t);
    try {
      DivisorReport rep = scan_divisors(omega, delta, K);
      grid.flags.push_back(rep.holds_for(kappa));
      grid.kappa_max.push_back(rep.kappa_max);
    } catch (const ResonanceError&) {
      grid.flags.push_back(false);
      grid.kappa_max.push_back(0.0);
    }
  }
  return grid;
}

namespace {

// (offset multiplier, weight) pairs of the O(h^2) central stencil for the
// p-th derivative; weights still need the 1/h^p scale.
std::vector<std::pair<int, double>> central_stencil(int p) {
  switch (p) {
    case 0:
      return {{0, 1.0}};
    case 1:
      return {{1, 0.5}, {-1, -0.5}};
    case 2:
      return {{1, 1.0}, {0, -2.0}, {-1, 1.0}};
    case 3:
      return {{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}};
    default:
      throw DomainError("derivative probe supports orders up to 3");
  }
}

} // namespace

DerivativeProbeReport divisor_derivative_probe(const FrequencySpec& freq,
                                               const ApproximationFunction& delta,
                                               const std::vector<int>& k, int max_total, double t,
                                               double c0, double rho, double step) {
  int n = freq.dim();
  if (static_cast<int>(k.size()) != n) throw ShapeError("probe mode dimension mismatch");
  if (max_total < 0 || max_total > 3)
    throw DomainError("derivative probe supports total orders 0..3");
  if (!(c0 > 0.0)) throw DomainError("derivative probe requires C0 > 0");
  if (!(rho >= 1.0)) throw DomainError("derivative probe requires rho >= 1");

  int abs_k = 0;
  for (int v : k) abs_k += std::abs(v);
  if (abs_k == 0) throw DomainError("derivative probe requires k != 0");

  const std::vector<double>& I0 = freq.base_action();
  double scale = 0.0;
  for (double v : I0) scale = std::max(scale, std::abs(v));
  double h0 = (step > 0.0) ? step : 1e-4 * (1.0 + scale);

  auto g = [&](const std::vector<double>& I, double tt) {
    std::vector<double> omega = freq.omega_at(I, tt);
    double d = 0.0;
    for (int i = 0; i < n; ++i) d += static_cast<double>(k[static_cast<size_t>(i)]) *
                                     omega[static_cast<size_t>(i)];
    if (d == 0.0)
      throw ResonanceError("derivative probe hit exact resonance at k = " + mode_to_string(k), k);
    return 1.0 / d;
  };

  // Tensor-product stencil application at step h.
  auto apply = [&](const MultiIndex& alpha, int dt, double h) {
    std::vector<std::vector<std::pair<int, double>>> stencils;
    stencils.reserve(static_cast<size_t>(n) + 1);
    for (int i = 0; i < n; ++i) stencils.push_back(central_stencil(alpha[i]));
    stencils.push_back(central_stencil(dt));

    double acc = 0.0;
    std::vector<size_t> idx(stencils.size(), 0);
    while (true) {
      double w = 1.0;
      std::vector<double> I(I0);
      for (int i = 0; i < n; ++i) {
        const auto& [mult, weight] = stencils[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
        I[static_cast<size_t>(i)] += mult * h;
        w *= weight;
      }
      const auto& [tmult, tweight] = stencils.back()[idx.back()];
      double tt = t + tmult * h;
      w *= tweight;
      acc += w * g(I, tt);
      // odometer increment
      size_t pos = 0;
      while (pos < idx.size()) {
        if (++idx[pos] < stencils[pos].size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) break;
    }
    int total = alpha.order() + dt;
    return acc / std::pow(h, total);
  };

  DerivativeProbeReport rep;
  rep.k = k;
  rep.step = h0;
  double delta_k = delta.evaluate(static_cast<double>(abs_k));

  for (int total = 0; total <= max_total; ++total) {
    for (int dt = 0; dt <= total; ++dt) {
      for (const auto& alpha : multi_indices_of_order(n, total - dt)) {
        DerivativeProbeRow row;
        row.alpha = alpha;
        row.dt_order = dt;
        double d_h = apply(alpha, dt, h0);
        double d_h2 = apply(alpha, dt, h0 / 2.0);
        row.fd_value = (total == 0) ? d_h : (4.0 * d_h2 - d_h) / 3.0;
        double denom = std::max(std::abs(row.fd_value), 1e-300);
        row.richardson_rel_err = std::abs(d_h2 - d_h) / denom;
        row.step_warning = (total > 0) && (row.richardson_rel_err > 1e-5);

        double env_max = 0.0;
        for (int j = 0; j <= total; ++j) {
          double cand = std::pow(factorial_real(total - j), rho) *
                        std::pow(static_cast<double>(abs_k), j) * std::pow(delta_k, j + 1);
          env_max = std::max(env_max, cand);
        }
        row.envelope = std::pow(c0, total + 1) * alpha.factorial() * factorial_real(dt) * env_max;
        row.ratio = std::abs(row.fd_value) / row.envelope;
        rep.rows.push_back(std::move(row));
      }
    }
  }
  return rep;
}

} // namespace qbnf
