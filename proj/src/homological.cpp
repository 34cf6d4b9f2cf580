#include "qbnf/homological.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qbnf/errors.hpp"

namespace qbnf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int l1(const std::vector<int>& k) {
  int s = 0;
  for (int v : k) s += std::abs(v);
  return s;
}

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

} // namespace

OmegaField OmegaField::constant(std::vector<double> omega) {
  if (omega.empty()) throw ShapeError("omega field requires dimension >= 1");
  OmegaField f;
  f.base_.reserve(omega.size());
  for (double w : omega) f.base_.emplace_back(w, 0.0);
  return f;
}

OmegaField OmegaField::from_jets(std::vector<Jet> components) {
  if (components.empty()) throw ShapeError("omega field requires dimension >= 1");
  int n = components[0].dim();
  if (static_cast<int>(components.size()) != n)
    throw ShapeError("omega field needs one jet per action dimension");
  OmegaField f;
  f.base_.reserve(components.size());
  for (const auto& j : components) {
    if (j.dim() != n) throw ShapeError("omega component jet dimension mismatch");
    f.base_.push_back(j.constant_term());
  }
  f.jets_ = std::move(components);
  return f;
}

std::complex<double> OmegaField::divisor_at_base(const std::vector<int>& k) const {
  if (static_cast<int>(k.size()) != dim()) throw ShapeError("divisor mode dimension mismatch");
  std::complex<double> d = 0.0;
  for (int i = 0; i < dim(); ++i)
    d += static_cast<double>(k[static_cast<size_t>(i)]) * base_[static_cast<size_t>(i)];
  return d;
}

Jet OmegaField::divisor_jet(const std::vector<int>& k,
                            const std::shared_ptr<const JetLayout>& layout) const {
  if (static_cast<int>(k.size()) != dim()) throw ShapeError("divisor mode dimension mismatch");
  if (is_constant()) return Jet::constant(layout, divisor_at_base(k));
  Jet d(layout);
  for (int i = 0; i < dim(); ++i) {
    double ki = static_cast<double>(k[static_cast<size_t>(i)]);
    if (ki == 0.0) continue;
    d += jets_[static_cast<size_t>(i)].relayout(layout) * ki;
  }
  return d;
}

ResidualGrid ResidualGrid::defaults(int dim) {
  ResidualGrid g;
  // Angles: 8^dim tensor grid (capped to keep the sup cheap in higher dims).
  int per_dim = dim <= 2 ? 8 : 4;
  std::vector<int> idx(static_cast<size_t>(dim), 0);
  while (true) {
    std::vector<double> phi(static_cast<size_t>(dim));
    for (int d = 0; d < dim; ++d)
      phi[static_cast<size_t>(d)] = 2.0 * M_PI * idx[static_cast<size_t>(d)] / per_dim;
    g.angles.push_back(phi);
    size_t pos = 0;
    while (pos < idx.size()) {
      if (++idx[pos] < per_dim) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  // Action probes: base point plus small one-sided offsets per dimension.
  g.action_offsets.push_back(std::vector<double>(static_cast<size_t>(dim), 0.0));
  for (int d = 0; d < dim; ++d) {
    for (double off : {0.1, -0.1}) {
      std::vector<double> x(static_cast<size_t>(dim), 0.0);
      x[static_cast<size_t>(d)] = off;
      g.action_offsets.push_back(x);
    }
  }
  return g;
}

double residual_sup(const TorusSymbol& u, const TorusSymbol& f, const OmegaField& omega,
                    const ResidualGrid& grid) {
  require_same_frame(u, f);
  if (u.h_order() != 0 || f.h_order() != 0)
    throw ShapeError("residual_sup expects single-order slices");
  if (omega.dim() != u.dim()) throw ShapeError("residual_sup frequency dimension mismatch");

  // Residual modes g_k = <omega, k> (x) u_k - f_k in the quotient ring.
  std::map<std::vector<int>, Jet> gmodes;
  auto layout = u.layout();
  for (const auto& [mode, jet] : u.order(0)) {
    Jet d = omega.divisor_jet(mode, layout);
    gmodes.emplace(mode, d.multiply(jet));
  }
  for (const auto& [mode, jet] : f.order(0)) {
    Jet fj = jet.relayout(layout);
    auto it = gmodes.find(mode);
    if (it == gmodes.end())
      gmodes.emplace(mode, fj * std::complex<double>(-1.0));
    else
      it->second -= fj;
  }

  double sup = 0.0;
  for (const auto& x : grid.action_offsets) {
    // Evaluate each mode jet once per action probe.
    std::vector<std::pair<const std::vector<int>*, std::complex<double>>> vals;
    vals.reserve(gmodes.size());
    for (const auto& [mode, jet] : gmodes) vals.emplace_back(&mode, jet.evaluate(x));
    for (const auto& phi : grid.angles) {
      std::complex<double> acc = 0.0;
      for (const auto& [mode, v] : vals) {
        double phase = 0.0;
        for (size_t d = 0; d < phi.size(); ++d)
          phase += static_cast<double>((*mode)[d]) * phi[d];
        acc += v * std::exp(std::complex<double>(0.0, phase));
      }
      sup = std::max(sup, std::abs(acc));
    }
  }
  return sup;
}

HomologicalSolution solve_homological(const TorusSymbol& f, const OmegaField& omega,
                                      const ApproximationFunction& delta, double kappa) {
  if (f.h_order() != 0) throw ShapeError("solve_homological expects a single-order slice");
  if (omega.dim() != f.dim()) throw ShapeError("solve_homological frequency dimension mismatch");
  if (!(kappa > 0.0)) throw DomainError("solve_homological requires kappa > 0");

  std::vector<int> zero(static_cast<size_t>(f.dim()), 0);
  HomologicalSolution sol{TorusSymbol(f.shape()), Jet(f.layout()), kInf, {}, 0.0, kInf};

  for (const auto& [mode, jet] : f.order(0)) {
    if (mode == zero) {
      sol.removed_mean = jet;
      continue;
    }
    std::complex<double> d0 = omega.divisor_at_base(mode);
    double ad = std::abs(d0);
    if (ad == 0.0)
      throw ResonanceError("homological equation hit exact resonance at k = " +
                               mode_to_string(mode),
                           mode);
    double threshold = kappa / delta.evaluate(static_cast<double>(l1(mode)));
    if (ad < threshold)
      throw SmallDivisorError("small divisor |<omega,k>| = " + std::to_string(ad) + " < " +
                                  std::to_string(threshold) + " at k = " + mode_to_string(mode),
                              mode);
    if (ad < sol.worst_divisor) {
      sol.worst_divisor = ad;
      sol.worst_k = mode;
    }

    if (omega.is_constant()) {
      sol.u.set_mode_jet(0, mode, jet * (1.0 / d0));
    } else {
      Jet div = omega.divisor_jet(mode, f.layout());
      sol.u.set_mode_jet(0, mode, div.reciprocal().multiply(jet));
      // Crude validity radius: constant term against the l1 mass of the
      // action-dependent remainder.
      double lip = div.l1_norm() - std::abs(div.constant_term());
      if (lip > 0.0) sol.validity_radius = std::min(sol.validity_radius, ad / lip);
    }
  }
  if (!std::isfinite(sol.worst_divisor)) sol.worst_divisor = 0.0; // no active modes

  TorusSymbol f_centered = f;
  if (!sol.removed_mean.is_zero()) {
    TorusSymbol mean(f.shape());
    mean.set_mode_jet(0, zero, sol.removed_mean);
    f_centered = f - mean;
  }
  sol.residual_sup = residual_sup(sol.u, f_centered, omega, ResidualGrid::defaults(f.dim()));
  return sol;
}

DecayFit fit_decay(const TorusSymbol& f, double sigma_ref, bool constrain_sigma) {
  if (f.h_order() != 0) throw ShapeError("fit_decay expects a single-order slice");
  if (!(sigma_ref > 0.0)) throw DomainError("fit_decay requires sigma_ref > 0");

  // Shell maxima over modes and monomials, |k|_1 >= 2.
  std::map<int, double> shell_max;
  for (const auto& [mode, jet] : f.order(0)) {
    int m = l1(mode);
    if (m < 2) continue;
    double mx = 0.0;
    for (int i = 0; i < jet.layout()->size(); ++i) mx = std::max(mx, std::abs(jet.at(i)));
    if (mx > 0.0) {
      auto it = shell_max.find(m);
      if (it == shell_max.end())
        shell_max[m] = mx;
      else
        it->second = std::max(it->second, mx);
    }
  }
  if (shell_max.size() < 4)
    throw FitError("fit_decay needs at least 4 populated shells with |k|_1 >= 2, have " +
                   std::to_string(shell_max.size()));

  std::vector<double> ms, ys;
  for (const auto& [m, v] : shell_max) {
    ms.push_back(static_cast<double>(m));
    ys.push_back(std::log(v));
  }
  size_t npts = ms.size();

  // For fixed sigma the model y = A - c m^{1/sigma} is linear in (A, c).
  auto solve_linear = [&](double sigma, double& A, double& c) {
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (size_t i = 0; i < npts; ++i) {
      double x = -std::pow(ms[i], 1.0 / sigma);
      s1 += 1.0;
      sx += x;
      sxx += x * x;
      sy += ys[i];
      sxy += x * ys[i];
    }
    double det = s1 * sxx - sx * sx;
    if (std::abs(det) < 1e-14 * (std::abs(s1 * sxx) + 1.0)) {
      A = sy / s1;
      c = 0.0;
      return;
    }
    A = (sxx * sy - sx * sxy) / det;
    c = (s1 * sxy - sx * sy) / det;
  };
  auto sse_at = [&](double sigma) {
    double A, c;
    solve_linear(sigma, A, c);
    double sse = 0.0;
    for (size_t i = 0; i < npts; ++i) {
      double pred = A - c * std::pow(ms[i], 1.0 / sigma);
      sse += (ys[i] - pred) * (ys[i] - pred);
    }
    return sse;
  };

  DecayFit fit;
  fit.shells_used = static_cast<int>(npts);
  if (constrain_sigma) {
    fit.sigma_hat = sigma_ref;
    fit.constrained = true;
  } else {
    const double lo = 1.05, hi = 8.0;
    const int ngrid = 160;
    double best_sigma = lo, best_sse = kInf;
    for (int i = 0; i < ngrid; ++i) {
      double sigma = lo * std::pow(hi / lo, static_cast<double>(i) / (ngrid - 1));
      double sse = sse_at(sigma);
      if (sse < best_sse) {
        best_sse = sse;
        best_sigma = sigma;
      }
    }
    // Golden-section refinement around the best grid point.
    double a = best_sigma / std::pow(hi / lo, 1.0 / (ngrid - 1));
    double b = best_sigma * std::pow(hi / lo, 1.0 / (ngrid - 1));
    a = std::max(a, lo);
    b = std::min(b, hi);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = sse_at(x1), f2 = sse_at(x2);
    for (int it = 0; it < 120 && (b - a) > 1e-10; ++it) {
      if (f1 > f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = sse_at(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = sse_at(x1);
      }
    }
    fit.sigma_hat = 0.5 * (a + b);
  }

  solve_linear(fit.sigma_hat, fit.intercept, fit.c_hat);
  double sse = sse_at(fit.sigma_hat);
  double ybar = 0.0;
  for (double y : ys) ybar += y;
  ybar /= static_cast<double>(npts);
  double sst = 0.0;
  for (double y : ys) sst += (y - ybar) * (y - ybar);
  if (sst > 0.0)
    fit.r2 = 1.0 - sse / sst;
  else
    fit.r2 = (sse <= 1e-18) ? 1.0 : 0.0;
  return fit;
}

} // namespace qbnf
