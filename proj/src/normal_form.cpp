#include "qbnf/normal_form.hpp"

#include <cmath>
#include <sstream>

#include "qbnf/errors.hpp"

namespace qbnf {

namespace {

int l1(const std::vector<int>& k) {
  int s = 0;
  for (int v : k) s += std::abs(v);
  return s;
}

// (1/gamma!) d_I^gamma A . D_phi^gamma B for single slices: a plain slice
// product after the two derivative actions.
TorusSymbol gamma_term(const TorusSymbol& A, const TorusSymbol& B, const MultiIndex& gamma,
                       const CompositionOptions& opts, CompositionDiagnostics* diag) {
  TorusSymbol dA = A.derivative_action(gamma).scale(1.0 / gamma.factorial());
  TorusSymbol dB = B.derivative_angle(gamma, AngleDerivative::weighted);
  CompositionOptions slice_opts = opts;
  slice_opts.h_order = 0;
  return compose(dA, dB, slice_opts, diag);
}

void check_slice(const TorusSymbol& s, const char* what) {
  if (s.h_order() != 0)
    throw ShapeError(std::string(what) + " must be a single-order slice (h_order 0)");
}

} // namespace

TorusSymbol f_j1(const std::vector<TorusSymbol>& p_slices,
                 const std::vector<TorusSymbol>& a_slices, int j, const CompositionOptions& opts,
                 CompositionDiagnostics* diag) {
  if (j < 2) throw SequencingError("f_j1 is defined for orders j >= 2");
  if (p_slices.empty()) throw SequencingError("f_j1 requires the order-0 slice of p");
  const TorusSymbol& frame = p_slices[0];
  check_slice(frame, "p slice");

  CompositionOptions eff = opts;
  if (eff.fourier_radius < 0) eff.fourier_radius = frame.fourier_radius();
  if (eff.taylor_degree < 0) eff.taylor_degree = frame.taylor_degree();
  SymbolShape sh = frame.shape();
  sh.h_order = 0;
  sh.fourier_radius = eff.fourier_radius;
  sh.taylor_degree = eff.taylor_degree;
  TorusSymbol acc(sh);
  if (j == 2) return acc;

  if (static_cast<int>(p_slices.size()) < j)
    throw SequencingError("f_j1 at order " + std::to_string(j) + " needs p slices up to order " +
                          std::to_string(j - 1));
  if (static_cast<int>(a_slices.size()) < j - 1)
    throw SequencingError("f_j1 at order " + std::to_string(j) + " needs a slices up to order " +
                          std::to_string(j - 2));

  for (int s = 1; s <= j - 2; ++s) {
    const TorusSymbol& a_s = a_slices[static_cast<size_t>(s)];
    check_slice(a_s, "a slice");
    for (int r = 0; r <= j - s; ++r) {
      int d = j - s - r;
      if (d > p_slices[static_cast<size_t>(r)].taylor_degree()) continue;
      for (const auto& gamma : multi_indices_of_order(frame.dim(), d))
        acc = acc + gamma_term(p_slices[static_cast<size_t>(r)], a_s, gamma, eff, diag);
    }
  }
  return acc;
}

TorusSymbol f_j2(const std::vector<TorusSymbol>& a_slices,
                 const std::vector<TorusSymbol>& p0_slices, int j, const CompositionOptions& opts,
                 CompositionDiagnostics* diag) {
  if (j < 2) throw SequencingError("f_j2 is defined for orders j >= 2");
  if (p0_slices.empty()) throw SequencingError("f_j2 requires the order-0 normal-form slice");
  const TorusSymbol& frame = p0_slices[0];
  check_slice(frame, "p0 slice");

  CompositionOptions eff = opts;
  if (eff.fourier_radius < 0) eff.fourier_radius = frame.fourier_radius();
  if (eff.taylor_degree < 0) eff.taylor_degree = frame.taylor_degree();
  SymbolShape sh = frame.shape();
  sh.h_order = 0;
  sh.fourier_radius = eff.fourier_radius;
  sh.taylor_degree = eff.taylor_degree;
  TorusSymbol acc(sh);
  if (j == 2) return acc;

  if (static_cast<int>(a_slices.size()) < j - 1)
    throw SequencingError("f_j2 at order " + std::to_string(j) + " needs a slices up to order " +
                          std::to_string(j - 2));
  if (static_cast<int>(p0_slices.size()) < j)
    throw SequencingError("f_j2 at order " + std::to_string(j) +
                          " needs normal-form slices up to order " + std::to_string(j - 1));

  CompositionOptions slice_opts = eff;
  slice_opts.h_order = 0;
  for (int s = 1; s <= j - 2; ++s) {
    const TorusSymbol& a_s = a_slices[static_cast<size_t>(s)];
    check_slice(a_s, "a slice");
    acc = acc + compose(a_s, p0_slices[static_cast<size_t>(j - s)], slice_opts, diag);
  }
  return acc;
}

NormalFormResult run_recursion(const TorusSymbol& p, const FrequencySpec& freq,
                               const ApproximationFunction& delta, double kappa, int N) {
  if (N < 2) throw DomainError("run_recursion requires N >= 2");
  if (N > p.h_order())
    throw ShapeError("run_recursion: requested order exceeds the symbol's h-truncation");
  if (freq.dim() != p.dim()) throw ShapeError("run_recursion: frequency dimension mismatch");
  if (freq.base_action() != p.base_action())
    throw ShapeError("run_recursion: frequency and symbol base actions differ");
  if (!(kappa > 0.0)) throw DomainError("run_recursion requires kappa > 0");

  const int n = p.dim();
  std::vector<int> zero_mode(static_cast<size_t>(n), 0);

  // Standing assumptions: p_0 integrable (mode 0 only), p_1 identically 0.
  for (const auto& [mode, jet] : p.order(0)) {
    (void)jet;
    if (mode != zero_mode)
      throw ShapeError("run_recursion: p_0 must be angle-independent (mode 0 only)");
  }
  if (p.h_order() >= 1) {
    for (const auto& [mode, jet] : p.order(1))
      if (!jet.is_zero())
        throw ShapeError("run_recursion: p_1 must vanish identically");
  }

  // Frequency as the exact jet gradient of p_0; this is what the homological
  // division must use for the conjugacy identity to close in the quotient
  // ring.  The supplied frequency spec is cross-checked at the base action.
  auto it0 = p.order(0).find(zero_mode);
  Jet k0 = (it0 != p.order(0).end()) ? it0->second : Jet(p.layout());
  std::vector<Jet> grad;
  grad.reserve(static_cast<size_t>(n));
  for (int d = 0; d < n; ++d) {
    std::vector<int> e(static_cast<size_t>(n), 0);
    e[static_cast<size_t>(d)] = 1;
    grad.push_back(k0.derivative(MultiIndex(e)));
  }
  OmegaField omega = OmegaField::from_jets(grad);
  std::vector<double> omega_spec = freq.omega_at_base(p.t_value());
  for (int d = 0; d < n; ++d) {
    std::complex<double> g = omega.base_values()[static_cast<size_t>(d)];
    double ref = omega_spec[static_cast<size_t>(d)];
    if (std::abs(g - std::complex<double>(ref)) > 1e-10 * (1.0 + std::abs(ref))) {
      std::ostringstream os;
      os << "run_recursion: gradient of p_0 at the base action (" << g.real()
         << ") disagrees with the supplied frequency component " << d << " (" << ref << ")";
      throw ShapeError(os.str());
    }
  }

  NormalFormResult result{
      TorusSymbol(SymbolShape{n, std::max(N - 1, 0), p.fourier_radius(), p.taylor_degree(),
                              p.base_action(), p.t_value()}),
      TorusSymbol(SymbolShape{n, N, p.fourier_radius(), p.taylor_degree(), p.base_action(),
                              p.t_value()}),
      {}, {}, std::nullopt, 0.0, 0.0, 0.0};

  CompositionOptions opts;
  opts.fourier_radius = p.fourier_radius();
  opts.taylor_degree = p.taylor_degree();

  // Slice bookkeeping; index = order.
  std::vector<TorusSymbol> p_slices, a_slices, p0_slices;
  for (int r = 0; r <= N; ++r) p_slices.push_back(p.order_slice(r));
  SymbolShape slice_shape = p_slices[0].shape();
  a_slices.push_back(TorusSymbol::constant_one(n, p.fourier_radius(), p.taylor_degree(),
                                               p.base_action(), p.t_value()));
  a_slices.push_back(TorusSymbol(slice_shape)); // a_1, filled by the j = 2 step
  p0_slices.push_back(p_slices[0]);             // p^0_0 = p_0
  p0_slices.push_back(TorusSymbol(slice_shape)); // p^0_1 = p_1 = 0

  result.residual_norms[0] = 0.0;
  result.residual_norms[1] = 0.0;

  CompositionDiagnostics diag;
  for (int j = 2; j <= N; ++j) {
    TorusSymbol F1 = f_j1(p_slices, a_slices, j, opts, &diag);
    TorusSymbol F2 = f_j2(a_slices, p0_slices, j, opts, &diag);
    // F_j2 is structurally mean-free (products of zero-mean a_s with mode-0
    // normal-form slices); the averaged form of the normal-form order relies
    // on it, so assert rather than assume.
    {
      TorusSymbol f2_mean = F2.angle_average();
      if (f2_mean.total_norm() != 0.0)
        throw NumericError("run_recursion: F_j2 unexpectedly has a nonzero angle average");
    }

    TorusSymbol pj_plus_f1 = p_slices[static_cast<size_t>(j)] + F1;
    TorusSymbol p0_j = pj_plus_f1.angle_average();
    TorusSymbol f_j = p0_j - pj_plus_f1 + F2; // = p0_j - p_j - (F1 - F2)

    try {
      HomologicalSolution sol = solve_homological(f_j, omega, delta, kappa);
      result.residual_norms[j] = sol.residual_sup;
      OrderDivisorStats stats;
      stats.order = j;
      stats.worst_divisor = sol.worst_divisor;
      stats.worst_k = sol.worst_k;
      stats.amplification =
          sol.worst_k.empty() ? 0.0
                              : delta.evaluate(static_cast<double>(l1(sol.worst_k))) / kappa;
      result.divisor_stats.push_back(std::move(stats));
      if (!sol.removed_mean.is_zero() && sol.removed_mean.l1_norm() > 1e-12 * f_j.total_norm())
        throw NumericError("run_recursion: inhomogeneity at order " + std::to_string(j) +
                           " has a nonzero angle average");
      if (j - 1 >= static_cast<int>(a_slices.size()))
        a_slices.push_back(TorusSymbol(slice_shape));
      a_slices[static_cast<size_t>(j - 1)] = sol.u;
    } catch (const SmallDivisorError& e) {
      throw SmallDivisorError("order " + std::to_string(j) + ": " + e.what(), e.mode(), j);
    }
    p0_slices.push_back(p0_j);
  }

  // Assemble the full symbols.
  for (int s = 0; s <= N - 1; ++s) result.a.assign_order(s, a_slices[static_cast<size_t>(s)]);
  for (int j = 0; j <= N; ++j) result.p0.assign_order(j, p0_slices[static_cast<size_t>(j)]);
  result.fourier_clipped = diag.fourier_clipped;
  result.taylor_clipped = diag.taylor_clipped;
  result.reality_deviation_p0 = result.p0.reality_deviation();

  // Growth fit is best-effort: it needs enough populated orders.
  try {
    result.growth_fit = fit_growth(result);
  } catch (const FitError&) {
    result.growth_fit = std::nullopt;
  }
  return result;
}

ConjugacyReport verify_conjugacy(const TorusSymbol& p, const NormalFormResult& result) {
  require_same_frame(p, result.a);
  const int N = result.p0.h_order();
  ConjugacyReport rep;
  rep.widened_radius = p.fourier_radius() * std::max(N, 2);
  rep.p_total_norm = p.total_norm();

  CompositionOptions wide;
  wide.h_order = N;
  wide.fourier_radius = rep.widened_radius;
  wide.taylor_degree = p.taylor_degree();

  TorusSymbol lhs = compose(p, result.a, wide, &rep.diag);
  TorusSymbol rhs = compose(result.a, result.p0, wide, &rep.diag);
  TorusSymbol c = lhs - rhs;
  SymbolNorm norms = c.norms();
  for (int j = 0; j <= N; ++j) {
    double v = norms.per_order[static_cast<size_t>(j)];
    rep.residual_norms[j] = v;
    rep.max_residual = std::max(rep.max_residual, v);
  }
  return rep;
}

GrowthFit fit_growth(const NormalFormResult& result) {
  SymbolNorm norms = result.a.norms();
  std::vector<double> js, ys;
  for (int j = 1; j <= result.a.h_order(); ++j) {
    double v = norms.per_order[static_cast<size_t>(j)];
    if (v > 0.0) {
      js.push_back(static_cast<double>(j));
      ys.push_back(std::log(v));
    }
  }
  if (js.size() < 4)
    throw FitError("fit_growth needs at least 4 nonzero conjugator orders, have " +
                   std::to_string(js.size()));

  // Least squares on [1, j, j log j - j].
  double g[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double b[3] = {0, 0, 0};
  for (size_t i = 0; i < js.size(); ++i) {
    double j = js[i];
    double basis[3] = {1.0, j, j * std::log(j) - j};
    for (int r = 0; r < 3; ++r) {
      b[r] += basis[r] * ys[i];
      for (int cidx = 0; cidx < 3; ++cidx) g[r][cidx] += basis[r] * basis[cidx];
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 system.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(g[perm[r]][col]) > std::abs(g[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    double diag = g[perm[col]][col];
    if (std::abs(diag) < 1e-300) throw FitError("fit_growth: singular normal equations");
    for (int r = col + 1; r < 3; ++r) {
      double f = g[perm[r]][col] / diag;
      for (int c2 = col; c2 < 3; ++c2) g[perm[r]][c2] -= f * g[perm[col]][c2];
      b[perm[r]] -= f * b[perm[col]];
    }
  }
  double x[3];
  for (int col = 2; col >= 0; --col) {
    double acc = b[perm[col]];
    for (int c2 = col + 1; c2 < 3; ++c2) acc -= g[perm[col]][c2] * x[c2];
    x[col] = acc / g[perm[col]][col];
  }

  GrowthFit fit;
  fit.intercept = x[0];
  fit.log_d_hat = x[1];
  fit.rho_bar_hat = x[2];
  fit.orders_used = static_cast<int>(js.size());
  double sse = 0.0, ybar = 0.0;
  for (double y : ys) ybar += y;
  ybar /= static_cast<double>(ys.size());
  double sst = 0.0;
  for (size_t i = 0; i < js.size(); ++i) {
    double j = js[i];
    double pred = x[0] + x[1] * j + x[2] * (j * std::log(j) - j);
    sse += (ys[i] - pred) * (ys[i] - pred);
    sst += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.r2 = (sst > 0.0) ? 1.0 - sse / sst : ((sse <= 1e-18) ? 1.0 : 0.0);
  return fit;
}

TruncationEval optimal_truncation_eval(const TorusSymbol& p0, const std::vector<double>& I,
                                       double t, double h, double eta, double rho_bar) {
  if (!(h > 0.0)) throw DomainError("optimal_truncation_eval requires h > 0");
  if (!(eta > 0.0)) throw DomainError("optimal_truncation_eval requires eta > 0");
  if (!(rho_bar > 0.0)) throw DomainError("optimal_truncation_eval requires rho_bar > 0");
  if (std::abs(t - p0.t_value()) > 1e-12 * (1.0 + std::abs(t)))
    throw ShapeError("optimal_truncation_eval: t differs from the symbol's frozen parameter");
  if (static_cast<int>(I.size()) != p0.dim())
    throw ShapeError("optimal_truncation_eval: action dimension mismatch");

  const int N = p0.h_order();
  std::vector<double> x(I);
  for (int d = 0; d < p0.dim(); ++d) x[static_cast<size_t>(d)] -= p0.base_action()[static_cast<size_t>(d)];
  std::vector<int> zero_mode(static_cast<size_t>(p0.dim()), 0);

  TruncationEval ev;
  std::vector<std::complex<double>> terms(static_cast<size_t>(N) + 1, 0.0);
  double hj = 1.0;
  for (int j = 0; j <= N; ++j) {
    auto it = p0.order(j).find(zero_mode);
    std::complex<double> v = (it != p0.order(j).end()) ? it->second.evaluate(x) : 0.0;
    terms[static_cast<size_t>(j)] = v * hj;
    ev.term_magnitudes.push_back(std::abs(terms[static_cast<size_t>(j)]));
    hj *= h;
  }

  // Smallest nonzero magnitude (ties resolved to the lowest order).  Exact
  // zeros (e.g. parity-suppressed orders) carry no size information for the
  // stationarity rule and are skipped; an all-zero series truncates at 0.
  int J = -1;
  for (int j = 0; j <= N; ++j) {
    double m = ev.term_magnitudes[static_cast<size_t>(j)];
    if (m > 0.0 && (J < 0 || m < ev.term_magnitudes[static_cast<size_t>(J)])) J = j;
  }
  if (J < 0) J = 0;
  ev.J_used = J;
  ev.last_term = ev.term_magnitudes[static_cast<size_t>(J)];
  for (int j = 0; j <= J; ++j) ev.value += terms[static_cast<size_t>(j)];

  double raw = eta * std::pow(h, -1.0 / rho_bar);
  ev.J_theorem = std::min(static_cast<int>(std::floor(raw)), N);
  for (int j = 0; j <= ev.J_theorem; ++j) ev.value_theorem += terms[static_cast<size_t>(j)];
  return ev;
}

} // namespace qbnf
