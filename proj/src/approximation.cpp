#include "qbnf/approximation.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "qbnf/errors.hpp"

namespace qbnf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Composite-Simpson with panel doubling until the estimate stabilizes.
// Integrands here are smooth after the log substitution, so this converges
// geometrically and stays bitwise deterministic.
template <typename F>
double simpson_refine(F&& f, double a, double b, double rel_tol, int max_doublings = 18) {
  if (!(b > a)) return 0.0;
  int n = 64;
  double h = (b - a) / n;
  double ends = f(a) + f(b);
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; ++i) {
    double v = f(a + i * h);
    if (i % 2 == 1)
      odd += v;
    else
      even += v;
  }
  double prev = (h / 3.0) * (ends + 4.0 * odd + 2.0 * even);
  for (int it = 0; it < max_doublings; ++it) {
    // New odd nodes are the midpoints of the current panels.
    double new_odd = 0.0;
    int n2 = n * 2;
    double h2 = (b - a) / n2;
    for (int i = 1; i < n2; i += 2) new_odd += f(a + i * h2);
    even += odd;
    odd = new_odd;
    n = n2;
    h = h2;
    double cur = (h / 3.0) * (ends + 4.0 * odd + 2.0 * even);
    if (std::abs(cur - prev) <= rel_tol * (std::abs(cur) + 1e-300)) return cur;
    prev = cur;
  }
  return prev;
}

// int_A^B w(t) / t^{1+1/sigma} dt with u = log t, so the integrand becomes
// w(e^u) e^{-u/sigma}.
template <typename W>
double weighted_log_integral(W&& w, double A, double B, double sigma, double rel_tol = 1e-10) {
  if (!(B > A)) return 0.0;
  auto g = [&](double u) {
    double t = std::exp(u);
    return w(t) * std::exp(-u / sigma);
  };
  return simpson_refine(g, std::log(A), std::log(B), rel_tol);
}

// Analytic upper bound for int_X^inf n log(1+t) / t^{1+1/sigma} dt.
double poly_log_tail(double n, double X, double sigma) {
  return n * sigma * std::pow(X, -1.0 / sigma) * (std::log1p(X) + sigma);
}

} // namespace

ApproximationFunction::ApproximationFunction(DeltaKind kind, double param, double sigma,
                                             std::shared_ptr<const ApproximationFunction> inner)
    : kind_(kind), param_(param), sigma_(sigma), inner_(std::move(inner)) {}

ApproximationFunction ApproximationFunction::polynomial(double n, double sigma) {
  if (!(sigma > 1.0)) throw DomainError("approximation function requires sigma > 1");
  if (!(n >= 0.0)) throw DomainError("polynomial kind requires exponent n >= 0");
  return ApproximationFunction(DeltaKind::polynomial, n, sigma, nullptr);
}

ApproximationFunction ApproximationFunction::sub_exponential(double a, double sigma) {
  if (!(sigma > 1.0)) throw DomainError("approximation function requires sigma > 1");
  if (!(a > 0.0)) throw DomainError("sub_exponential kind requires a > 0");
  return ApproximationFunction(DeltaKind::sub_exponential, a, sigma, nullptr);
}

ApproximationFunction ApproximationFunction::log_tempered(double g, double sigma) {
  if (!(sigma > 1.0)) throw DomainError("approximation function requires sigma > 1");
  if (!(g > 1.0)) throw DomainError("log_tempered kind requires exponent > 1");
  return ApproximationFunction(DeltaKind::log_tempered, g, sigma, nullptr);
}

ApproximationFunction ApproximationFunction::product_with_power(double s,
                                                                ApproximationFunction inner) {
  if (!(s >= 1.0)) throw DomainError("product_with_power requires power s >= 1");
  double sigma = inner.sigma();
  return ApproximationFunction(DeltaKind::product_with_power, s, sigma,
                               std::make_shared<const ApproximationFunction>(std::move(inner)));
}

std::string ApproximationFunction::describe() const {
  switch (kind_) {
    case DeltaKind::polynomial:
      return "(1+t)^" + std::to_string(param_);
    case DeltaKind::sub_exponential:
      return "exp(t^" + std::to_string(param_) + "/" + std::to_string(param_) + ")";
    case DeltaKind::log_tempered:
      return "exp(t^(1/" + std::to_string(sigma_) + ")/(1+log^" + std::to_string(param_) +
             "(1+t)))";
    case DeltaKind::product_with_power:
      return "(1+t)^" + std::to_string(param_) + " * " + inner_->describe();
  }
  return "?";
}

double ApproximationFunction::log_evaluate(double t) const {
  if (!(t >= 0.0)) throw DomainError("approximation function requires t >= 0");
  switch (kind_) {
    case DeltaKind::polynomial:
      return param_ * std::log1p(t);
    case DeltaKind::sub_exponential:
      return std::pow(t, param_) / param_;
    case DeltaKind::log_tempered: {
      double lg = std::log1p(t);
      return std::pow(t, 1.0 / sigma_) / (1.0 + std::pow(lg, param_));
    }
    case DeltaKind::product_with_power:
      return param_ * std::log1p(t) + inner_->log_evaluate(t);
  }
  return 0.0;
}

double ApproximationFunction::evaluate(double t) const { return std::exp(log_evaluate(t)); }

namespace {

// Upper bound for int_X^inf log Delta(t) / t^{1+1/sigma} dt; +inf when the
// integral diverges for this kind/parameter pairing.
double log_delta_tail(const ApproximationFunction& d, double X, double sigma) {
  switch (d.kind()) {
    case DeltaKind::polynomial:
      return poly_log_tail(d.param(), X, sigma);
    case DeltaKind::sub_exponential: {
      double a = d.param();
      if (a >= 1.0 / sigma) return kInf;
      return std::pow(X, a - 1.0 / sigma) / (a * (1.0 / sigma - a));
    }
    case DeltaKind::log_tempered: {
      double g = d.param();
      double eps = 1.0 / sigma - 1.0 / d.sigma();
      if (eps > 0.0) return std::pow(X, -eps) / eps;
      if (eps < 0.0) return kInf;
      // log Delta / t^{1+1/sigma} = 1 / (t (1 + log^g(1+t))) <= 1/(t log^g t).
      if (!(X > std::exp(1.0))) return kInf; // window too small to bound; not hit in practice
      return std::pow(std::log(X), 1.0 - g) / (g - 1.0);
    }
    case DeltaKind::product_with_power:
      return poly_log_tail(d.param(), X, sigma) + log_delta_tail(*d.inner(), X, sigma);
  }
  return kInf;
}

} // namespace

ValidityReport check_validity(const ApproximationFunction& delta, double varsigma, double grid_max,
                              int points_per_decade) {
  if (!(varsigma > 0.0) || !(grid_max > varsigma))
    throw DomainError("check_validity requires 0 < varsigma < grid_max");
  if (points_per_decade < 4) throw DomainError("check_validity needs >= 4 points per decade");

  ValidityReport rep;
  rep.varsigma = varsigma;
  rep.grid_max = grid_max;
  double sigma = delta.sigma();

  // Ratio scan on a geometric grid.
  int decades_x_ppd =
      static_cast<int>(std::ceil(std::log10(grid_max / varsigma) * points_per_decade));
  int npts = decades_x_ppd + 1;
  rep.grid_points = npts;
  std::vector<double> ratio(static_cast<size_t>(npts));
  std::vector<double> log_delta(static_cast<size_t>(npts));
  double log_lo = std::log(varsigma), log_hi = std::log(grid_max);
  int peak_idx = 0;
  for (int i = 0; i < npts; ++i) {
    double t = std::exp(log_lo + (log_hi - log_lo) * i / (npts - 1));
    log_delta[static_cast<size_t>(i)] = delta.log_evaluate(t);
    ratio[static_cast<size_t>(i)] = log_delta[static_cast<size_t>(i)] / std::pow(t, 1.0 / sigma);
    if (ratio[static_cast<size_t>(i)] > ratio[static_cast<size_t>(peak_idx)]) peak_idx = i;
  }

  // Spot check of the defining monotonicity: Delta non-decreasing on [0, inf),
  // up to roundoff slop.
  rep.monotone_delta_ok = log_delta.front() >= -1e-12;
  for (int i = 0; i + 1 < npts && rep.monotone_delta_ok; ++i) {
    double lo = log_delta[static_cast<size_t>(i)], hi = log_delta[static_cast<size_t>(i + 1)];
    if (hi < lo - 1e-12 * std::max(1.0, std::abs(lo))) rep.monotone_delta_ok = false;
  }
  rep.ratio_peak = ratio[static_cast<size_t>(peak_idx)];
  rep.ratio_peak_t = std::exp(log_lo + (log_hi - log_lo) * peak_idx / (npts - 1));
  rep.ratio_at_end = ratio.back();

  bool monotone_after_peak = true;
  for (int i = peak_idx; i + 1 < npts; ++i) {
    if (ratio[static_cast<size_t>(i + 1)] >
        ratio[static_cast<size_t>(i)] * (1.0 + 1e-9) + 1e-300) {
      monotone_after_peak = false;
      break;
    }
  }
  rep.monotone_ratio_ok = (rep.ratio_peak > 0.0) && (peak_idx < npts - 1) && monotone_after_peak &&
                          (rep.ratio_at_end < rep.ratio_peak * (1.0 - 1e-6));

  // Weighted log-integral: quadrature over the window plus an analytic tail.
  rep.tail_bound = log_delta_tail(delta, grid_max, sigma);
  if (std::isfinite(rep.tail_bound)) {
    double quad = weighted_log_integral([&](double t) { return delta.log_evaluate(t); }, varsigma,
                                        grid_max, sigma);
    rep.integral_value = quad + rep.tail_bound;
    rep.integral_converges = true;
  } else {
    rep.integral_value = kInf;
    rep.integral_converges = false;
  }
  return rep;
}

namespace {

double golden_max(const std::function<double(double)>& g, double lo, double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

} // namespace

GammaSupResult gamma_sup(const ApproximationFunction& delta, double s, double eta) {
  if (!(s >= 0.0)) throw DomainError("gamma_sup requires s >= 0");
  if (!(eta > 0.0)) throw DomainError("gamma_sup requires eta > 0");
  double sigma = delta.sigma();
  auto objective = [&](double t) {
    return s * std::log1p(t) + delta.log_evaluate(t) - eta * std::pow(t, 1.0 / sigma);
  };

  const int n_scan = 700;
  // The argmax can sit astronomically far out for Delta close to the growth
  // boundary (e.g. exp(t^a/a) with a -> 1/sigma and small eta puts it at
  // (eta/2)^{1/(a - 1/sigma^{-1})}), so the scan window is generous; work in
  // the log domain throughout.
  const double t_lo = 1e-8, t_hi = 1e30;
  std::vector<double> ts;
  ts.reserve(n_scan + 1);
  ts.push_back(0.0);
  double llo = std::log(t_lo), lhi = std::log(t_hi);
  for (int i = 0; i < n_scan; ++i) ts.push_back(std::exp(llo + (lhi - llo) * i / (n_scan - 1)));

  int best = 0;
  double best_val = objective(0.0);
  std::vector<double> vals(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    vals[i] = objective(ts[i]);
    if (vals[i] > best_val) {
      best_val = vals[i];
      best = static_cast<int>(i);
    }
  }
  if (best == static_cast<int>(ts.size()) - 1 && vals.back() > vals[vals.size() - 2])
    throw NumericError("gamma_sup: objective still increasing at t = 1e30 (sup appears divergent; "
                       "check the growth condition of Delta)");

  double t_star;
  if (best == 0) {
    // Peak at or next to t = 0: refine linearly on [0, first scan point].
    double hi = ts[1];
    std::function<double(double)> g = objective;
    t_star = golden_max(g, 0.0, hi, 1e-16);
    if (objective(0.0) >= objective(t_star)) t_star = 0.0;
  } else {
    double lo = ts[static_cast<size_t>(best - 1)];
    double hi = ts[static_cast<size_t>(best) + 1];
    std::function<double(double)> g = [&](double u) { return objective(std::exp(u)); };
    double u_star = golden_max(g, std::log(lo), std::log(hi), 1e-13);
    t_star = std::exp(u_star);
  }

  GammaSupResult res;
  res.argmax_t = t_star;
  res.log_value = objective(t_star);
  if (res.log_value < best_val) { // golden refinement should never lose to the scan
    res.log_value = best_val;
    res.argmax_t = ts[static_cast<size_t>(best)];
  }
  res.value = std::exp(res.log_value);
  return res;
}

ThresholdBoundReport threshold_bound(const ApproximationFunction& delta, double s, double eta,
                                     double kappa_ratio, double varsigma, double slack_tol) {
  if (!(kappa_ratio > 1.0) || !(kappa_ratio <= 2.0))
    throw DomainError("threshold_bound requires kappa_ratio in (1, 2]");
  if (!(eta > 0.0)) throw DomainError("threshold_bound requires eta > 0");
  if (!(s >= 0.0)) throw DomainError("threshold_bound requires s >= 0");
  double sigma = delta.sigma();
  double log_k = std::log(kappa_ratio);
  const double X = 1e12; // quadrature window top; beyond it the analytic tail takes over

  double tail_delta = log_delta_tail(delta, X, sigma);
  if (!std::isfinite(tail_delta))
    throw NumericError("threshold_bound: weighted log-integral of Delta diverges");
  double tail_s = (s > 0.0) ? poly_log_tail(s, X, sigma) : 0.0;

  auto weight = [&](double t) { return delta.log_evaluate(t) + s * std::log1p(t); };
  // Upper bound of the tail integral from T.  Inside the quadrature window the
  // exact integral over [T, X] is added to the analytic tail past X; beyond the
  // window the analytic tail from T itself takes over (the windowed form would
  // freeze at tail(X) and hide that Q still decays to zero).
  auto Q = [&](double T) {
    if (T >= X)
      return log_delta_tail(delta, T, sigma) + ((s > 0.0) ? poly_log_tail(s, T, sigma) : 0.0);
    return weighted_log_integral(weight, T, X, sigma) + tail_delta + tail_s;
  };

  double budget = eta * log_k;
  double T;
  if (Q(varsigma) <= budget) {
    T = varsigma;
  } else {
    // Bracket and bisect in u = log T: admissible thresholds can sit far past
    // the quadrature window (slowly decaying tails put them at e^90 and
    // beyond), so the search has to cover the whole representable range.
    const double u_max = 690.0; // T = e^690 ~ 1e299
    double ulo = std::log(varsigma), uhi = ulo;
    bool bracketed = false;
    for (double step = 1.0; uhi < u_max; step *= 2.0) {
      uhi = std::min(u_max, uhi + step);
      if (Q(std::exp(uhi)) <= budget) {
        bracketed = true;
        break;
      }
      ulo = uhi;
    }
    if (!bracketed)
      throw NumericError("threshold_bound: no representable threshold (T would exceed 1e299); "
                         "the weighted tail decays too slowly for this parameter and eta");
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (ulo + uhi);
      if (Q(std::exp(mid)) <= budget)
        uhi = mid;
      else
        ulo = mid;
      if ((uhi - ulo) <= 1e-12 * std::max(1.0, std::abs(uhi))) break;
    }
    T = std::exp(uhi); // condition verified at the returned end
  }

  ThresholdBoundReport rep;
  rep.threshold_t = T;
  double a_int = (T >= X) ? log_delta_tail(delta, T, sigma)
                          : weighted_log_integral([&](double t) { return delta.log_evaluate(t); },
                                                  T, X, sigma) +
                                tail_delta;
  double c_int = (T >= X) ? poly_log_tail(1.0, T, sigma)
                          : weighted_log_integral([](double t) { return std::log1p(t); }, T, X,
                                                  sigma) +
                                poly_log_tail(1.0, X, sigma);
  rep.a_part = a_int / log_k;
  rep.c_part = c_int / log_k;

  double tpow = std::pow(T, 1.0 / sigma);
  rep.log_bound = eta * tpow;
  rep.bound = std::exp(rep.log_bound); // +inf for thresholds far out; log_bound stays exact
  rep.bound_from_split = std::exp((rep.a_part + rep.c_part * s) * tpow);

  GammaSupResult gs = gamma_sup(delta, s, eta);
  rep.gamma_value = gs.value;
  rep.slack = std::exp(gs.log_value - rep.log_bound);
  // Certify in the log domain so an overflowing bound still compares exactly.
  rep.holds = gs.log_value <= rep.log_bound + std::log1p(slack_tol);
  return rep;
}

} // namespace qbnf
