#include "qbnf/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbnf/errors.hpp"
#include "qbnf/multi_index.hpp"

namespace qbnf {

namespace {

bool is_small_integer(double x, int& out) {
  double r = std::round(x);
  if (std::abs(x - r) > 0.0) return false;
  if (r < 1.0 || r > 21.0) return false;
  out = static_cast<int>(r);
  return true;
}

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// log cosh(z) without overflow.
double log_cosh(double z) {
  double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

} // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0");
  int m;
  if (is_small_integer(x, m)) return static_cast<double>(factorial_exact(m - 1));
  if (x < 30.0) return std::tgamma(x);
  return std::exp(std::lgamma(x));
}

double log_gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma_fn requires x > 0");
  return std::lgamma(x);
}

double gamma_plus(double x) {
  if (x < 0.0) throw DomainError("gamma_plus requires x >= 0");
  if (x < 1.0) return 1.0;
  return gamma_fn(x);
}

double log_beta_fn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("beta_fn requires x, y > 0");
  return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
}

double beta_fn(double x, double y) { return std::exp(log_beta_fn(x, y)); }

double log_beta_integral(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("log_beta_integral requires x, y > 0");
  // Nodes t_j = 1/(1 + e^{-2 s_j}), s_j = (pi/2) sinh(j h).  All logs are kept
  // relative to the running maximum so sharply peaked or singular integrands
  // come out with full relative accuracy.
  const double h = 1.0 / 128.0;
  const double u_max = 4.5;
  const int n = static_cast<int>(u_max / h);
  std::vector<double> contrib;
  contrib.reserve(static_cast<size_t>(2 * n + 1));
  double peak = -std::numeric_limits<double>::infinity();
  for (int j = -n; j <= n; ++j) {
    double u = j * h;
    double s = (M_PI / 2.0) * std::sinh(u);
    double log_t = -softplus(-2.0 * s);
    double log_1mt = -softplus(2.0 * s);
    double log_w = std::log(M_PI / 4.0) + log_cosh(u) - 2.0 * log_cosh(s);
    double v = (y - 1.0) * log_t + (x - 1.0) * log_1mt + log_w;
    if (std::isfinite(v)) {
      contrib.push_back(v);
      peak = std::max(peak, v);
    }
  }
  double acc = 0.0;
  for (double v : contrib) acc += std::exp(v - peak);
  return peak + std::log(acc) + std::log(h);
}

GammaBetaCheckReport check_gamma_beta_lemmas(const std::vector<double>& xs,
                                             const std::vector<double>& ys, double margin_tol) {
  GammaBetaCheckReport rep;
  rep.min_inequality_margin = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    for (double y : ys) {
      if (!(x > 0.0) || !(y > 0.0)) throw DomainError("lemma grid requires positive x, y");
      ++rep.points_checked;

      double lhs_log = std::lgamma(x) + std::lgamma(y);
      double rhs_log = std::lgamma(x + y) + log_beta_integral(x, y);
      double err = std::abs(lhs_log - rhs_log);
      if (err > rep.max_identity_rel_err) {
        rep.max_identity_rel_err = err;
        rep.worst_identity_x = x;
        rep.worst_identity_y = y;
      }

      if (x >= 1.0) {
        // Gamma(x)Gamma(y) <= (1/y)Gamma(x+y), i.e. margin >= 0 in the log domain.
        double margin = std::lgamma(x + y) - std::log(y) - lhs_log;
        if (margin < rep.min_inequality_margin) {
          rep.min_inequality_margin = margin;
          rep.worst_inequality_x = x;
          rep.worst_inequality_y = y;
        }
        double scale = 1.0 + std::abs(std::lgamma(x + y));
        if (margin < -margin_tol * scale) ++rep.inequality_violations;
      }
    }
  }
  return rep;
}

BinomialGammaCheckReport check_binomial_gamma_lemma(const std::vector<BinomialGammaSample>& samples,
                                                    const GevreyIndices& idx) {
  if (idx.mu() < 8.0 || idx.lambda() < 8.0)
    throw DomainError("binomial/gamma domination check is stated for mu >= 8 and lambda >= 8");
  const double mu = idx.mu();
  const double lambda = idx.lambda();
  BinomialGammaCheckReport rep;
  rep.ratios.reserve(samples.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (s.x1 < 0 || s.y1 < 0 || s.x2 < 0 || s.y2 < 0 || !(s.p >= 1.0) || !(s.q >= 1.0))
      throw DomainError("binomial/gamma samples require x,y >= 0 and p,q >= 1");
    double log_binoms = (7.0 / 6.0) * (std::log(binomial_real(s.x1 + s.y1, s.x1)) +
                                       std::log(binomial_real(s.x2 + s.y2, s.x2)));
    double lhs = log_binoms + std::lgamma(mu * s.x1 + lambda * s.x2 + s.p) +
                 std::lgamma(mu * s.y1 + lambda * s.y2 + s.q);
    double rhs_core = std::lgamma(mu * (s.x1 + s.y1) + lambda * (s.x2 + s.y2) + s.p + s.q) +
                      (1.0 / 3.0) * log_beta_fn(s.p, s.q);
    double log_ratio = lhs - rhs_core;
    rep.ratios.push_back(std::exp(log_ratio));
    if (log_ratio > best) {
      best = log_ratio;
      rep.worst = s;
    }
    ++rep.samples_checked;
  }
  if (rep.samples_checked == 0) throw DomainError("binomial/gamma check needs at least one sample");
  rep.fitted_m = std::exp(best);
  return rep;
}

std::vector<BinomialGammaSample> binomial_gamma_sample_grid(int max_xy,
                                                            const std::vector<double>& pq_values) {
  if (max_xy < 0) throw DomainError("sample grid bound must be >= 0");
  std::vector<BinomialGammaSample> out;
  for (int x1 = 0; x1 <= max_xy; ++x1)
    for (int y1 = 0; y1 <= max_xy; ++y1)
      for (int x2 = 0; x2 <= max_xy; ++x2)
        for (int y2 = 0; y2 <= max_xy; ++y2)
          for (double p : pq_values)
            for (double q : pq_values) out.push_back({x1, y1, x2, y2, p, q});
  return out;
}

} // namespace qbnf
