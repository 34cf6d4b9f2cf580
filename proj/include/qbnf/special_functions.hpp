#pragma once

// Gamma / Beta evaluation plus the factorial-combinatorics inequality checks
// that underpin the Gevrey coefficient estimates.

#include <cstdint>
#include <vector>

#include "qbnf/gevrey_indices.hpp"

namespace qbnf {

// Gamma(x) for x > 0.  Integer arguments 1..21 hit an exact factorial table;
// elsewhere the value is computed in the log domain above x = 30 to avoid
// premature overflow.  Throws DomainError for x <= 0.
double gamma_fn(double x);

// log Gamma(x) for x > 0.
double log_gamma_fn(double x);

// Clamped variant: Gamma(x) for x >= 1, and 1 for 0 <= x < 1 (the monotone
// floor used when coefficient-growth envelopes hit sub-unit arguments).
double gamma_plus(double x);

// Beta(x, y) for x, y > 0, evaluated in the log domain.
double beta_fn(double x, double y);
double log_beta_fn(double x, double y);

// Independent Beta route: tanh-sinh quadrature of the defining integral
// int_0^1 t^{y-1} (1-t)^{x-1} dt, stable at any magnitude because the
// integrand is summed relative to its own peak.  Used to keep the identity
// check below a genuine two-route comparison instead of an algebraic echo.
double log_beta_integral(double x, double y);

struct GammaBetaCheckReport {
  // Identity Gamma(x)Gamma(y) = Gamma(x+y) B(x,y) with B from the quadrature
  // route; max |log LHS - log RHS| over the grid (~relative error).
  double max_identity_rel_err = 0.0;
  double worst_identity_x = 0.0, worst_identity_y = 0.0;
  // Inequality Gamma(x)Gamma(y) <= (1/y) Gamma(x+y) for x >= 1, y > 0;
  // margin = log RHS - log LHS, negative beyond tolerance counts as violation.
  int inequality_violations = 0;
  double min_inequality_margin = 0.0;
  double worst_inequality_x = 0.0, worst_inequality_y = 0.0;
  int points_checked = 0;
};

// Check the product identity and the (1/y)-domination inequality on the grid
// {x_i} x {y_j}.  Requires x >= 1 for the inequality part (points with x < 1
// are still used for the identity).  Tolerance on the log margin absorbs the
// rounding at exact-equality boundaries such as x = 1.
GammaBetaCheckReport check_gamma_beta_lemmas(const std::vector<double>& xs,
                                             const std::vector<double>& ys,
                                             double margin_tol = 5e-13);

struct BinomialGammaSample {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  double p = 1.0, q = 1.0;
};

struct BinomialGammaCheckReport {
  // Smallest constant M such that
  //   C(x1+y1,x1)^{7/6} C(x2+y2,x2)^{7/6} Gamma(mu x1 + lambda x2 + p)
  //     * Gamma(mu y1 + lambda y2 + q)
  //   <= M * Gamma(mu(x1+y1) + lambda(x2+y2) + p + q) * B(p,q)^{1/3}
  // over the sample set (empirical fit; the estimate asserts existence, not a
  // closed-form value).
  double fitted_m = 0.0;
  BinomialGammaSample worst;
  int samples_checked = 0;
  std::vector<double> ratios; // per-sample LHS / (RHS-core), same order as input
};

// Empirical constant fit for the two-block binomial/Gamma domination bound.
// Requires mu >= 8 and lambda >= 8 (the regime the estimate is stated in).
BinomialGammaCheckReport check_binomial_gamma_lemma(const std::vector<BinomialGammaSample>& samples,
                                                    const GevreyIndices& idx);

// Default sample grid: all 0 <= x1,y1,x2,y2 <= max_xy with p,q in the given
// list (deterministic order).
std::vector<BinomialGammaSample> binomial_gamma_sample_grid(int max_xy,
                                                            const std::vector<double>& pq_values);

} // namespace qbnf
