#pragma once

// Approximation functions Delta controlling admissible small-divisor decay:
// nondecreasing Delta: [0,inf) -> [1,inf) with Delta(0) = 1, whose growth is
// sub-Gevrey of exponent 1/sigma (log Delta(t) / t^{1/sigma} decreasing to 0)
// and whose weighted log-integral converges.  Also the weighted suprema
// Gamma_s(eta) = sup_t (1+t)^s Delta(t) e^{-eta t^{1/sigma}} and the
// threshold-based exponential bound on them.

#include <memory>
#include <string>
#include <vector>

namespace qbnf {

enum class DeltaKind {
  polynomial,         // (1+t)^n
  sub_exponential,    // exp(t^a / a)
  log_tempered,       // exp(t^{1/sigma} / (1 + log^g(1+t)))
  product_with_power, // (1+t)^s * inner(t)
};

class ApproximationFunction {
public:
  // (1+t)^n.  Exponent n >= 0; n = 0 is constructible as a degenerate probe
  // but fails the validity check (log Delta / t^{1/sigma} is not strictly
  // decaying from a positive peak).
  static ApproximationFunction polynomial(double n, double sigma);
  // exp(t^a / a), a > 0.  Satisfies the growth condition iff a < 1/sigma;
  // construction allows any a > 0 so the validity check can expose the
  // boundary, config validation rejects a >= 1/sigma up front.
  static ApproximationFunction sub_exponential(double a, double sigma);
  // exp(t^{1/sigma} / (1 + log^g(1+t))), g > 1.
  static ApproximationFunction log_tempered(double g, double sigma);
  // (1+t)^s * inner(t), s >= 1.
  static ApproximationFunction product_with_power(double s, ApproximationFunction inner);

  DeltaKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  // Kind parameter: polynomial exponent n, sub-exponential a, log-tempered g,
  // or the power s for product_with_power.
  double param() const { return param_; }
  const ApproximationFunction* inner() const { return inner_.get(); }
  std::string describe() const;

  // log Delta(t), t >= 0 (DomainError below 0).
  double log_evaluate(double t) const;
  double evaluate(double t) const;

private:
  ApproximationFunction(DeltaKind kind, double param, double sigma,
                        std::shared_ptr<const ApproximationFunction> inner);

  DeltaKind kind_;
  double param_;
  double sigma_;
  std::shared_ptr<const ApproximationFunction> inner_;
};

struct ValidityReport {
  // Delta itself must be non-decreasing; spot-checked on the same geometric
  // grid (the log_tempered family genuinely dips for larger exponents, e.g.
  // gamma = 2 at sigma = 2 decreases on roughly t in (1.1, 1100)).
  bool monotone_delta_ok = false;
  // Ratio r(t) = log Delta(t) / t^{1/sigma} sampled on a geometric grid:
  // after its peak the ratio must be non-increasing and strictly lower at the
  // far end (the decreasing-to-zero growth condition).
  bool monotone_ratio_ok = false;
  double ratio_peak = 0.0;
  double ratio_peak_t = 0.0;
  double ratio_at_end = 0.0;
  // Weighted log-integral int_varsigma^inf log Delta(t) / t^{1+1/sigma} dt:
  // quadrature over [varsigma, grid_max] plus an analytic tail bound.
  bool integral_converges = false;
  double integral_value = 0.0;
  double tail_bound = 0.0;
  double varsigma = 0.0;
  double grid_max = 0.0;
  int grid_points = 0;

  bool valid() const { return monotone_delta_ok && monotone_ratio_ok && integral_converges; }
};

// Verdict for the growth/integral conditions at exponent 1/sigma.  The grid
// window [varsigma, grid_max] is reported so the verdict is reproducible; the
// tail beyond grid_max is bounded analytically per kind.
ValidityReport check_validity(const ApproximationFunction& delta, double varsigma = 1e-2,
                              double grid_max = 1e8, int points_per_decade = 40);

struct GammaSupResult {
  double value = 0.0;     // Gamma_s(eta)
  double log_value = 0.0; // log of the same (safe at extreme magnitudes)
  double argmax_t = 0.0;
};

// Gamma_s(eta) = sup_{t >= 0} (1+t)^s Delta(t) e^{-eta t^{1/sigma}} via a
// geometric scan refined by golden-section search.  Throws NumericError if
// the objective is still climbing at the top of the scan range (divergent
// sup, e.g. for a Delta violating the growth condition).
GammaSupResult gamma_sup(const ApproximationFunction& delta, double s, double eta);

struct ThresholdBoundReport {
  double threshold_t = 0.0;    // smallest grid-resolved T with Q(T)/log(kappa_ratio) <= eta
  double bound = 0.0;          // e^{eta T^{1/sigma}} (+inf if it overflows; see log_bound)
  double log_bound = 0.0;      // eta T^{1/sigma}, exact even when bound overflows
  double gamma_value = 0.0;    // Gamma_s(eta) recomputed independently
  double slack = 0.0;          // gamma_value / bound
  bool holds = false;          // log Gamma <= log bound + log(1 + tol)
  // Split of the threshold integral at T: a-part from log Delta, c-part from
  // s log(1+t), so that (a_part + c_part * s) <= eta with equality at the
  // resolved threshold.  Exposed alongside the direct bound because the two
  // readings of the budget differ only in bookkeeping, not in the bound.
  double a_part = 0.0;
  double c_part = 0.0;
  double bound_from_split = 0.0; // e^{(a_part + c_part * s) T^{1/sigma}}
};

// Threshold bound: if (1/log kappa_ratio) int_T^inf [log Delta(t) +
// s log(1+t)] / t^{1+1/sigma} dt <= eta then Gamma_s(eta) <= e^{eta T^{1/sigma}}.
// Finds the smallest such T >= varsigma by bisection and verifies the bound
// against gamma_sup.  kappa_ratio must lie in (1, 2].
ThresholdBoundReport threshold_bound(const ApproximationFunction& delta, double s, double eta,
                                     double kappa_ratio = 2.0, double varsigma = 1e-2,
                                     double slack_tol = 1e-9);

} // namespace qbnf
