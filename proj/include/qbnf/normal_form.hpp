#pragma once

// Order-by-order construction of the quantum normal form: at each order
// j >= 2 the inhomogeneity
//   f_j = p_j^0 - p_j - F_j,   F_j = F_j1 - F_j2,
//   F_j1 = sum_{s=1}^{j-2} sum_{r + |gamma| = j - s} (1/gamma!) d_I^gamma p_r . D_phi^gamma a_s,
//   F_j2 = sum_{s=1}^{j-2} a_s p^0_{j-s},
// feeds the homological equation (1/i) L_omega a_{j-1} = f_j, with
// p_j^0 = angle-average of (p_j + F_j1) (the F_j2 part is mean-free).  The
// conjugator order a_{j-1} is normalized to zero angle average.

#include <map>
#include <optional>
#include <vector>

#include "qbnf/approximation.hpp"
#include "qbnf/frequency.hpp"
#include "qbnf/homological.hpp"
#include "qbnf/symbol.hpp"

namespace qbnf {

// F_j1 from slice lists: p_slices[r] is the order-r slice of the symbol,
// a_slices[s] the order-s conjugator slice (index 0 unused; a_0 = 1 enters
// the recursion elsewhere).  SequencingError if a prerequisite order is
// missing.  j = 2 gives the zero slice.
TorusSymbol f_j1(const std::vector<TorusSymbol>& p_slices,
                 const std::vector<TorusSymbol>& a_slices, int j,
                 const CompositionOptions& opts = {}, CompositionDiagnostics* diag = nullptr);

// F_j2 = sum_{s=1}^{j-2} a_s * p0_slices[j-s] (plain products; p0 slices are
// mode-0 so no angle derivatives enter).
TorusSymbol f_j2(const std::vector<TorusSymbol>& a_slices,
                 const std::vector<TorusSymbol>& p0_slices, int j,
                 const CompositionOptions& opts = {}, CompositionDiagnostics* diag = nullptr);

struct OrderDivisorStats {
  int order = 0;              // the h-order j whose solve produced these
  double worst_divisor = 0.0; // min |<omega(I0), k>| over active modes
  std::vector<int> worst_k;
  double amplification = 0.0; // Delta(|worst_k|_1) / kappa, the bound applied
};

struct GrowthFit {
  double rho_bar_hat = 0.0; // coefficient of (j log j - j)
  double log_d_hat = 0.0;   // coefficient of j
  double intercept = 0.0;
  double r2 = 0.0;
  int orders_used = 0;
};

struct NormalFormResult {
  TorusSymbol a;  // conjugator, orders 0..N-1 with a_0 = 1
  TorusSymbol p0; // normal form, orders 0..N, mode 0 only
  // Solver-side residual norm per order (exact zeros at j = 0, 1 by
  // construction; the independent re-composition lives in verify_conjugacy).
  std::map<int, double> residual_norms;
  std::vector<OrderDivisorStats> divisor_stats;
  std::optional<GrowthFit> growth_fit; // present when >= 4 nonzero orders
  double fourier_clipped = 0.0;
  double taylor_clipped = 0.0;
  double reality_deviation_p0 = 0.0; // diagnostic: conjugate-symmetry defect of p0
};

// Run the recursion for orders 2..N.  Preconditions: p_0 is mode-0 (the
// integrable part), p_1 vanishes identically, and the gradient of p_0 at the
// base action matches the supplied frequency within 1e-10 per component.
// The division uses the exact jet gradient of p_0, so the conjugacy identity
// closes in the Taylor quotient ring.  Per-mode admissibility is checked
// against kappa / Delta; failures raise SmallDivisorError naming (j, k).
NormalFormResult run_recursion(const TorusSymbol& p, const FrequencySpec& freq,
                               const ApproximationFunction& delta, double kappa, int N);

struct ConjugacyReport {
  std::map<int, double> residual_norms; // per-order l1 norm of p # a - a # p0
  double max_residual = 0.0;
  double p_total_norm = 0.0;
  CompositionDiagnostics diag; // fourier_clipped must be 0 for a clean check
  int widened_radius = 0;
};

// Independent verification: re-compose p # a - a # p0 with the Fourier
// radius widened to radius * max(N, 2) (Taylor degree kept at M, matching
// the quotient-ring semantics of the construction) and report per-order
// residual norms.
ConjugacyReport verify_conjugacy(const TorusSymbol& p, const NormalFormResult& result);

// Fit log ||a_j|| ~ intercept + (log d) j + rho_bar (j log j - j) over the
// nonzero conjugator orders (Stirling-linearized factorial growth).
// FitError below 4 usable orders.
GrowthFit fit_growth(const NormalFormResult& result);

struct TruncationEval {
  std::complex<double> value{0.0, 0.0};        // sum_{j<=J_used} p0_j(I) h^j
  int J_used = 0;                              // brute-force minimizer of |p0_j(I) h^j|
  double last_term = 0.0;                      // |p0_{J_used}(I) h^{J_used}|
  int J_theorem = 0;                           // min(floor(eta h^{-1/rho_bar}), N)
  std::complex<double> value_theorem{0.0, 0.0};
  std::vector<double> term_magnitudes;         // |p0_j(I) h^j| for j = 0..N
};

// Superasymptotic truncation of the normal-form series at action I: stop at
// the global minimum of |p0_j(I) h^j| (ties resolved to the smallest j); the
// exponent-based rule J = floor(eta h^{-1/rho_bar}) is evaluated alongside.
TruncationEval optimal_truncation_eval(const TorusSymbol& p0, const std::vector<double>& I,
                                       double t, double h, double eta, double rho_bar);

} // namespace qbnf
