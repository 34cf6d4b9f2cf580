#pragma once

// Small-divisor bookkeeping: shell enumeration of the integer lattice,
// divisor scans |<k, omega>| * Delta(|k|_1) against the admissibility
// threshold kappa, grid screening of action space, and a finite-difference
// probe of derivative growth of reciprocal divisors.

#include <cstdint>
#include <map>
#include <vector>

#include "qbnf/approximation.hpp"
#include "qbnf/frequency.hpp"
#include "qbnf/multi_index.hpp"

namespace qbnf {

// Number of integer vectors with |k|_1 = m in dimension n (exact, closed
// form); SizeError if it does not fit in uint64.
std::uint64_t shell_cardinality(int n, int m);

// All k in Z^n with |k|_1 = m, deterministic order (first coordinate
// descending, then recursively).  SizeError if the shell exceeds `cap`.
std::vector<std::vector<int>> enumerate_shell(int n, int m, std::uint64_t cap = 50'000'000);

struct DivisorReport {
  int radius = 0;                          // scanned |k|_1 <= radius
  double kappa_max = 0.0;                  // min over 0 < |k|_1 <= K of |<k,omega>| Delta(|k|_1)
  std::vector<int> worst_k;                // attaining mode (canonical sign)
  std::map<int, double> kappa_max_per_shell; // m -> min over |k|_1 = m
  double tau_fit = 0.0;                    // max_{|k|>=2} log(1/|<k,omega>|)/log|k|_1
  // Condition (i) with a given kappa holds up to the scanned radius iff
  // kappa <= kappa_max.
  bool holds_for(double kappa) const { return kappa <= kappa_max; }
};

// Scan all shells 1..K.  Only the canonical half-lattice (first nonzero
// component positive) is visited since the divisor modulus is even in k.
// Exact resonance <k, omega> == 0 raises ResonanceError naming k.
DivisorReport scan_divisors(const std::vector<double>& omega, const ApproximationFunction& delta,
                            int K);

struct NonresonantGrid {
  double t = 0.0;
  double kappa = 0.0;
  int radius = 0;
  std::vector<std::vector<double>> actions;
  std::vector<bool> flags;        // condition (i) verdict per action (resonant -> false)
  std::vector<double> kappa_max;  // per-action scan minimum (0 on exact resonance)
};

// Screen a list of actions: each gets the scan verdict at its local
// frequency; exact resonances mark the point excluded instead of aborting.
NonresonantGrid mark_nonresonant_grid(const FrequencySpec& freq, const ApproximationFunction& delta,
                                      double kappa, int K,
                                      const std::vector<std::vector<double>>& actions, double t);

struct DerivativeProbeRow {
  MultiIndex alpha;          // action multi-order
  int dt_order = 0;          // t-order
  double fd_value = 0.0;     // Richardson-extrapolated central difference
  double envelope = 0.0;     // C0^{|a|+d+1} a! d! max_j (|a|+d-j)!^rho |k|^j Delta^{j+1}(|k|)
  double ratio = 0.0;        // |fd_value| / envelope
  double richardson_rel_err = 0.0;
  bool step_warning = false; // step-halving disagreement above tolerance
};

struct DerivativeProbeReport {
  std::vector<int> k;
  double step = 0.0;
  std::vector<DerivativeProbeRow> rows;
};

// Finite-difference probe of g(I, t) = 1 / <omega(I; t), k> at the base
// action: mixed derivatives with |alpha| + dt_order <= max_total (<= 3) are
// compared against the factorial-envelope with constants (C0, rho).  Central
// differences with one Richardson step; the halving disagreement feeds a
// per-row warning instead of failing.
DerivativeProbeReport divisor_derivative_probe(const FrequencySpec& freq,
                                               const ApproximationFunction& delta,
                                               const std::vector<int>& k, int max_total, double t,
                                               double c0, double rho, double step = 0.0);

} // namespace qbnf
