#pragma once

// Mode-wise solution of the homological equation (1/i) L_omega u = f on the
// torus: u_k = f_k / <omega, k> for k != 0, with the k = 0 part projected out
// and returned separately.  The frequency enters either as a constant vector
// or as jet components in I - I0; in the jet case the division is the exact
// reciprocal-series product in the Taylor quotient ring.

#include <complex>
#include <vector>

#include "qbnf/approximation.hpp"
#include "qbnf/jet.hpp"
#include "qbnf/symbol.hpp"

namespace qbnf {

class OmegaField {
public:
  static OmegaField constant(std::vector<double> omega);
  // Component jets about the base action (e.g. the gradient of a Hamiltonian
  // jet); the base value is each component's constant term.
  static OmegaField from_jets(std::vector<Jet> components);

  int dim() const { return static_cast<int>(base_.size()); }
  bool is_constant() const { return jets_.empty(); }
  // <omega(I0), k>
  std::complex<double> divisor_at_base(const std::vector<int>& k) const;
  // <omega(.), k> as a jet on the given layout (constant case embeds the
  // scalar divisor).
  Jet divisor_jet(const std::vector<int>& k, const std::shared_ptr<const JetLayout>& layout) const;
  const std::vector<std::complex<double>>& base_values() const { return base_; }

private:
  std::vector<std::complex<double>> base_;
  std::vector<Jet> jets_;
};

struct HomologicalSolution {
  TorusSymbol u;             // zero-mean solution slice
  Jet removed_mean;          // the projected k = 0 jet of f
  double worst_divisor = 0.0;
  std::vector<int> worst_k;
  double residual_sup = 0.0; // sup of (1/i) L_omega u - f on the default grid
  // |<omega(I0), k>| / (l1 mass of the non-constant divisor part), minimized
  // over active modes: a crude radius within which the action-dependent
  // divisor stays away from zero.  +inf when omega is constant.
  double validity_radius = 0.0;
};

struct ResidualGrid {
  std::vector<std::vector<double>> angles;
  std::vector<std::vector<double>> action_offsets; // x = I - I0 probes
  static ResidualGrid defaults(int dim);
};

// Solve on a single slice (h_order = 0 symbol).  Active modes with
// |<omega(I0), k>| < kappa / Delta(|k|_1) raise SmallDivisorError naming k;
// an exactly vanishing divisor raises ResonanceError.
HomologicalSolution solve_homological(const TorusSymbol& f, const OmegaField& omega,
                                      const ApproximationFunction& delta, double kappa);

// Sup over the grid of |(1/i) L_omega u - f| evaluated as a function on
// T^n x {I0 + x}.
double residual_sup(const TorusSymbol& u, const TorusSymbol& f, const OmegaField& omega,
                    const ResidualGrid& grid);

struct DecayFit {
  double sigma_hat = 0.0;
  double c_hat = 0.0;      // decay rate in log max|f_k| ~ const - c m^{1/sigma}
  double intercept = 0.0;
  double r2 = 0.0;
  int shells_used = 0;
  bool constrained = false; // sigma_hat pinned to the reference instead of fitted
};

// Fit shell maxima log max_{|k|_1 = m} |coeff| against const - c m^{1/sigma}
// over shells m >= 2 (the m <= 1 shells carry the constant/linear terms and
// would bias the fit).  With constrain_sigma the exponent is pinned to
// sigma_ref and only (const, c) are fitted.  FitError below 4 usable shells.
DecayFit fit_decay(const TorusSymbol& f, double sigma_ref, bool constrain_sigma = false);

} // namespace qbnf
