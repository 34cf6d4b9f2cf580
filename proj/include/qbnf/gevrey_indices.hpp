#pragma once

// The index bookkeeping for anisotropic Gevrey classes: regularity sigma,
// angle/action weights (mu, lambda), loss exponent rho, and the combined
// growth exponent rho_bar = lambda * mu + sigma that governs coefficient
// growth of the normal form.

namespace qbnf {

class GevreyIndices {
public:
  // Validates sigma > 1, rho >= sigma, mu >= rho + 1, lambda >= rho + 1 and
  // rho_bar == lambda * mu + sigma (ShapeError on violation).
  GevreyIndices(double sigma, double mu, double lambda, double rho, double rho_bar);

  // Convenience factory computing rho_bar = lambda * mu + sigma.
  static GevreyIndices make(double sigma, double mu, double lambda, double rho);

  double sigma() const { return sigma_; }
  double mu() const { return mu_; }
  double lambda() const { return lambda_; }
  double rho() const { return rho_; }
  double rho_bar() const { return rho_bar_; }

private:
  double sigma_, mu_, lambda_, rho_, rho_bar_;
};

} // namespace qbnf
