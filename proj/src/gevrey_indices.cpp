#include "qbnf/gevrey_indices.hpp"

#include <cmath>
#include <string>

#include "qbnf/errors.hpp"

namespace qbnf {

GevreyIndices::GevreyIndices(double sigma, double mu, double lambda, double rho, double rho_bar)
    : sigma_(sigma), mu_(mu), lambda_(lambda), rho_(rho), rho_bar_(rho_bar) {
  if (!(sigma > 1.0)) throw ShapeError("gevrey indices: sigma must be > 1");
  if (!(rho >= sigma)) throw ShapeError("gevrey indices: rho must be >= sigma");
  if (!(mu >= rho + 1.0)) throw ShapeError("gevrey indices: mu must be >= rho + 1");
  if (!(lambda >= rho + 1.0)) throw ShapeError("gevrey indices: lambda must be >= rho + 1");
  double expected = lambda * mu + sigma;
  if (std::abs(rho_bar - expected) > 1e-12 * (1.0 + std::abs(expected)))
    throw ShapeError("gevrey indices: rho_bar must equal lambda * mu + sigma (expected " +
                     std::to_string(expected) + ")");
}

GevreyIndices GevreyIndices::make(double sigma, double mu, double lambda, double rho) {
  return GevreyIndices(sigma, mu, lambda, rho, lambda * mu + sigma);
}

} // namespace qbnf
