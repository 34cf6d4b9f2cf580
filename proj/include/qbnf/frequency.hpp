#pragma once

// Frequency maps omega(I; t): either a constant vector or a polynomial map in
// (I - I0), with each coefficient optionally a polynomial in the deformation
// parameter t.

#include <vector>

#include "qbnf/multi_index.hpp"

namespace qbnf {

// Real polynomial in t, ascending coefficients; empty means identically 0.
using TPoly = std::vector<double>;

double tpoly_eval(const TPoly& p, double t);

struct FrequencyTerm {
  MultiIndex exponents; // powers of (I - I0)
  TPoly coeff;
};

struct FrequencyComponent {
  std::vector<FrequencyTerm> terms;
};

class FrequencySpec {
public:
  static FrequencySpec constant(const std::vector<double>& omega, std::vector<double> base_action);
  // Constant-in-I with t-dependent components.
  static FrequencySpec constant_t(std::vector<TPoly> omega, std::vector<double> base_action);
  static FrequencySpec polynomial(std::vector<FrequencyComponent> components,
                                  std::vector<double> base_action);

  int dim() const { return static_cast<int>(base_action_.size()); }
  bool is_constant() const { return constant_form_; }
  const std::vector<double>& base_action() const { return base_action_; }
  const std::vector<FrequencyComponent>& components() const { return components_; }

  // omega(I; t) componentwise.
  std::vector<double> omega_at(const std::vector<double>& I, double t) const;
  std::vector<double> omega_at_base(double t) const { return omega_at(base_action_, t); }

private:
  FrequencySpec(bool constant_form, std::vector<FrequencyComponent> components,
                std::vector<double> base_action);

  bool constant_form_;
  std::vector<FrequencyComponent> components_;
  std::vector<double> base_action_;
};

} // namespace qbnf
