#include "qbnf/frequency.hpp"

#include <cmath>

#include "qbnf/errors.hpp"

namespace qbnf {

double tpoly_eval(const TPoly& p, double t) {
  double acc = 0.0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
  return acc;
}

FrequencySpec::FrequencySpec(bool constant_form, std::vector<FrequencyComponent> components,
                             std::vector<double> base_action)
    : constant_form_(constant_form), components_(std::move(components)),
      base_action_(std::move(base_action)) {
  int n = dim();
  if (n < 1) throw ShapeError("frequency spec requires dimension >= 1");
  if (static_cast<int>(components_.size()) != n)
    throw ShapeError("frequency spec needs one component per action dimension");
  for (const auto& comp : components_)
    for (const auto& term : comp.terms)
      if (term.exponents.dim() != n)
        throw ShapeError("frequency term exponent dimension mismatch");
}

FrequencySpec FrequencySpec::constant(const std::vector<double>& omega,
                                      std::vector<double> base_action) {
  std::vector<TPoly> polys;
  polys.reserve(omega.size());
  for (double w : omega) polys.push_back(TPoly{w});
  return constant_t(std::move(polys), std::move(base_action));
}

FrequencySpec FrequencySpec::constant_t(std::vector<TPoly> omega, std::vector<double> base_action) {
  int n = static_cast<int>(base_action.size());
  if (static_cast<int>(omega.size()) != n)
    throw ShapeError("constant frequency needs one entry per action dimension");
  std::vector<FrequencyComponent> comps(omega.size());
  for (size_t i = 0; i < omega.size(); ++i)
    comps[i].terms.push_back({MultiIndex::zeros(n), std::move(omega[i])});
  return FrequencySpec(true, std::move(comps), std::move(base_action));
}

FrequencySpec FrequencySpec::polynomial(std::vector<FrequencyComponent> components,
                                        std::vector<double> base_action) {
  return FrequencySpec(false, std::move(components), std::move(base_action));
}

std::vector<double> FrequencySpec::omega_at(const std::vector<double>& I, double t) const {
  int n = dim();
  if (static_cast<int>(I.size()) != n) throw ShapeError("omega_at: action dimension mismatch");
  std::vector<double> x(I);
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] -= base_action_[static_cast<size_t>(i)];
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const auto& term : components_[static_cast<size_t>(i)].terms) {
      double mono = 1.0;
      for (int d = 0; d < n; ++d)
        for (int rep = 0; rep < term.exponents[d]; ++rep) mono *= x[static_cast<size_t>(d)];
      acc += tpoly_eval(term.coeff, t) * mono;
    }
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

} // namespace qbnf
