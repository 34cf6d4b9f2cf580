#pragma once

// Truncated Taylor jets: elements of C[x_1..x_n] / m^{M+1}, the quotient by
// total degree > M.  Products clamp at degree M with the dropped mass
// reported, derivatives are exact, and jets with nonzero constant term are
// invertible in the quotient (used for action-dependent divisor division).

#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "qbnf/multi_index.hpp"

namespace qbnf {

class JetLayout {
public:
  JetLayout(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(monomials_.size()); }
  const MultiIndex& monomial(int i) const { return monomials_[static_cast<size_t>(i)]; }
  // Index of a monomial, or -1 if |gamma| > degree.
  int index_of(const MultiIndex& gamma) const;

  static std::shared_ptr<const JetLayout> get(int dim, int degree);

private:
  int dim_, degree_;
  std::vector<MultiIndex> monomials_; // ordered by (total order, lex)
  std::map<MultiIndex, int> index_;
};

class Jet {
public:
  Jet() = default;
  explicit Jet(std::shared_ptr<const JetLayout> layout);
  static Jet constant(std::shared_ptr<const JetLayout> layout, std::complex<double> c);

  const std::shared_ptr<const JetLayout>& layout() const { return layout_; }
  int dim() const { return layout_->dim(); }
  int degree() const { return layout_->degree(); }

  std::complex<double>& at(int i) { return c_[static_cast<size_t>(i)]; }
  const std::complex<double>& at(int i) const { return c_[static_cast<size_t>(i)]; }
  std::complex<double> coeff(const MultiIndex& gamma) const;
  void set_coeff(const MultiIndex& gamma, std::complex<double> v);

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(std::complex<double> s);
  Jet operator+(const Jet& other) const;
  Jet operator-(const Jet& other) const;
  Jet operator*(std::complex<double> s) const;

  // Quotient-ring product: contributions beyond the layout degree are dropped
  // and their absolute mass accumulated into *clipped (if given).
  Jet multiply(const Jet& other, double* clipped = nullptr) const;

  // Exact partial derivative d^gamma / dx^gamma.
  Jet derivative(const MultiIndex& gamma) const;

  // Multiplicative inverse in the quotient ring; DomainError if the constant
  // term vanishes.
  Jet reciprocal() const;

  std::complex<double> evaluate(const std::vector<double>& x) const;
  std::complex<double> constant_term() const { return c_.empty() ? 0.0 : c_[0]; }
  double l1_norm() const;
  bool is_zero() const;

  // Re-embed into another layout of the same dimension; degree growth pads
  // with zeros, shrink drops higher monomials (returns dropped mass via
  // *clipped if given).
  Jet relayout(const std::shared_ptr<const JetLayout>& target, double* clipped = nullptr) const;

private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<std::complex<double>> c_;
};

} // namespace qbnf
