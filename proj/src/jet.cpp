#include "qbnf/jet.hpp"

#include <cmath>
#include <mutex>

#include "qbnf/errors.hpp"

namespace qbnf {

JetLayout::JetLayout(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1) throw ShapeError("jet layout requires dimension >= 1");
  if (degree < 0) throw ShapeError("jet layout requires degree >= 0");
  monomials_ = multi_indices_up_to(dim, degree);
  for (int i = 0; i < static_cast<int>(monomials_.size()); ++i)
    index_[monomials_[static_cast<size_t>(i)]] = i;
}

int JetLayout::index_of(const MultiIndex& gamma) const {
  auto it = index_.find(gamma);
  return it == index_.end() ? -1 : it->second;
}

std::shared_ptr<const JetLayout> JetLayout::get(int dim, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto layout = std::make_shared<const JetLayout>(dim, degree);
  cache[key] = layout;
  return layout;
}

Jet::Jet(std::shared_ptr<const JetLayout> layout) : layout_(std::move(layout)) {
  c_.assign(static_cast<size_t>(layout_->size()), 0.0);
}

Jet Jet::constant(std::shared_ptr<const JetLayout> layout, std::complex<double> c) {
  Jet j(std::move(layout));
  j.c_[0] = c;
  return j;
}

std::complex<double> Jet::coeff(const MultiIndex& gamma) const {
  int i = layout_->index_of(gamma);
  return i < 0 ? std::complex<double>(0.0) : c_[static_cast<size_t>(i)];
}

void Jet::set_coeff(const MultiIndex& gamma, std::complex<double> v) {
  int i = layout_->index_of(gamma);
  if (i < 0) throw ShapeError("jet coefficient outside layout degree");
  c_[static_cast<size_t>(i)] = v;
}

namespace {

void check_same_layout(const Jet& a, const Jet& b) {
  if (a.layout()->dim() != b.layout()->dim() || a.layout()->degree() != b.layout()->degree())
    throw ShapeError("jet layout mismatch");
}

} // namespace

Jet& Jet::operator+=(const Jet& other) {
  check_same_layout(*this, other);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  check_same_layout(*this, other);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

Jet& Jet::operator*=(std::complex<double> s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet Jet::operator+(const Jet& other) const {
  Jet r(*this);
  r += other;
  return r;
}

Jet Jet::operator-(const Jet& other) const {
  Jet r(*this);
  r -= other;
  return r;
}

Jet Jet::operator*(std::complex<double> s) const {
  Jet r(*this);
  r *= s;
  return r;
}

Jet Jet::multiply(const Jet& other, double* clipped) const {
  check_same_layout(*this, other);
  Jet out(layout_);
  int sz = layout_->size();
  for (int i = 0; i < sz; ++i) {
    if (c_[static_cast<size_t>(i)] == 0.0) continue;
    const MultiIndex& mi = layout_->monomial(i);
    for (int j = 0; j < sz; ++j) {
      if (other.c_[static_cast<size_t>(j)] == 0.0) continue;
      const MultiIndex& mj = layout_->monomial(j);
      std::complex<double> prod = c_[static_cast<size_t>(i)] * other.c_[static_cast<size_t>(j)];
      if (mi.order() + mj.order() > layout_->degree()) {
        if (clipped) *clipped += std::abs(prod);
        continue;
      }
      int target = layout_->index_of(mi.plus(mj));
      out.c_[static_cast<size_t>(target)] += prod;
    }
  }
  return out;
}

Jet Jet::derivative(const MultiIndex& gamma) const {
  if (gamma.dim() != dim()) throw ShapeError("jet derivative dimension mismatch");
  Jet out(layout_);
  int sz = layout_->size();
  for (int i = 0; i < sz; ++i) {
    if (c_[static_cast<size_t>(i)] == 0.0) continue;
    const MultiIndex& beta = layout_->monomial(i);
    if (!gamma.leq(beta)) continue;
    double fall = 1.0;
    for (int d = 0; d < dim(); ++d)
      for (int r = 0; r < gamma[d]; ++r) fall *= static_cast<double>(beta[d] - r);
    int target = layout_->index_of(beta.minus(gamma));
    out.c_[static_cast<size_t>(target)] += c_[static_cast<size_t>(i)] * fall;
  }
  return out;
}

Jet Jet::reciprocal() const {
  std::complex<double> c0 = constant_term();
  if (c0 == 0.0) throw DomainError("jet reciprocal requires nonzero constant term");
  // Triangular inversion by total degree: with f = c0 + f_+, the inverse r
  // satisfies c0 r_d = -(f_+ r)_d for every degree level d >= 1.
  Jet r(layout_);
  r.c_[0] = 1.0 / c0;
  int M = layout_->degree();
  int sz = layout_->size();
  for (int d = 1; d <= M; ++d) {
    for (int i = 0; i < sz; ++i) {
      const MultiIndex& target = layout_->monomial(i);
      if (target.order() != d) continue;
      std::complex<double> acc = 0.0;
      // sum over f-monomials of order >= 1 below target
      for (int j = 0; j < sz; ++j) {
        const MultiIndex& mj = layout_->monomial(j);
        int oj = mj.order();
        if (oj < 1 || oj > d) continue;
        if (!mj.leq(target)) continue;
        std::complex<double> fj = c_[static_cast<size_t>(j)];
        if (fj == 0.0) continue;
        int rest = layout_->index_of(target.minus(mj));
        acc += fj * r.c_[static_cast<size_t>(rest)];
      }
      r.c_[static_cast<size_t>(i)] = -acc / c0;
    }
  }
  return r;
}

std::complex<double> Jet::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim()) throw ShapeError("jet evaluate dimension mismatch");
  std::complex<double> acc = 0.0;
  int sz = layout_->size();
  for (int i = 0; i < sz; ++i) {
    if (c_[static_cast<size_t>(i)] == 0.0) continue;
    const MultiIndex& m = layout_->monomial(i);
    double mono = 1.0;
    for (int d = 0; d < dim(); ++d)
      for (int r = 0; r < m[d]; ++r) mono *= x[static_cast<size_t>(d)];
    acc += c_[static_cast<size_t>(i)] * mono;
  }
  return acc;
}

double Jet::l1_norm() const {
  double s = 0.0;
  for (const auto& v : c_) s += std::abs(v);
  return s;
}

bool Jet::is_zero() const {
  for (const auto& v : c_)
    if (v != 0.0) return false;
  return true;
}

Jet Jet::relayout(const std::shared_ptr<const JetLayout>& target, double* clipped) const {
  if (target->dim() != dim()) throw ShapeError("jet relayout dimension mismatch");
  Jet out(target);
  int sz = layout_->size();
  for (int i = 0; i < sz; ++i) {
    if (c_[static_cast<size_t>(i)] == 0.0) continue;
    int j = target->index_of(layout_->monomial(i));
    if (j < 0) {
      if (clipped) *clipped += std::abs(c_[static_cast<size_t>(i)]);
      continue;
    }
    out.c_[static_cast<size_t>(j)] = c_[static_cast<size_t>(i)];
  }
  return out;
}

} // namespace qbnf
