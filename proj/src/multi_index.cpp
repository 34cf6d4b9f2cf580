#include "qbnf/multi_index.hpp"

#include <cmath>

#include "qbnf/errors.hpp"

namespace qbnf {

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_)
    if (v < 0) throw DomainError("multi-index entries must be non-negative");
}

MultiIndex MultiIndex::zeros(int dim) {
  if (dim < 1) throw DomainError("multi-index dimension must be >= 1");
  return MultiIndex(std::vector<int>(static_cast<size_t>(dim), 0));
}

int MultiIndex::order() const {
  int s = 0;
  for (int v : e_) s += v;
  return s;
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int v : e_) f *= factorial_real(v);
  return f;
}

bool MultiIndex::leq(const MultiIndex& other) const {
  if (dim() != other.dim()) throw ShapeError("multi-index dimension mismatch");
  for (size_t i = 0; i < e_.size(); ++i)
    if (e_[i] > other.e_[i]) return false;
  return true;
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
  if (dim() != other.dim()) throw ShapeError("multi-index dimension mismatch");
  std::vector<int> r(e_);
  for (size_t i = 0; i < r.size(); ++i) r[i] += other.e_[i];
  return MultiIndex(std::move(r));
}

MultiIndex MultiIndex::minus(const MultiIndex& other) const {
  if (!other.leq(*this)) throw DomainError("multi-index subtraction requires componentwise <=");
  std::vector<int> r(e_);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= other.e_[i];
  return MultiIndex(std::move(r));
}

std::uint64_t factorial_exact(int m) {
  if (m < 0) throw DomainError("factorial of negative integer");
  if (m > 20) throw SizeError("factorial_exact overflows uint64 beyond 20!");
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

double factorial_real(int m) {
  if (m < 0) throw DomainError("factorial of negative integer");
  if (m <= 20) return static_cast<double>(factorial_exact(m));
  return std::exp(std::lgamma(static_cast<double>(m) + 1.0));
}

double binomial_real(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (n <= 20) {
    return static_cast<double>(factorial_exact(n)) /
           (static_cast<double>(factorial_exact(k)) * static_cast<double>(factorial_exact(n - k)));
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

namespace {

void fill_orders(int dim, int d, std::vector<int>& scratch, int pos, int remaining,
                 std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    scratch[static_cast<size_t>(pos)] = remaining;
    out.emplace_back(scratch);
    return;
  }
  // Lexicographically decreasing first entry gives graded-lex within the level
  // once we enumerate largest-first.
  for (int v = remaining; v >= 0; --v) {
    scratch[static_cast<size_t>(pos)] = v;
    fill_orders(dim, d, scratch, pos + 1, remaining - v, out);
  }
}

} // namespace

std::vector<MultiIndex> multi_indices_of_order(int dim, int d) {
  if (dim < 1) throw DomainError("dimension must be >= 1");
  if (d < 0) return {};
  std::vector<MultiIndex> out;
  std::vector<int> scratch(static_cast<size_t>(dim), 0);
  fill_orders(dim, d, scratch, 0, d, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int d) {
  std::vector<MultiIndex> out;
  for (int level = 0; level <= d; ++level) {
    auto lv = multi_indices_of_order(dim, level);
    out.insert(out.end(), lv.begin(), lv.end());
  }
  return out;
}

} // namespace qbnf
