#pragma once

// Multi-indices gamma in N^n used for action-derivatives and Taylor monomials.

#include <cstdint>
#include <vector>

namespace qbnf {

class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zeros(int dim);

  int dim() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[static_cast<size_t>(i)]; }
  const std::vector<int>& entries() const { return e_; }

  // |gamma| = sum of entries.
  int order() const;

  // gamma! as a double; exact in integer arithmetic for |gamma| <= 20 per
  // component path, log-gamma based beyond.
  double factorial() const;

  // Componentwise partial order gamma <= beta.
  bool leq(const MultiIndex& other) const;

  MultiIndex plus(const MultiIndex& other) const;
  // Requires other.leq(*this).
  MultiIndex minus(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const { return e_ == other.e_; }
  bool operator!=(const MultiIndex& other) const { return e_ != other.e_; }
  // Lexicographic, for ordered containers.
  bool operator<(const MultiIndex& other) const { return e_ < other.e_; }

private:
  std::vector<int> e_;
};

// m! exactly (throws SizeError for m > 20 where uint64 would overflow).
std::uint64_t factorial_exact(int m);

// m! as a double for any m >= 0 (exact through 20!, log-gamma beyond).
double factorial_real(int m);

// binomial(n, k) as a double, exact for small arguments, log-gamma beyond.
double binomial_real(int n, int k);

// All multi-indices of total order exactly d in `dim` variables, graded-lex
// within the level (deterministic order).
std::vector<MultiIndex> multi_indices_of_order(int dim, int d);

// All multi-indices of total order <= d, ordered by (order, lex).
std::vector<MultiIndex> multi_indices_up_to(int dim, int d);

} // namespace qbnf
