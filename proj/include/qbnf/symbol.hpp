#pragma once

// Truncated semiclassical symbols on T^n x R^n: finite h-expansions whose
// orders are Fourier sums (|k|_1 <= K) of Taylor jets in I - I0 (total degree
// <= M), frozen at a parameter value t.  The composition realizes the
// asymptotic product
//   (p # q)_j = sum_{r+s+|gamma|=j} (1/gamma!) d_I^gamma p_r . D_phi^gamma q_s
// with D_phi = -i d/dphi acting on the right factor (mode k picks up k^gamma).

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qbnf/jet.hpp"
#include "qbnf/multi_index.hpp"

namespace qbnf {

enum class AngleDerivative {
  plain,    // d/dphi: mode k scales by (i k)^gamma
  weighted, // D = -i d/dphi: mode k scales by k^gamma
};

struct SymbolShape {
  int dim = 1;
  int h_order = 0;        // stored orders 0..h_order
  int fourier_radius = 0; // |k|_1 <= fourier_radius
  int taylor_degree = 0;  // |gamma| <= taylor_degree
  std::vector<double> base_action;
  double t_value = 0.0;
};

struct SymbolNorm {
  std::vector<double> per_order; // l1 coefficient mass of each h-order
  double total = 0.0;
};

struct CompositionOptions {
  // -1 selects max of the operands.
  int h_order = -1;
  int fourier_radius = -1;
  int taylor_degree = -1;
};

struct CompositionDiagnostics {
  double fourier_clipped = 0.0; // mass dropped because |k|_1 exceeded the radius
  double taylor_clipped = 0.0;  // quotient-ring mass dropped above the Taylor degree
};

using ModeMap = std::map<std::vector<int>, Jet>;

class TorusSymbol {
public:
  explicit TorusSymbol(SymbolShape shape); // zero symbol
  static TorusSymbol constant_one(int dim, int fourier_radius, int taylor_degree,
                                  std::vector<double> base_action, double t_value);

  const SymbolShape& shape() const { return shape_; }
  int dim() const { return shape_.dim; }
  int h_order() const { return shape_.h_order; }
  int fourier_radius() const { return shape_.fourier_radius; }
  int taylor_degree() const { return shape_.taylor_degree; }
  const std::vector<double>& base_action() const { return shape_.base_action; }
  double t_value() const { return shape_.t_value; }
  const std::shared_ptr<const JetLayout>& layout() const { return layout_; }

  const ModeMap& order(int j) const;
  // Entry accessors; set_coeff enforces the truncation box.
  std::complex<double> coeff(int j, const std::vector<int>& mode, const MultiIndex& gamma) const;
  void set_coeff(int j, const std::vector<int>& mode, const MultiIndex& gamma,
                 std::complex<double> v);
  void set_mode_jet(int j, const std::vector<int>& mode, Jet jet);
  void add_mode_jet(int j, const std::vector<int>& mode, const Jet& jet);

  TorusSymbol operator+(const TorusSymbol& other) const;
  TorusSymbol operator-(const TorusSymbol& other) const;
  TorusSymbol scale(std::complex<double> s) const;

  // Projection onto the angle average (keeps only k = 0).
  TorusSymbol angle_average() const;
  // Exact action-derivative d_I^gamma applied to every jet.
  TorusSymbol derivative_action(const MultiIndex& gamma) const;
  // Angle derivative in either convention.
  TorusSymbol derivative_angle(const MultiIndex& gamma, AngleDerivative conv) const;

  std::complex<double> evaluate(const std::vector<double>& phi, const std::vector<double>& I,
                                double h) const;
  SymbolNorm norms() const;
  double total_norm() const;
  // Max |coeff(j,-k,gamma) - conj(coeff(j,k,gamma))|; 0 exactly for symbols of
  // real-valued functions.
  double reality_deviation() const;

  // Single order extracted as an h_order = 0 symbol (slice), and the inverse.
  TorusSymbol order_slice(int j) const;
  void assign_order(int j, const TorusSymbol& slice);

  // Copy with new truncations; dropped mass accumulated into *clipped.
  TorusSymbol retruncate(int h_order, int fourier_radius, int taylor_degree,
                         double* clipped = nullptr) const;

  // Deterministic JSON text, nonzero coefficients only, round-trip exact for
  // binary64.
  std::string serialize() const;
  static TorusSymbol deserialize(const std::string& text);

  void prune_zeros();

private:
  SymbolShape shape_;
  std::shared_ptr<const JetLayout> layout_;
  std::vector<ModeMap> orders_;

  friend TorusSymbol compose(const TorusSymbol&, const TorusSymbol&, const CompositionOptions&,
                             CompositionDiagnostics*);
};

// Same torus, base action and parameter value (ShapeError otherwise).
void require_same_frame(const TorusSymbol& a, const TorusSymbol& b);

// Asymptotic product with truncation policy; clipping diagnostics accumulate
// into *diag when given.  Each retained order is exact apart from clipping.
TorusSymbol compose(const TorusSymbol& p, const TorusSymbol& q,
                    const CompositionOptions& opts = {}, CompositionDiagnostics* diag = nullptr);

} // namespace qbnf
