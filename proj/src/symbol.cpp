#include "qbnf/symbol.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qbnf/errors.hpp"

namespace qbnf {

namespace {

int l1(const std::vector<int>& k) {
  int s = 0;
  for (int v : k) s += std::abs(v);
  return s;
}

std::vector<int> negate(const std::vector<int>& k) {
  std::vector<int> r(k);
  for (int& v : r) v = -v;
  return r;
}

// Cross-layout quotient product of jets a, b into `out` (clipped mass beyond
// out's degree into *clipped).
Jet convolve_into(const Jet& a, const Jet& b, const std::shared_ptr<const JetLayout>& out,
                  double* clipped) {
  Jet r(out);
  int na = a.layout()->size(), nb = b.layout()->size();
  for (int i = 0; i < na; ++i) {
    if (a.at(i) == 0.0) continue;
    const MultiIndex& mi = a.layout()->monomial(i);
    for (int j = 0; j < nb; ++j) {
      if (b.at(j) == 0.0) continue;
      const MultiIndex& mj = b.layout()->monomial(j);
      std::complex<double> prod = a.at(i) * b.at(j);
      if (mi.order() + mj.order() > out->degree()) {
        if (clipped) *clipped += std::abs(prod);
        continue;
      }
      r.at(out->index_of(mi.plus(mj))) += prod;
    }
  }
  return r;
}

} // namespace

TorusSymbol::TorusSymbol(SymbolShape shape) : shape_(std::move(shape)) {
  if (shape_.dim < 1) throw ShapeError("symbol dimension must be >= 1");
  if (shape_.h_order < 0) throw ShapeError("symbol h_order must be >= 0");
  if (shape_.fourier_radius < 0) throw ShapeError("symbol fourier_radius must be >= 0");
  if (shape_.taylor_degree < 0) throw ShapeError("symbol taylor_degree must be >= 0");
  if (static_cast<int>(shape_.base_action.size()) != shape_.dim)
    throw ShapeError("symbol base action dimension mismatch");
  layout_ = JetLayout::get(shape_.dim, shape_.taylor_degree);
  orders_.assign(static_cast<size_t>(shape_.h_order) + 1, ModeMap{});
}

TorusSymbol TorusSymbol::constant_one(int dim, int fourier_radius, int taylor_degree,
                                      std::vector<double> base_action, double t_value) {
  TorusSymbol s(SymbolShape{dim, 0, fourier_radius, taylor_degree, std::move(base_action),
                            t_value});
  s.set_coeff(0, std::vector<int>(static_cast<size_t>(dim), 0), MultiIndex::zeros(dim), 1.0);
  return s;
}

const ModeMap& TorusSymbol::order(int j) const {
  if (j < 0 || j > shape_.h_order) throw ShapeError("symbol order out of range");
  return orders_[static_cast<size_t>(j)];
}

std::complex<double> TorusSymbol::coeff(int j, const std::vector<int>& mode,
                                        const MultiIndex& gamma) const {
  if (j < 0 || j > shape_.h_order) return 0.0;
  auto it = orders_[static_cast<size_t>(j)].find(mode);
  if (it == orders_[static_cast<size_t>(j)].end()) return 0.0;
  return it->second.coeff(gamma);
}

void TorusSymbol::set_coeff(int j, const std::vector<int>& mode, const MultiIndex& gamma,
                            std::complex<double> v) {
  if (j < 0 || j > shape_.h_order) throw ShapeError("set_coeff: h-order outside truncation");
  if (static_cast<int>(mode.size()) != shape_.dim)
    throw ShapeError("set_coeff: mode dimension mismatch");
  if (l1(mode) > shape_.fourier_radius)
    throw ShapeError("set_coeff: mode outside Fourier radius");
  if (gamma.order() > shape_.taylor_degree)
    throw ShapeError("set_coeff: monomial outside Taylor degree");
  auto& mm = orders_[static_cast<size_t>(j)];
  auto it = mm.find(mode);
  if (it == mm.end()) it = mm.emplace(mode, Jet(layout_)).first;
  it->second.set_coeff(gamma, v);
}

void TorusSymbol::set_mode_jet(int j, const std::vector<int>& mode, Jet jet) {
  if (j < 0 || j > shape_.h_order) throw ShapeError("set_mode_jet: h-order outside truncation");
  if (l1(mode) > shape_.fourier_radius)
    throw ShapeError("set_mode_jet: mode outside Fourier radius");
  if (jet.layout()->dim() != shape_.dim || jet.layout()->degree() != shape_.taylor_degree)
    throw ShapeError("set_mode_jet: jet layout mismatch");
  orders_[static_cast<size_t>(j)][mode] = std::move(jet);
}

void TorusSymbol::add_mode_jet(int j, const std::vector<int>& mode, const Jet& jet) {
  if (j < 0 || j > shape_.h_order) throw ShapeError("add_mode_jet: h-order outside truncation");
  if (l1(mode) > shape_.fourier_radius)
    throw ShapeError("add_mode_jet: mode outside Fourier radius");
  auto& mm = orders_[static_cast<size_t>(j)];
  auto it = mm.find(mode);
  if (it == mm.end())
    mm.emplace(mode, jet.relayout(layout_));
  else
    it->second += jet.relayout(layout_);
}

void require_same_frame(const TorusSymbol& a, const TorusSymbol& b) {
  if (a.dim() != b.dim()) throw ShapeError("symbol dimension mismatch");
  if (a.base_action() != b.base_action()) throw ShapeError("symbol base action mismatch");
  if (a.t_value() != b.t_value()) throw ShapeError("symbol parameter value mismatch");
}

TorusSymbol TorusSymbol::operator+(const TorusSymbol& other) const {
  require_same_frame(*this, other);
  SymbolShape sh = shape_;
  sh.h_order = std::max(shape_.h_order, other.shape_.h_order);
  sh.fourier_radius = std::max(shape_.fourier_radius, other.shape_.fourier_radius);
  sh.taylor_degree = std::max(shape_.taylor_degree, other.shape_.taylor_degree);
  TorusSymbol out(sh);
  for (int j = 0; j <= shape_.h_order; ++j)
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(j)])
      out.add_mode_jet(j, mode, jet);
  for (int j = 0; j <= other.shape_.h_order; ++j)
    for (const auto& [mode, jet] : other.orders_[static_cast<size_t>(j)])
      out.add_mode_jet(j, mode, jet);
  out.prune_zeros();
  return out;
}

TorusSymbol TorusSymbol::operator-(const TorusSymbol& other) const {
  return *this + other.scale(-1.0);
}

TorusSymbol TorusSymbol::scale(std::complex<double> s) const {
  TorusSymbol out(shape_);
  for (int j = 0; j <= shape_.h_order; ++j)
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(j)])
      out.orders_[static_cast<size_t>(j)].emplace(mode, jet * s);
  out.prune_zeros();
  return out;
}

TorusSymbol TorusSymbol::angle_average() const {
  TorusSymbol out(shape_);
  std::vector<int> zero(static_cast<size_t>(shape_.dim), 0);
  for (int j = 0; j <= shape_.h_order; ++j) {
    auto it = orders_[static_cast<size_t>(j)].find(zero);
    if (it != orders_[static_cast<size_t>(j)].end() && !it->second.is_zero())
      out.orders_[static_cast<size_t>(j)].emplace(zero, it->second);
  }
  return out;
}

TorusSymbol TorusSymbol::derivative_action(const MultiIndex& gamma) const {
  if (gamma.dim() != shape_.dim) throw ShapeError("derivative_action dimension mismatch");
  TorusSymbol out(shape_);
  for (int j = 0; j <= shape_.h_order; ++j)
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(j)]) {
      Jet d = jet.derivative(gamma);
      if (!d.is_zero()) out.orders_[static_cast<size_t>(j)].emplace(mode, std::move(d));
    }
  return out;
}

TorusSymbol TorusSymbol::derivative_angle(const MultiIndex& gamma, AngleDerivative conv) const {
  if (gamma.dim() != shape_.dim) throw ShapeError("derivative_angle dimension mismatch");
  TorusSymbol out(shape_);
  for (int j = 0; j <= shape_.h_order; ++j)
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(j)]) {
      double kpow = 1.0;
      for (int d = 0; d < shape_.dim; ++d)
        for (int r = 0; r < gamma[d]; ++r) kpow *= static_cast<double>(mode[static_cast<size_t>(d)]);
      if (kpow == 0.0 && gamma.order() > 0) continue;
      std::complex<double> factor = kpow;
      if (conv == AngleDerivative::plain) {
        // (i k)^gamma = i^{|gamma|} k^gamma
        static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        factor *= ipow[gamma.order() % 4];
      }
      Jet scaled = jet * factor;
      if (!scaled.is_zero()) out.orders_[static_cast<size_t>(j)].emplace(mode, std::move(scaled));
    }
  return out;
}

std::complex<double> TorusSymbol::evaluate(const std::vector<double>& phi,
                                           const std::vector<double>& I, double h) const {
  if (static_cast<int>(phi.size()) != shape_.dim || static_cast<int>(I.size()) != shape_.dim)
    throw ShapeError("evaluate: argument dimension mismatch");
  std::vector<double> x(I);
  for (int d = 0; d < shape_.dim; ++d) x[static_cast<size_t>(d)] -= shape_.base_action[static_cast<size_t>(d)];
  std::complex<double> acc = 0.0;
  double hj = 1.0;
  for (int j = 0; j <= shape_.h_order; ++j) {
    std::complex<double> level = 0.0;
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(j)]) {
      double phase = 0.0;
      for (int d = 0; d < shape_.dim; ++d)
        phase += static_cast<double>(mode[static_cast<size_t>(d)]) * phi[static_cast<size_t>(d)];
      level += jet.evaluate(x) * std::exp(std::complex<double>(0.0, phase));
    }
    acc += level * hj;
    hj *= h;
  }
  return acc;
}

SymbolNorm TorusSymbol::norms() const {
  SymbolNorm n;
  n.per_order.resize(static_cast<size_t>(shape_.h_order) + 1, 0.0);
  for (int j = 0; j <= shape_.h_order; ++j) {
    double s = 0.0;
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(j)]) s += jet.l1_norm();
    n.per_order[static_cast<size_t>(j)] = s;
    n.total += s;
  }
  return n;
}

double TorusSymbol::total_norm() const { return norms().total; }

double TorusSymbol::reality_deviation() const {
  double worst = 0.0;
  for (int j = 0; j <= shape_.h_order; ++j) {
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(j)]) {
      std::vector<int> neg = negate(mode);
      const ModeMap& mm = orders_[static_cast<size_t>(j)];
      auto it = mm.find(neg);
      for (int i = 0; i < layout_->size(); ++i) {
        std::complex<double> a = jet.at(i);
        std::complex<double> b = (it == mm.end()) ? 0.0 : it->second.at(i);
        worst = std::max(worst, std::abs(a - std::conj(b)));
      }
    }
  }
  return worst;
}

TorusSymbol TorusSymbol::order_slice(int j) const {
  if (j < 0 || j > shape_.h_order) throw ShapeError("order_slice out of range");
  SymbolShape sh = shape_;
  sh.h_order = 0;
  TorusSymbol out(sh);
  out.orders_[0] = orders_[static_cast<size_t>(j)];
  return out;
}

void TorusSymbol::assign_order(int j, const TorusSymbol& slice) {
  require_same_frame(*this, slice);
  if (j < 0 || j > shape_.h_order) throw ShapeError("assign_order out of range");
  if (slice.h_order() != 0) throw ShapeError("assign_order expects a single-order slice");
  if (slice.fourier_radius() > shape_.fourier_radius ||
      slice.taylor_degree() > shape_.taylor_degree)
    throw ShapeError("assign_order: slice truncation exceeds target");
  ModeMap mm;
  for (const auto& [mode, jet] : slice.orders_[0])
    if (!jet.is_zero()) mm.emplace(mode, jet.relayout(layout_));
  orders_[static_cast<size_t>(j)] = std::move(mm);
}

TorusSymbol TorusSymbol::retruncate(int h_order, int fourier_radius, int taylor_degree,
                                    double* clipped) const {
  SymbolShape sh = shape_;
  sh.h_order = h_order;
  sh.fourier_radius = fourier_radius;
  sh.taylor_degree = taylor_degree;
  TorusSymbol out(sh);
  for (int j = 0; j <= shape_.h_order; ++j) {
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(j)]) {
      if (j > h_order || l1(mode) > fourier_radius) {
        if (clipped) *clipped += jet.l1_norm();
        continue;
      }
      Jet re = jet.relayout(out.layout_, clipped);
      if (!re.is_zero()) out.orders_[static_cast<size_t>(j)].emplace(mode, std::move(re));
    }
  }
  return out;
}

void TorusSymbol::prune_zeros() {
  for (auto& mm : orders_)
    for (auto it = mm.begin(); it != mm.end();)
      it = it->second.is_zero() ? mm.erase(it) : std::next(it);
}

std::string TorusSymbol::serialize() const {
  nlohmann::json j;
  j["dim"] = shape_.dim;
  j["h_order"] = shape_.h_order;
  j["fourier_radius"] = shape_.fourier_radius;
  j["taylor_degree"] = shape_.taylor_degree;
  j["base_action"] = shape_.base_action;
  j["t_value"] = shape_.t_value;
  nlohmann::json entries = nlohmann::json::array();
  for (int jo = 0; jo <= shape_.h_order; ++jo) {
    for (const auto& [mode, jet] : orders_[static_cast<size_t>(jo)]) {
      for (int i = 0; i < layout_->size(); ++i) {
        std::complex<double> v = jet.at(i);
        if (v == 0.0) continue;
        // Canonicalize signed zeros so numerically equal symbols serialize
        // identically.
        double re = v.real() == 0.0 ? 0.0 : v.real();
        double im = v.imag() == 0.0 ? 0.0 : v.imag();
        entries.push_back(
            nlohmann::json::array({jo, mode, layout_->monomial(i).entries(), re, im}));
      }
    }
  }
  j["entries"] = std::move(entries);
  return j.dump(2);
}

TorusSymbol TorusSymbol::deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("symbol parse error: ") + e.what());
  }
  try {
    SymbolShape sh;
    sh.dim = j.at("dim").get<int>();
    sh.h_order = j.at("h_order").get<int>();
    sh.fourier_radius = j.at("fourier_radius").get<int>();
    sh.taylor_degree = j.at("taylor_degree").get<int>();
    sh.base_action = j.at("base_action").get<std::vector<double>>();
    sh.t_value = j.at("t_value").get<double>();
    TorusSymbol out(sh);
    for (const auto& e : j.at("entries")) {
      int jo = e.at(0).get<int>();
      std::vector<int> mode = e.at(1).get<std::vector<int>>();
      MultiIndex gamma(e.at(2).get<std::vector<int>>());
      out.set_coeff(jo, mode, gamma,
                    std::complex<double>(e.at(3).get<double>(), e.at(4).get<double>()));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("symbol deserialize error: ") + e.what());
  }
}

TorusSymbol compose(const TorusSymbol& p, const TorusSymbol& q, const CompositionOptions& opts,
                    CompositionDiagnostics* diag) {
  require_same_frame(p, q);
  SymbolShape sh;
  sh.dim = p.dim();
  sh.base_action = p.base_action();
  sh.t_value = p.t_value();
  sh.h_order = opts.h_order >= 0 ? opts.h_order : std::max(p.h_order(), q.h_order());
  sh.fourier_radius =
      opts.fourier_radius >= 0 ? opts.fourier_radius : std::max(p.fourier_radius(), q.fourier_radius());
  sh.taylor_degree =
      opts.taylor_degree >= 0 ? opts.taylor_degree : std::max(p.taylor_degree(), q.taylor_degree());
  TorusSymbol out(sh);

  for (int j = 0; j <= sh.h_order; ++j) {
    for (int r = 0; r <= std::min(j, p.h_order()); ++r) {
      for (int s = 0; s <= std::min(j - r, q.h_order()); ++s) {
        int d = j - r - s;
        if (d > p.taylor_degree()) continue; // d_I^gamma annihilates every jet of p
        for (const auto& gamma : multi_indices_of_order(sh.dim, d)) {
          double inv_fact = 1.0 / gamma.factorial();
          for (const auto& [mode_p, jet_p] : p.order(r)) {
            Jet dp = jet_p.derivative(gamma);
            if (dp.is_zero()) continue;
            for (const auto& [mode_q, jet_q] : q.order(s)) {
              double kpow = 1.0;
              for (int dd = 0; dd < sh.dim; ++dd)
                for (int rep = 0; rep < gamma[dd]; ++rep)
                  kpow *= static_cast<double>(mode_q[static_cast<size_t>(dd)]);
              if (kpow == 0.0 && d > 0) continue;
              double scale = kpow * inv_fact;

              std::vector<int> mode(mode_p);
              for (size_t ii = 0; ii < mode.size(); ++ii) mode[ii] += mode_q[ii];

              double tclip = 0.0;
              Jet prod = convolve_into(dp, jet_q, out.layout(), &tclip);
              if (l1(mode) > sh.fourier_radius) {
                if (diag) diag->fourier_clipped += (prod.l1_norm() + tclip) * std::abs(scale);
                continue;
              }
              if (diag) diag->taylor_clipped += tclip * std::abs(scale);
              prod *= scale;
              if (!prod.is_zero()) out.add_mode_jet(j, mode, prod);
            }
          }
        }
      }
    }
  }
  out.prune_zeros();
  return out;
}

} // namespace qbnf
