#include "qbnf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qbnf/errors.hpp"
#include "qbnf/gevrey_indices.hpp"

namespace qbnf {

using nlohmann::json;

namespace {

int l1(const std::vector<int>& k) {
  int s = 0;
  for (int v : k) s += std::abs(v);
  return s;
}

std::pair<int, int> line_of_byte(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

TPoly parse_tpoly(const json& v, const std::string& path) {
  if (v.is_number()) return TPoly{v.get<double>()};
  if (v.is_array()) {
    TPoly p;
    for (const auto& c : v) {
      if (!c.is_number()) throw ConfigError(path + ": t-polynomial entries must be numbers");
      p.push_back(c.get<double>());
    }
    if (p.empty()) throw ConfigError(path + ": t-polynomial must be nonempty");
    return p;
  }
  throw ConfigError(path + ": expected a number or coefficient array");
}

std::vector<std::complex<double>> parse_complex_tpoly(const json& v, const std::string& path) {
  auto one = [&](const json& c) -> std::complex<double> {
    if (c.is_number()) return {c.get<double>(), 0.0};
    if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number())
      return {c[0].get<double>(), c[1].get<double>()};
    throw ConfigError(path + ": complex coefficients are [re, im] pairs");
  };
  std::vector<std::complex<double>> out;
  if (v.is_array() && !v.empty() && v[0].is_array()) {
    for (const auto& c : v) out.push_back(one(c));
    return out;
  }
  out.push_back(one(v));
  return out;
}

DeltaConfig parse_delta(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  DeltaConfig d;
  d.kind = j.value("kind", std::string{});
  if (d.kind == "polynomial") {
    if (!j.contains("exponent")) throw ConfigError(path + ".exponent: required for polynomial");
    d.exponent = j.at("exponent").get<double>();
  } else if (d.kind == "sub_exponential") {
    if (!j.contains("a")) throw ConfigError(path + ".a: required for sub_exponential");
    d.a = j.at("a").get<double>();
  } else if (d.kind == "log_tempered") {
    if (!j.contains("gamma_exp")) throw ConfigError(path + ".gamma_exp: required for log_tempered");
    d.gamma_exp = j.at("gamma_exp").get<double>();
  } else if (d.kind == "product_with_power") {
    if (!j.contains("power") || !j.contains("inner"))
      throw ConfigError(path + ": product_with_power needs power and inner");
    d.power = j.at("power").get<double>();
    d.inner = std::make_shared<DeltaConfig>(parse_delta(j.at("inner"), path + ".inner"));
  } else {
    throw ConfigError(path + ".kind: unknown approximation-function kind '" + d.kind + "'");
  }
  return d;
}

json delta_to_json(const DeltaConfig& d) {
  json j;
  j["kind"] = d.kind;
  if (d.kind == "polynomial") j["exponent"] = d.exponent;
  if (d.kind == "sub_exponential") j["a"] = d.a;
  if (d.kind == "log_tempered") j["gamma_exp"] = d.gamma_exp;
  if (d.kind == "product_with_power") {
    j["power"] = d.power;
    j["inner"] = d.inner ? delta_to_json(*d.inner) : json{};
  }
  return j;
}

void validate_delta(const DeltaConfig& d, double sigma, const std::string& path,
                    std::vector<ConstraintViolation>& out) {
  if (d.kind == "polynomial") {
    if (!(d.exponent >= 1.0))
      out.push_back({path + ".exponent", "polynomial exponent must be >= 1"});
  } else if (d.kind == "sub_exponential") {
    if (!(d.a > 0.0)) out.push_back({path + ".a", "sub_exponential requires a > 0"});
    if (d.a > 0.0 && !(d.a < 1.0 / sigma))
      out.push_back({path + ".a", "sub_exponential requires a < 1/sigma (growth condition); a = " +
                                      std::to_string(d.a) + ", 1/sigma = " +
                                      std::to_string(1.0 / sigma)});
  } else if (d.kind == "log_tempered") {
    if (!(d.gamma_exp > 1.0))
      out.push_back({path + ".gamma_exp", "log_tempered requires exponent > 1"});
  } else if (d.kind == "product_with_power") {
    if (!(d.power >= 1.0)) out.push_back({path + ".power", "product power must be >= 1"});
    if (d.inner)
      validate_delta(*d.inner, sigma, path + ".inner", out);
    else
      out.push_back({path + ".inner", "product_with_power needs an inner function"});
  } else {
    out.push_back({path + ".kind", "unknown kind '" + d.kind + "'"});
  }
}

} // namespace

ProblemConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_of_byte(text, e.byte);
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  try {
    ProblemConfig cfg;
    cfg.schema_version = j.value("schema_version", 1);
    cfg.dimension = j.at("dimension").get<int>();

    const json& g = j.at("gevrey");
    cfg.gevrey.sigma = g.at("sigma").get<double>();
    cfg.gevrey.mu = g.at("mu").get<double>();
    cfg.gevrey.lambda = g.at("lambda").get<double>();
    cfg.gevrey.rho = g.at("rho").get<double>();
    cfg.gevrey.rho_bar =
        g.contains("rho_bar") ? g.at("rho_bar").get<double>()
                              : cfg.gevrey.lambda * cfg.gevrey.mu + cfg.gevrey.sigma;

    cfg.delta = parse_delta(j.at("delta"), "delta");
    cfg.kappa = j.at("kappa").get<double>();

    const json& f = j.at("frequency");
    cfg.frequency.form = f.value("form", std::string{});
    if (cfg.frequency.form == "constant") {
      if (!f.contains("omega")) throw ConfigError("frequency.omega: required for constant form");
      int i = 0;
      for (const auto& comp : f.at("omega"))
        cfg.frequency.omega.push_back(
            parse_tpoly(comp, "frequency.omega[" + std::to_string(i++) + "]"));
    } else if (cfg.frequency.form == "polynomial") {
      if (!f.contains("components"))
        throw ConfigError("frequency.components: required for polynomial form");
      int ci = 0;
      for (const auto& comp : f.at("components")) {
        std::vector<FrequencyTermConfig> terms;
        int ti = 0;
        for (const auto& term : comp) {
          std::string tp = "frequency.components[" + std::to_string(ci) + "][" +
                           std::to_string(ti++) + "]";
          FrequencyTermConfig tc;
          tc.exponents = term.at("exponents").get<std::vector<int>>();
          tc.t_poly = parse_tpoly(term.at("t_poly"), tp + ".t_poly");
          terms.push_back(std::move(tc));
        }
        cfg.frequency.components.push_back(std::move(terms));
        ++ci;
      }
    } else {
      throw ConfigError("frequency.form: expected 'constant' or 'polynomial', got '" +
                        cfg.frequency.form + "'");
    }

    cfg.base_action = j.at("base_action").get<std::vector<double>>();

    const json& tr = j.at("truncations");
    cfg.h_order = tr.at("h_order").get<int>();
    cfg.fourier_radius = tr.at("fourier_radius").get<int>();
    cfg.taylor_degree = tr.at("taylor_degree").get<int>();

    cfg.t_values = j.at("t_values").get<std::vector<double>>();

    if (j.contains("symbol_terms")) {
      int si = 0;
      for (const auto& term : j.at("symbol_terms")) {
        std::string tp = "symbol_terms[" + std::to_string(si++) + "]";
        SymbolTermConfig tc;
        tc.j = term.at("j").get<int>();
        tc.mode = term.at("mode").get<std::vector<int>>();
        tc.taylor = term.at("taylor").get<std::vector<int>>();
        if (term.contains("t_poly"))
          tc.t_poly = parse_complex_tpoly(term.at("t_poly"), tp + ".t_poly");
        else if (term.contains("coeff"))
          tc.t_poly = parse_complex_tpoly(term.at("coeff"), tp + ".coeff");
        else
          throw ConfigError(tp + ": needs coeff or t_poly");
        cfg.symbol_terms.push_back(std::move(tc));
      }
    }

    if (j.contains("run_flags")) {
      const json& rf = j.at("run_flags");
      cfg.run_flags.validity = rf.value("validity", true);
      cfg.run_flags.nonresonance = rf.value("nonresonance", true);
      cfg.run_flags.recursion = rf.value("recursion", true);
      cfg.run_flags.verify = rf.value("verify", true);
      cfg.run_flags.decay_fit = rf.value("decay_fit", true);
      cfg.run_flags.growth_fit = rf.value("growth_fit", true);
      cfg.run_flags.optimal_truncation = rf.value("optimal_truncation", false);
    }
    cfg.eta = j.value("eta", 1.0);
    if (j.contains("h_values")) cfg.h_values = j.at("h_values").get<std::vector<double>>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config structure error: ") + e.what());
  }
}

ProblemConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string write_config(const ProblemConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["dimension"] = cfg.dimension;
  j["gevrey"] = {{"sigma", cfg.gevrey.sigma},
                 {"mu", cfg.gevrey.mu},
                 {"lambda", cfg.gevrey.lambda},
                 {"rho", cfg.gevrey.rho},
                 {"rho_bar", cfg.gevrey.rho_bar}};
  j["delta"] = delta_to_json(cfg.delta);
  j["kappa"] = cfg.kappa;
  json f;
  f["form"] = cfg.frequency.form;
  if (cfg.frequency.form == "constant") {
    json omega = json::array();
    for (const auto& p : cfg.frequency.omega) omega.push_back(p);
    f["omega"] = std::move(omega);
  } else {
    json comps = json::array();
    for (const auto& comp : cfg.frequency.components) {
      json terms = json::array();
      for (const auto& term : comp)
        terms.push_back({{"exponents", term.exponents}, {"t_poly", term.t_poly}});
      comps.push_back(std::move(terms));
    }
    f["components"] = std::move(comps);
  }
  j["frequency"] = std::move(f);
  j["base_action"] = cfg.base_action;
  j["truncations"] = {{"h_order", cfg.h_order},
                      {"fourier_radius", cfg.fourier_radius},
                      {"taylor_degree", cfg.taylor_degree}};
  j["t_values"] = cfg.t_values;
  json terms = json::array();
  for (const auto& term : cfg.symbol_terms) {
    json tp = json::array();
    for (const auto& c : term.t_poly) tp.push_back(json::array({c.real(), c.imag()}));
    terms.push_back(
        {{"j", term.j}, {"mode", term.mode}, {"taylor", term.taylor}, {"t_poly", std::move(tp)}});
  }
  j["symbol_terms"] = std::move(terms);
  j["run_flags"] = {{"validity", cfg.run_flags.validity},
                    {"nonresonance", cfg.run_flags.nonresonance},
                    {"recursion", cfg.run_flags.recursion},
                    {"verify", cfg.run_flags.verify},
                    {"decay_fit", cfg.run_flags.decay_fit},
                    {"growth_fit", cfg.run_flags.growth_fit},
                    {"optimal_truncation", cfg.run_flags.optimal_truncation}};
  j["eta"] = cfg.eta;
  j["h_values"] = cfg.h_values;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

std::vector<ConstraintViolation> validate_config(const ProblemConfig& cfg) {
  std::vector<ConstraintViolation> out;
  const int n = cfg.dimension;
  if (n < 1) out.push_back({"dimension", "must be >= 1"});

  try {
    GevreyIndices idx(cfg.gevrey.sigma, cfg.gevrey.mu, cfg.gevrey.lambda, cfg.gevrey.rho,
                      cfg.gevrey.rho_bar);
    (void)idx;
  } catch (const Error& e) {
    out.push_back({"gevrey", e.what()});
  }

  if (cfg.gevrey.sigma > 1.0)
    validate_delta(cfg.delta, cfg.gevrey.sigma, "delta", out);
  else
    out.push_back({"delta", "cannot validate against sigma <= 1"});

  if (!(cfg.kappa > 0.0)) out.push_back({"kappa", "must be > 0"});

  if (cfg.frequency.form == "constant") {
    if (static_cast<int>(cfg.frequency.omega.size()) != n)
      out.push_back({"frequency.omega", "needs one entry per dimension"});
  } else if (cfg.frequency.form == "polynomial") {
    if (static_cast<int>(cfg.frequency.components.size()) != n)
      out.push_back({"frequency.components", "needs one component per dimension"});
    for (size_t ci = 0; ci < cfg.frequency.components.size(); ++ci)
      for (size_t ti = 0; ti < cfg.frequency.components[ci].size(); ++ti) {
        const auto& term = cfg.frequency.components[ci][ti];
        if (static_cast<int>(term.exponents.size()) != n)
          out.push_back({"frequency.components[" + std::to_string(ci) + "][" +
                             std::to_string(ti) + "].exponents",
                         "length must equal dimension"});
        for (int e : term.exponents)
          if (e < 0)
            out.push_back({"frequency.components[" + std::to_string(ci) + "][" +
                               std::to_string(ti) + "].exponents",
                           "must be non-negative"});
      }
  } else {
    out.push_back({"frequency.form", "expected 'constant' or 'polynomial'"});
  }

  if (static_cast<int>(cfg.base_action.size()) != n)
    out.push_back({"base_action", "length must equal dimension"});

  if (cfg.h_order < 0) out.push_back({"truncations.h_order", "must be >= 0"});
  if (cfg.fourier_radius < 1) out.push_back({"truncations.fourier_radius", "must be >= 1"});
  if (cfg.taylor_degree < 0) out.push_back({"truncations.taylor_degree", "must be >= 0"});
  if (cfg.run_flags.recursion && cfg.h_order < 2)
    out.push_back({"truncations.h_order", "recursion needs h_order >= 2"});

  if (cfg.t_values.empty()) out.push_back({"t_values", "must be nonempty"});

  for (size_t si = 0; si < cfg.symbol_terms.size(); ++si) {
    const auto& term = cfg.symbol_terms[si];
    std::string tp = "symbol_terms[" + std::to_string(si) + "]";
    if (term.j < 0 || term.j > cfg.h_order)
      out.push_back({tp + ".j", "outside 0..h_order"});
    if (static_cast<int>(term.mode.size()) != n)
      out.push_back({tp + ".mode", "length must equal dimension"});
    else if (l1(term.mode) > cfg.fourier_radius)
      out.push_back({tp + ".mode", "|k|_1 exceeds fourier_radius"});
    if (static_cast<int>(term.taylor.size()) != n)
      out.push_back({tp + ".taylor", "length must equal dimension"});
    else {
      int tot = 0;
      bool neg = false;
      for (int g : term.taylor) {
        tot += g;
        neg = neg || g < 0;
      }
      if (neg) out.push_back({tp + ".taylor", "exponents must be non-negative"});
      if (tot > cfg.taylor_degree)
        out.push_back({tp + ".taylor", "|gamma| exceeds taylor_degree"});
    }
    if (term.t_poly.empty()) out.push_back({tp + ".t_poly", "must be nonempty"});
    if (term.j == 0 && static_cast<int>(term.mode.size()) == n && l1(term.mode) != 0)
      out.push_back({tp, "order-0 terms must be angle-independent (mode 0)"});
    if (term.j == 1) {
      for (const auto& c : term.t_poly)
        if (c != std::complex<double>(0.0)) {
          out.push_back({tp, "order-1 terms must vanish (standing assumption p_1 = 0)"});
          break;
        }
    }
  }

  if (!(cfg.eta > 0.0)) out.push_back({"eta", "must be > 0"});
  for (size_t i = 0; i < cfg.h_values.size(); ++i)
    if (!(cfg.h_values[i] > 0.0))
      out.push_back({"h_values[" + std::to_string(i) + "]", "must be > 0"});
  if (cfg.run_flags.optimal_truncation && cfg.h_values.empty())
    out.push_back({"h_values", "optimal_truncation needs at least one h"});
  return out;
}

void require_valid(const ProblemConfig& cfg) {
  auto violations = validate_config(cfg);
  if (violations.empty()) return;
  std::ostringstream os;
  os << "config constraint violations:";
  for (const auto& v : violations) os << "\n  " << v.path << ": " << v.message;
  throw ConfigError(os.str());
}

std::string config_hash(const ProblemConfig& cfg) {
  std::string text = write_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a:" << std::hex << h;
  return os.str();
}

ApproximationFunction build_delta(const DeltaConfig& delta, double sigma) {
  if (delta.kind == "polynomial") return ApproximationFunction::polynomial(delta.exponent, sigma);
  if (delta.kind == "sub_exponential")
    return ApproximationFunction::sub_exponential(delta.a, sigma);
  if (delta.kind == "log_tempered")
    return ApproximationFunction::log_tempered(delta.gamma_exp, sigma);
  if (delta.kind == "product_with_power") {
    if (!delta.inner) throw ConfigError("product_with_power needs an inner function");
    return ApproximationFunction::product_with_power(delta.power, build_delta(*delta.inner, sigma));
  }
  throw ConfigError("unknown approximation-function kind '" + delta.kind + "'");
}

FrequencySpec build_frequency(const ProblemConfig& cfg) {
  if (cfg.frequency.form == "constant")
    return FrequencySpec::constant_t(cfg.frequency.omega, cfg.base_action);
  std::vector<FrequencyComponent> comps;
  comps.reserve(cfg.frequency.components.size());
  for (const auto& comp : cfg.frequency.components) {
    FrequencyComponent fc;
    for (const auto& term : comp) fc.terms.push_back({MultiIndex(term.exponents), term.t_poly});
    comps.push_back(std::move(fc));
  }
  return FrequencySpec::polynomial(std::move(comps), cfg.base_action);
}

TorusSymbol build_symbol(const ProblemConfig& cfg, double t) {
  TorusSymbol p(SymbolShape{cfg.dimension, cfg.h_order, cfg.fourier_radius, cfg.taylor_degree,
                            cfg.base_action, t});
  for (const auto& term : cfg.symbol_terms) {
    // Horner evaluation of the complex t-polynomial.
    std::complex<double> c = 0.0;
    for (size_t i = term.t_poly.size(); i-- > 0;) c = c * t + term.t_poly[i];
    if (c == 0.0) continue;
    std::complex<double> prev = p.coeff(term.j, term.mode, MultiIndex(term.taylor));
    p.set_coeff(term.j, term.mode, MultiIndex(term.taylor), prev + c);
  }
  return p;
}

} // namespace qbnf
