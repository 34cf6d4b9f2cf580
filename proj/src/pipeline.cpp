#include "qbnf/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>

#include "qbnf/errors.hpp"
#include "qbnf/homological.hpp"
#include "qbnf/nonresonance.hpp"
#include "qbnf/normal_form.hpp"
#include "qbnf/version.hpp"

namespace qbnf {

using nlohmann::json;

namespace {

json complex_pair(std::complex<double> c) { return json::array({c.real(), c.imag()}); }

json divisor_report_json(const DivisorReport& r) {
  json shells = json::array();
  for (const auto& [m, v] : r.kappa_max_per_shell) shells.push_back(json::array({m, v}));
  return json{{"radius", r.radius},
              {"kappa_max", r.kappa_max},
              {"worst_k", r.worst_k},
              {"per_shell", std::move(shells)},
              {"tau_fit", r.tau_fit}};
}

json growth_fit_json(const GrowthFit& g) {
  return json{{"rho_bar_hat", g.rho_bar_hat},
              {"log_d_hat", g.log_d_hat},
              {"intercept", g.intercept},
              {"r2", g.r2},
              {"orders_used", g.orders_used}};
}

json decay_fit_json(const DecayFit& d) {
  return json{{"sigma_hat", d.sigma_hat}, {"c_hat", d.c_hat},
              {"intercept", d.intercept}, {"r2", d.r2},
              {"shells_used", d.shells_used}, {"constrained", d.constrained}};
}

// Shell maxima of a single-order slice: m -> max_{|k|_1 = m, gamma} |coeff|.
std::map<int, double> shell_maxima(const TorusSymbol& slice) {
  std::map<int, double> out;
  for (const auto& [mode, jet] : slice.order(0)) {
    int m = 0;
    for (int v : mode) m += std::abs(v);
    double mx = 0.0;
    for (int i = 0; i < jet.layout()->size(); ++i) mx = std::max(mx, std::abs(jet.at(i)));
    if (mx > 0.0) {
      auto it = out.find(m);
      if (it == out.end() || it->second < mx) out[m] = mx;
    }
  }
  return out;
}

struct TOutcome {
  json run;
  std::vector<json> errors;
  double max_residual = 0.0;
};

class StageClock {
public:
  explicit StageClock(bool enabled) : enabled_(enabled) {}
  void start() { t0_ = std::chrono::steady_clock::now(); }
  void stop(json& timings, const std::string& stage) {
    if (!enabled_) return;
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    timings[stage] = dt;
  }

private:
  bool enabled_;
  std::chrono::steady_clock::time_point t0_;
};

TOutcome run_one_t(const ProblemConfig& cfg, const PipelineOptions& opts, double t) {
  TOutcome out;
  out.run = json{{"t", t}};
  json timings = json::object();
  StageClock clock(opts.timings);
  auto fail = [&](const std::string& stage, const std::string& detail) {
    out.errors.push_back(json{{"t", t}, {"stage", stage}, {"detail", detail}});
  };

  FrequencySpec freq = build_frequency(cfg);
  ApproximationFunction delta = build_delta(cfg.delta, cfg.gevrey.sigma);
  TorusSymbol p = build_symbol(cfg, t);

  bool gate_open = true; // closed by a hard error in an upstream stage

  if (cfg.run_flags.nonresonance) {
    clock.start();
    try {
      DivisorReport rep = scan_divisors(freq.omega_at_base(t), delta, cfg.fourier_radius);
      out.run["divisors"] = divisor_report_json(rep);
      out.run["divisors"]["holds"] = rep.holds_for(cfg.kappa);
      if (!rep.holds_for(cfg.kappa)) {
        std::ostringstream os;
        os << "small-divisor condition fails up to radius " << rep.radius << ": kappa_max = "
           << rep.kappa_max << " < kappa = " << cfg.kappa << " at k = (";
        for (size_t i = 0; i < rep.worst_k.size(); ++i)
          os << (i ? "," : "") << rep.worst_k[i];
        os << ")";
        fail("nonresonance", os.str());
        gate_open = false;
      }
    } catch (const Error& e) {
      fail("nonresonance", e.what());
      gate_open = false;
    }
    clock.stop(timings, "nonresonance");
  }

  if (opts.check_only || !cfg.run_flags.recursion || !gate_open) {
    if (opts.timings) out.run["timings"] = std::move(timings);
    return out;
  }

  clock.start();
  std::optional<NormalFormResult> result;
  try {
    result = run_recursion(p, freq, delta, cfg.kappa, cfg.h_order);

    json rec;
    rec["orders"] = cfg.h_order;
    json resid = json::array();
    for (const auto& [j, v] : result->residual_norms) {
      resid.push_back(json::array({j, v}));
      out.max_residual = std::max(out.max_residual, v);
    }
    rec["residual_norms"] = std::move(resid);
    json stats = json::array();
    for (const auto& s : result->divisor_stats)
      stats.push_back(json{{"order", s.order},
                           {"worst_divisor", s.worst_divisor},
                           {"worst_k", s.worst_k},
                           {"amplification", s.amplification}});
    rec["divisor_stats"] = std::move(stats);
    rec["fourier_clipped"] = result->fourier_clipped;
    rec["taylor_clipped"] = result->taylor_clipped;
    rec["reality_deviation_p0"] = result->reality_deviation_p0;
    rec["a_norms"] = result->a.norms().per_order;
    rec["p0_norms"] = result->p0.norms().per_order;
    json base_vals = json::array();
    for (int j = 0; j <= cfg.h_order; ++j) {
      std::complex<double> v = 0.0;
      auto& slice = result->p0.order(j);
      auto it = slice.find(std::vector<int>(cfg.dimension, 0));
      if (it != slice.end()) v = it->second.constant_term();
      base_vals.push_back(complex_pair(v));
    }
    rec["p0_at_base"] = std::move(base_vals);
    out.run["recursion"] = std::move(rec);
  } catch (const Error& e) {
    fail("recursion", e.what());
    gate_open = false;
  }
  clock.stop(timings, "recursion");

  if (result && cfg.run_flags.verify) {
    clock.start();
    try {
      ConjugacyReport rep = verify_conjugacy(p, *result);
      json ver;
      json resid = json::array();
      for (const auto& [j, v] : rep.residual_norms) resid.push_back(json::array({j, v}));
      ver["residual_norms"] = std::move(resid);
      ver["max_residual"] = rep.max_residual;
      ver["p_total_norm"] = rep.p_total_norm;
      ver["widened_radius"] = rep.widened_radius;
      ver["fourier_clipped"] = rep.diag.fourier_clipped;
      ver["taylor_clipped"] = rep.diag.taylor_clipped;
      out.run["verify"] = std::move(ver);
      out.max_residual = std::max(out.max_residual, rep.max_residual);
    } catch (const Error& e) {
      fail("verify", e.what());
    }
    clock.stop(timings, "verify");
  }

  if (result && cfg.run_flags.decay_fit) {
    clock.start();
    // Fit the top nonzero conjugator order: the slice with the richest mode
    // content after j-1 convolutions.
    int top = -1;
    for (int j = cfg.h_order - 1; j >= 1; --j)
      if (result->a.norms().per_order[j] > 0.0) {
        top = j;
        break;
      }
    if (top >= 1) {
      TorusSymbol slice = result->a.order_slice(top);
      out.run["decay_order"] = top;
      json shells = json::array();
      for (const auto& [m, mx] : shell_maxima(slice))
        if (m >= 1) shells.push_back(json::array({m, std::log(mx)}));
      out.run["decay_shells"] = std::move(shells);
      try {
        out.run["decay_fit"] = decay_fit_json(fit_decay(slice, cfg.gevrey.sigma));
      } catch (const FitError& e) {
        out.run["decay_fit"] = nullptr;
        out.run["decay_fit_note"] = e.what();
      }
    }
    clock.stop(timings, "decay_fit");
  }

  if (result && cfg.run_flags.growth_fit) {
    clock.start();
    json points = json::array();
    auto norms = result->a.norms().per_order;
    for (int j = 1; j < static_cast<int>(norms.size()); ++j)
      if (norms[j] > 0.0) points.push_back(json::array({j, std::log(norms[j])}));
    out.run["growth_points"] = std::move(points);
    if (result->growth_fit)
      out.run["growth_fit"] = growth_fit_json(*result->growth_fit);
    else {
      out.run["growth_fit"] = nullptr;
      out.run["growth_fit_note"] = "fewer than 4 nonzero conjugator orders";
    }
    clock.stop(timings, "growth_fit");
  }

  if (result && cfg.run_flags.optimal_truncation) {
    clock.start();
    try {
      json evals = json::array();
      for (double h : cfg.h_values) {
        TruncationEval ev = optimal_truncation_eval(result->p0, cfg.base_action, t, h, cfg.eta,
                                                    cfg.gevrey.rho_bar);
        evals.push_back(json{{"h", h},
                             {"value", complex_pair(ev.value)},
                             {"J_used", ev.J_used},
                             {"last_term", ev.last_term},
                             {"J_theorem", ev.J_theorem},
                             {"value_theorem", complex_pair(ev.value_theorem)},
                             {"term_magnitudes", ev.term_magnitudes}});
      }
      out.run["truncation"] = std::move(evals);
    } catch (const Error& e) {
      fail("truncation", e.what());
    }
    clock.stop(timings, "truncation");
  }

  if (result && opts.full_coeffs) {
    out.run["coefficients"] =
        json{{"a", json::parse(result->a.serialize())}, {"p0", json::parse(result->p0.serialize())}};
  }

  if (opts.timings) out.run["timings"] = std::move(timings);
  return out;
}

} // namespace

bool RunReport::success() const { return doc_.value("success", false); }

double RunReport::max_residual() const { return doc_.value("max_residual", 0.0); }

RunReport RunReport::from_json(const std::string& text) {
  try {
    return RunReport(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("report parse error: ") + e.what());
  }
}

RunReport RunReport::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void RunReport::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open report file for writing: " + path);
  out << to_json() << "\n";
  if (!out) throw IoError("failed writing report file: " + path);
}

RunReport run_pipeline(const ProblemConfig& cfg, const PipelineOptions& opts) {
  require_valid(cfg);
  auto wall0 = std::chrono::steady_clock::now();

  json doc;
  doc["schema_version"] = report_schema_version;
  doc["tool_version"] = tool_version;
  doc["config"] = json::parse(write_config(cfg));
  doc["config_hash"] = config_hash(cfg);
  doc["options"] = json{{"check_only", opts.check_only},
                        {"full_coeffs", opts.full_coeffs},
                        {"tolerance", opts.tolerance}};

  std::vector<json> errors;

  if (cfg.run_flags.validity) {
    ApproximationFunction delta = build_delta(cfg.delta, cfg.gevrey.sigma);
    ValidityReport rep = check_validity(delta);
    doc["validity"] = json{{"valid", rep.valid()},
                           {"monotone_delta_ok", rep.monotone_delta_ok},
                           {"monotone_ratio_ok", rep.monotone_ratio_ok},
                           {"ratio_peak", rep.ratio_peak},
                           {"ratio_peak_t", rep.ratio_peak_t},
                           {"ratio_at_end", rep.ratio_at_end},
                           {"integral_converges", rep.integral_converges},
                           {"integral_value", rep.integral_value},
                           {"tail_bound", rep.tail_bound},
                           {"varsigma", rep.varsigma},
                           {"grid_max", rep.grid_max},
                           {"grid_points", rep.grid_points},
                           {"description", delta.describe()}};
    if (!rep.valid())
      errors.push_back(json{{"t", nullptr},
                            {"stage", "validity"},
                            {"detail", "approximation function fails the growth/integral check"}});
  } else {
    doc["validity"] = nullptr;
  }

  // Per-t runs execute in parallel; assembly below is single-threaded and
  // ordered by the t_values list.
  std::vector<TOutcome> outcomes(cfg.t_values.size());
  if (cfg.t_values.size() > 1) {
    std::vector<std::future<TOutcome>> futures;
    futures.reserve(cfg.t_values.size());
    for (double t : cfg.t_values)
      futures.push_back(
          std::async(std::launch::async, [&cfg, &opts, t] { return run_one_t(cfg, opts, t); }));
    for (size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < cfg.t_values.size(); ++i)
      outcomes[i] = run_one_t(cfg, opts, cfg.t_values[i]);
  }

  json runs = json::array();
  double max_residual = 0.0;
  for (auto& o : outcomes) {
    runs.push_back(std::move(o.run));
    for (auto& e : o.errors) errors.push_back(std::move(e));
    max_residual = std::max(max_residual, o.max_residual);
  }
  doc["runs"] = std::move(runs);
  doc["errors"] = errors;
  doc["max_residual"] = max_residual;
  doc["success"] = errors.empty() && max_residual <= opts.tolerance;
  if (opts.timings)
    doc["timings"] =
        json{{"total", std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
                           .count()}};
  return RunReport(std::move(doc));
}

namespace {

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Extract (x, y) rows for one series from one run entry; empty if absent.
std::vector<std::pair<double, double>> series_rows(const json& run, const std::string& which) {
  std::vector<std::pair<double, double>> rows;
  auto from_pairs = [&](const json& arr) {
    for (const auto& p : arr) rows.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  };
  if (which == "decay") {
    if (run.contains("decay_shells")) from_pairs(run.at("decay_shells"));
  } else if (which == "growth") {
    if (run.contains("growth_points")) from_pairs(run.at("growth_points"));
  } else if (which == "divisors") {
    if (run.contains("divisors")) from_pairs(run.at("divisors").at("per_shell"));
  } else if (which == "residuals") {
    if (run.contains("verify")) from_pairs(run.at("verify").at("residual_norms"));
  } else {
    throw SelectionError("unknown plot series '" + which +
                         "' (expected decay, growth, divisors or residuals)");
  }
  return rows;
}

} // namespace

std::string emit_plot_data(const RunReport& report, const std::string& which) {
  static const std::map<std::string, std::string> headers = {
      {"decay", "# decay: shell |k|_1 = m vs log max |coefficient| (top conjugator order)"},
      {"growth", "# growth: h-order j vs log l1-norm of conjugator order"},
      {"divisors", "# divisors: shell |k|_1 = m vs min |<k,omega>| * Delta(m)"},
      {"residuals", "# residuals: h-order j vs conjugacy residual l1-norm"},
  };
  auto hit = headers.find(which);
  if (hit == headers.end())
    throw SelectionError("unknown plot series '" + which +
                         "' (expected decay, growth, divisors or residuals)");
  if (!report.doc().contains("runs"))
    throw SelectionError("report carries no runs");

  std::ostringstream os;
  os << hit->second << "\n";
  bool any = false;
  for (const auto& run : report.doc().at("runs")) {
    auto rows = series_rows(run, which);
    if (rows.empty()) continue;
    any = true;
    os << "# t = " << num17(run.at("t").get<double>()) << "\n";
    for (const auto& [x, y] : rows) os << num17(x) << " " << num17(y) << "\n";
  }
  if (!any) throw SelectionError("series '" + which + "' absent from report");
  return os.str();
}

void emit_plot_file(const RunReport& report, const std::string& which, const std::string& path) {
  std::string text = emit_plot_data(report, which);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open plot file for writing: " + path);
  out << text;
  if (!out) throw IoError("failed writing plot file: " + path);
}

} // namespace qbnf
