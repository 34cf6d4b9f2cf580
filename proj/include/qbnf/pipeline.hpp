#pragma once

// Batch front door: run the full analysis described by a ProblemConfig
// (validity -> nonresonance -> recursion -> verification -> fits ->
// truncation, per deformation value t) and collect everything into a single
// deterministic report document.  Hard errors (resonance, divisor violation,
// solver failure) are captured as report entries, not exceptions; only a
// structurally invalid config throws.

#include <string>

#include <nlohmann/json.hpp>

#include "qbnf/config.hpp"

namespace qbnf {

struct PipelineOptions {
  bool check_only = false;  // validity + nonresonance stages only
  bool full_coeffs = false; // embed full coefficient tables per t
  bool timings = false;     // include wall-clock timings (breaks byte determinism)
  double tolerance = 1e-10; // residual threshold entering the success verdict
};

class RunReport {
public:
  explicit RunReport(nlohmann::json doc) : doc_(std::move(doc)) {}

  const nlohmann::json& doc() const { return doc_; }
  // Canonical text: sorted keys, two-space indent, round-trip-exact numbers.
  std::string to_json() const { return doc_.dump(2); }

  bool success() const;
  double max_residual() const;

  static RunReport from_json(const std::string& text); // ConfigError on malformed input
  static RunReport load_file(const std::string& path);
  void write_file(const std::string& path) const;

private:
  nlohmann::json doc_;
};

// Execute the pipeline.  Throws ConfigError when the config violates its
// constraints; everything downstream lands in the report (report.errors
// carries {t, stage, detail} entries and flips success to false).
RunReport run_pipeline(const ProblemConfig& cfg, const PipelineOptions& opts = {});

// Plot-ready two-column text for one of the named series: "decay" (shell
// order vs log max |coefficient| of the top conjugator order), "growth"
// (h-order vs log conjugator norm), "divisors" (shell order vs shell-min
// |<k,omega>| Delta), "residuals" (h-order vs conjugacy residual norm).
// Blocks are separated per t value.  SelectionError if the series is unknown
// or absent from the report.
std::string emit_plot_data(const RunReport& report, const std::string& which);
void emit_plot_file(const RunReport& report, const std::string& which, const std::string& path);

} // namespace qbnf
