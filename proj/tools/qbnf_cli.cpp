// Command-line front end over the C API: check/run execute the pipeline and
// persist reports, props runs the seeded property suite, plot extracts
// two-column data series from an existing report.

#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "qbnf/qbnf_c.h"

namespace {

int write_text(const std::string& out_path, const char* text) {
  if (out_path.empty()) {
    std::fputs(text, stdout);
    return 0;
  }
  std::FILE* f = std::fopen(out_path.c_str(), "wb");
  if (!f) {
    std::fprintf(stderr, "error: cannot open %s for writing\n", out_path.c_str());
    return 2;
  }
  std::fputs(text, f);
  std::fclose(f);
  return 0;
}

// Shared by check and run; `flags` selects the stage set.
int run_pipeline_command(const std::string& config_path, const std::string& out_path,
                         double tolerance, uint32_t flags) {
  qbnf_config* cfg = nullptr;
  if (qbnf_config_parse_file(config_path.c_str(), &cfg) != QBNF_OK) {
    std::fprintf(stderr, "error: %s\n", qbnf_last_error());
    return 2;
  }
  qbnf_report* report = nullptr;
  qbnf_status st = qbnf_run_pipeline(cfg, flags, tolerance, &report);
  qbnf_config_free(cfg);
  if (st != QBNF_OK) {
    std::fprintf(stderr, "error: %s\n", qbnf_last_error());
    return 2;
  }

  int rc = 0;
  char* text = nullptr;
  if (qbnf_report_to_json(report, &text) != QBNF_OK) {
    std::fprintf(stderr, "error: %s\n", qbnf_last_error());
    qbnf_report_free(report);
    return 2;
  }
  if (out_path.empty()) {
    std::fputs(text, stdout);
    std::fputs("\n", stdout);
  } else {
    if (qbnf_report_write_file(report, out_path.c_str()) != QBNF_OK) {
      std::fprintf(stderr, "error: %s\n", qbnf_last_error());
      rc = 2;
    }
  }

  // Human-readable verdict on stderr; stdout stays machine-clean.
  try {
    auto doc = nlohmann::json::parse(text);
    for (const auto& err : doc.at("errors")) {
      std::string at = err.at("t").is_null() ? std::string("config")
                                             : ("t = " + err.at("t").dump());
      std::fprintf(stderr, "error [%s, stage %s]: %s\n", at.c_str(),
                   err.at("stage").get<std::string>().c_str(),
                   err.at("detail").get<std::string>().c_str());
    }
    std::fprintf(stderr, "success: %s, max residual: %s\n",
                 qbnf_report_success(report) ? "yes" : "no",
                 doc.at("max_residual").dump().c_str());
  } catch (const std::exception&) {
    // Report text is produced by this tool's own library; parsing cannot
    // realistically fail, but a summary is not worth dying over.
  }

  if (rc == 0 && !qbnf_report_success(report)) rc = 1;
  qbnf_string_free(text);
  qbnf_report_free(report);
  return rc;
}

int props_command(std::uint64_t seed, const std::string& out_path) {
  char* text = nullptr;
  if (qbnf_run_properties(seed, &text) != QBNF_OK) {
    std::fprintf(stderr, "error: %s\n", qbnf_last_error());
    return 2;
  }
  int rc = 0;
  try {
    auto doc = nlohmann::json::parse(text);
    for (const auto& prop : doc.at("properties")) {
      bool ok = prop.at("failures").get<int>() == 0;
      if (ok)
        std::printf("PASS %s (%d trials)\n", prop.at("name").get<std::string>().c_str(),
                    prop.at("trials").get<int>());
      else
        std::printf("FAIL %s (%d/%d trials): %s\n",
                    prop.at("name").get<std::string>().c_str(), prop.at("failures").get<int>(),
                    prop.at("trials").get<int>(), prop.at("detail").get<std::string>().c_str());
    }
    if (!doc.at("success").get<bool>()) rc = 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: malformed property report: %s\n", e.what());
    rc = 2;
  }
  if (rc != 2 && !out_path.empty()) {
    int wrc = write_text(out_path, text);
    if (wrc != 0) rc = wrc;
  }
  qbnf_string_free(text);
  return rc;
}

int plot_command(const std::string& report_path, const std::string& series,
                 const std::string& out_path) {
  qbnf_report* report = nullptr;
  if (qbnf_report_load_file(report_path.c_str(), &report) != QBNF_OK) {
    std::fprintf(stderr, "error: %s\n", qbnf_last_error());
    return 2;
  }
  char* text = nullptr;
  qbnf_status st = qbnf_report_plot_series(report, series.c_str(), &text);
  qbnf_report_free(report);
  if (st != QBNF_OK) {
    std::fprintf(stderr, "error: %s\n", qbnf_last_error());
    return 2;
  }
  int rc = write_text(out_path, text);
  qbnf_string_free(text);
  return rc;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Birkhoff normal forms of semiclassical torus symbols"};
  app.set_version_flag("--version", qbnf_version());
  app.require_subcommand(1);

  std::string config_path, out_path, report_path, series;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
  bool full_coeffs = false, timings = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Problem configuration file")->required();
    cmd->add_option("--out", out_path, "Report output file (default: stdout)");
    cmd->add_option("--tolerance", tolerance, "Residual threshold for the success verdict")
        ->capture_default_str();
  };

  CLI::App* check = app.add_subcommand("check", "Validity and nonresonance stages only");
  add_common(check);

  CLI::App* run = app.add_subcommand("run", "Full pipeline: recursion, verification, fits");
  add_common(run);
  run->add_flag("--full-coeffs", full_coeffs, "Embed full coefficient tables in the report");
  run->add_flag("--timings", timings,
                "Include wall-clock timings (reports stop being byte-reproducible)");

  CLI::App* props = app.add_subcommand("props", "Seeded randomized property suite");
  props->add_option("--seed", seed, "Property suite seed")->capture_default_str();
  props->add_option("--out", out_path, "Also write the JSON property report here");

  CLI::App* plot = app.add_subcommand("plot", "Emit a two-column data series from a report");
  plot->add_option("--report", report_path, "Report file produced by run/check")->required();
  plot->add_option("--series", series, "One of: decay, growth, divisors, residuals")->required();
  plot->add_option("--out", out_path, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed())
    return run_pipeline_command(config_path, out_path, tolerance, QBNF_RUN_CHECK_ONLY);
  if (run->parsed()) {
    uint32_t flags = 0;
    if (full_coeffs) flags |= QBNF_RUN_FULL_COEFFS;
    if (timings) flags |= QBNF_RUN_TIMINGS;
    return run_pipeline_command(config_path, out_path, tolerance, flags);
  }
  if (props->parsed()) return props_command(seed, out_path);
  if (plot->parsed()) return plot_command(report_path, series, out_path);
  return 2;
}
