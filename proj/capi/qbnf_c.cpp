#include "qbnf/qbnf_c.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "qbnf/config.hpp"
#include "qbnf/errors.hpp"
#include "qbnf/pipeline.hpp"
#include "qbnf/properties.hpp"
#include "qbnf/version.hpp"

struct qbnf_config {
  qbnf::ProblemConfig cfg;
};

struct qbnf_report {
  qbnf::RunReport report;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qbnf_status status_of(const qbnf::Error& e) {
  switch (e.code()) {
  case qbnf::ErrorCode::domain: return QBNF_ERR_DOMAIN;
  case qbnf::ErrorCode::shape: return QBNF_ERR_SHAPE;
  case qbnf::ErrorCode::config: return QBNF_ERR_CONFIG;
  case qbnf::ErrorCode::resonance: return QBNF_ERR_RESONANCE;
  case qbnf::ErrorCode::small_divisor: return QBNF_ERR_SMALL_DIVISOR;
  case qbnf::ErrorCode::sequencing: return QBNF_ERR_SEQUENCING;
  case qbnf::ErrorCode::numeric: return QBNF_ERR_NUMERIC;
  case qbnf::ErrorCode::fit: return QBNF_ERR_FIT;
  case qbnf::ErrorCode::size: return QBNF_ERR_SIZE;
  case qbnf::ErrorCode::io: return QBNF_ERR_IO;
  case qbnf::ErrorCode::selection: return QBNF_ERR_SELECTION;
  }
  return QBNF_ERR_UNKNOWN;
}

// Run `fn` translating exceptions into status codes + thread-local message.
template <typename Fn> qbnf_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const qbnf::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QBNF_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return QBNF_ERR_UNKNOWN;
  }
}

qbnf_status require(bool ok, const char* message) {
  if (ok) return QBNF_OK;
  g_last_error = message;
  return QBNF_ERR_ARGUMENT;
}

} // namespace

extern "C" {

const char* qbnf_version(void) { return qbnf::tool_version; }

const char* qbnf_last_error(void) { return g_last_error.c_str(); }

qbnf_status qbnf_config_parse(const char* text, qbnf_config** out) {
  if (auto s = require(text && out, "qbnf_config_parse: null argument")) return s;
  return guarded([&] {
    *out = new qbnf_config{qbnf::parse_config(text)};
    return QBNF_OK;
  });
}

qbnf_status qbnf_config_parse_file(const char* path, qbnf_config** out) {
  if (auto s = require(path && out, "qbnf_config_parse_file: null argument")) return s;
  return guarded([&] {
    *out = new qbnf_config{qbnf::parse_config_file(path)};
    return QBNF_OK;
  });
}

qbnf_status qbnf_config_write(const qbnf_config* cfg, char** out_text) {
  if (auto s = require(cfg && out_text, "qbnf_config_write: null argument")) return s;
  return guarded([&] {
    *out_text = dup_string(qbnf::write_config(cfg->cfg));
    return *out_text ? QBNF_OK : QBNF_ERR_UNKNOWN;
  });
}

qbnf_status qbnf_config_validate(const qbnf_config* cfg, char** out_violations) {
  if (auto s = require(cfg && out_violations, "qbnf_config_validate: null argument")) return s;
  return guarded([&] {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : qbnf::validate_config(cfg->cfg))
      arr.push_back({{"path", v.path}, {"message", v.message}});
    *out_violations = dup_string(arr.dump(2));
    return *out_violations ? QBNF_OK : QBNF_ERR_UNKNOWN;
  });
}

qbnf_status qbnf_config_hash(const qbnf_config* cfg, char** out_hash) {
  if (auto s = require(cfg && out_hash, "qbnf_config_hash: null argument")) return s;
  return guarded([&] {
    *out_hash = dup_string(qbnf::config_hash(cfg->cfg));
    return *out_hash ? QBNF_OK : QBNF_ERR_UNKNOWN;
  });
}

void qbnf_config_free(qbnf_config* cfg) { delete cfg; }

qbnf_status qbnf_run_pipeline(const qbnf_config* cfg, uint32_t flags, double tolerance,
                              qbnf_report** out) {
  if (auto s = require(cfg && out, "qbnf_run_pipeline: null argument")) return s;
  return guarded([&] {
    qbnf::PipelineOptions opts;
    opts.check_only = (flags & QBNF_RUN_CHECK_ONLY) != 0;
    opts.full_coeffs = (flags & QBNF_RUN_FULL_COEFFS) != 0;
    opts.timings = (flags & QBNF_RUN_TIMINGS) != 0;
    if (tolerance > 0.0) opts.tolerance = tolerance;
    *out = new qbnf_report{qbnf::run_pipeline(cfg->cfg, opts)};
    return QBNF_OK;
  });
}

qbnf_status qbnf_report_load_file(const char* path, qbnf_report** out) {
  if (auto s = require(path && out, "qbnf_report_load_file: null argument")) return s;
  return guarded([&] {
    *out = new qbnf_report{qbnf::RunReport::load_file(path)};
    return QBNF_OK;
  });
}

qbnf_status qbnf_report_to_json(const qbnf_report* report, char** out_text) {
  if (auto s = require(report && out_text, "qbnf_report_to_json: null argument")) return s;
  return guarded([&] {
    *out_text = dup_string(report->report.to_json());
    return *out_text ? QBNF_OK : QBNF_ERR_UNKNOWN;
  });
}

qbnf_status qbnf_report_write_file(const qbnf_report* report, const char* path) {
  if (auto s = require(report && path, "qbnf_report_write_file: null argument")) return s;
  return guarded([&] {
    report->report.write_file(path);
    return QBNF_OK;
  });
}

qbnf_status qbnf_report_plot_series(const qbnf_report* report, const char* which,
                                    char** out_text) {
  if (auto s = require(report && which && out_text, "qbnf_report_plot_series: null argument"))
    return s;
  return guarded([&] {
    *out_text = dup_string(qbnf::emit_plot_data(report->report, which));
    return *out_text ? QBNF_OK : QBNF_ERR_UNKNOWN;
  });
}

int qbnf_report_success(const qbnf_report* report) {
  return report && report->report.success() ? 1 : 0;
}

double qbnf_report_max_residual(const qbnf_report* report) {
  return report ? report->report.max_residual() : 0.0;
}

void qbnf_report_free(qbnf_report* report) { delete report; }

qbnf_status qbnf_run_properties(uint64_t seed, char** out_json) {
  if (auto s = require(out_json != nullptr, "qbnf_run_properties: null argument")) return s;
  return guarded([&] {
    auto results = qbnf::run_properties(seed);
    *out_json = dup_string(qbnf::properties_to_json(results, seed).dump(2));
    return *out_json ? QBNF_OK : QBNF_ERR_UNKNOWN;
  });
}

void qbnf_string_free(char* text) { std::free(text); }

} // extern "C"
