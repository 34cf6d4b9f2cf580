#include "doctest.h"

#include <cstdio>
#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "configs.hpp"
#include "qbnf/config.hpp"
#include "qbnf/errors.hpp"
#include "qbnf/pipeline.hpp"

using namespace qbnf;
using nlohmann::json;

namespace {

ProblemConfig golden() { return parse_config(testutil::kGoldenConfig); }

bool has_violation(const std::vector<ConstraintViolation>& v, const std::string& path) {
  for (const auto& c : v)
    if (c.path == path) return true;
  return false;
}

} // namespace

TEST_CASE("config parses, canonicalizes, and round-trips as a fixed point") {
  auto cfg = golden();
  CHECK(cfg.dimension == 1);
  CHECK(cfg.gevrey.rho_bar == 22.0); // lambda * mu + sigma = 5 * 4 + 2 defaulted
  CHECK(cfg.kappa == 0.05);
  CHECK(cfg.h_order == 6);
  CHECK(cfg.symbol_terms.size() == 5);
  CHECK(cfg.run_flags.optimal_truncation);
  CHECK(cfg.h_values == std::vector<double>{0.1, 0.05});
  CHECK(validate_config(cfg).empty());

  std::string canon = write_config(cfg);
  auto reparsed = parse_config(canon);
  CHECK(write_config(reparsed) == canon);
  CHECK(config_hash(reparsed) == config_hash(cfg));
  CHECK(config_hash(cfg).rfind("fnv1a:", 0) == 0);

  reparsed.kappa = 0.06;
  CHECK(config_hash(reparsed) != config_hash(cfg));
}

TEST_CASE("malformed input is reported with position info") {
  CHECK_THROWS_WITH_AS(parse_config("{\"dimension\": 1,,}"), doctest::Contains("line"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2,3]"), ConfigError);
  std::string exotic = testutil::kGoldenConfig;
  exotic.replace(exotic.find("\"kind\": \"polynomial\""), std::strlen("\"kind\": \"polynomial\""),
                 "\"kind\": \"exotic\"");
  CHECK_THROWS_WITH_AS(parse_config(exotic), doctest::Contains("exotic"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.json"), IoError);
}

TEST_CASE("constraint violations carry their paths") {
  auto cfg = golden();
  cfg.dimension = 0;
  cfg.kappa = -1.0;
  auto v = validate_config(cfg);
  CHECK(has_violation(v, "dimension"));
  CHECK(has_violation(v, "kappa"));
  CHECK_THROWS_AS(require_valid(cfg), ConfigError);

  auto sub = golden();
  sub.delta.kind = "sub_exponential";
  sub.delta.a = 0.6; // >= 1/sigma
  auto vs = validate_config(sub);
  CHECK(has_violation(vs, "delta.a"));
  bool mentions_sigma = false;
  for (const auto& c : vs)
    if (c.path == "delta.a" && c.message.find("1/sigma") != std::string::npos)
      mentions_sigma = true;
  CHECK(mentions_sigma);

  auto h1 = golden();
  h1.symbol_terms.push_back({1, {1}, {0}, {{0.5, 0.0}}});
  CHECK(has_violation(validate_config(h1), "symbol_terms[5]")); // p_1 must vanish

  auto badmode = golden();
  badmode.symbol_terms[3].mode = {9}; // outside fourier_radius 8
  CHECK(!validate_config(badmode).empty());

  auto shallow = golden();
  shallow.h_order = 1; // recursion needs >= 2
  CHECK(!validate_config(shallow).empty());
}

TEST_CASE("symbol builder evaluates t-polynomials") {
  auto cfg = golden();
  cfg.symbol_terms[3].t_poly = {{1.0, 0.0}, {0.0, 1.0}}; // 1 + i t
  cfg.t_values = {2.0};
  auto s = build_symbol(cfg, 2.0);
  CHECK(s.coeff(2, {1}, MultiIndex({0})) == std::complex<double>(1.0, 2.0));
  CHECK(s.t_value() == 2.0);
}

TEST_CASE("pipeline run on the golden instance is successful and deterministic") {
  auto cfg = golden();
  auto rep1 = run_pipeline(cfg);
  auto rep2 = run_pipeline(cfg);
  CHECK(rep1.success());
  CHECK(rep1.max_residual() <= 1e-13);
  CHECK(rep1.to_json() == rep2.to_json());

  const auto& doc = rep1.doc();
  CHECK(doc.at("schema_version") == 1);
  CHECK(doc.at("errors").empty());
  CHECK(doc.at("validity").at("valid") == true);
  const auto& run = doc.at("runs").at(0);
  CHECK(run.at("t") == 0.0);
  CHECK(run.at("divisors").at("holds") == true);
  CHECK(run.at("recursion").at("fourier_clipped") == 0.0);
  CHECK(run.at("verify").at("fourier_clipped") == 0.0);
  double p04 = run.at("recursion").at("p0_at_base").at(4).at(0).get<double>();
  CHECK(p04 == doctest::Approx(0.09549150281252627).epsilon(1e-12));
  CHECK(run.at("truncation").size() == 2); // one entry per h value
  CHECK(run.at("truncation").at(0).at("J_used") == 6);

  // Coefficients embed only on request.
  CHECK(!run.contains("coefficients"));
  PipelineOptions full;
  full.full_coeffs = true;
  auto rep3 = run_pipeline(cfg, full);
  CHECK(rep3.doc().at("runs").at(0).contains("coefficients"));
}

TEST_CASE("check-only mode stops after the nonresonance gate") {
  PipelineOptions opts;
  opts.check_only = true;
  auto rep = run_pipeline(golden(), opts);
  CHECK(rep.success());
  const auto& run = rep.doc().at("runs").at(0);
  CHECK(run.contains("divisors"));
  CHECK(!run.contains("recursion"));
  CHECK(!run.contains("verify"));
}

TEST_CASE("a resonant configuration fails naming the mode") {
  auto cfg = parse_config(testutil::kResonantConfig);
  auto rep = run_pipeline(cfg);
  CHECK_FALSE(rep.success());
  const auto& errors = rep.doc().at("errors");
  REQUIRE(errors.size() == 1);
  CHECK(errors.at(0).at("stage") == "nonresonance");
  std::string detail = errors.at(0).at("detail").get<std::string>();
  CHECK(detail.find("(1,-1)") != std::string::npos);
  // The gate closes before the recursion stage.
  CHECK(!rep.doc().at("runs").at(0).contains("recursion"));
}

TEST_CASE("the success verdict respects the tolerance") {
  PipelineOptions strict;
  strict.tolerance = 1e-20;
  auto rep = run_pipeline(golden(), strict);
  CHECK_FALSE(rep.success());
  CHECK(rep.doc().at("errors").empty()); // no hard error, just residuals above threshold
}

TEST_CASE("timings are opt-in so reports stay byte-identical") {
  PipelineOptions timed;
  timed.timings = true;
  auto rep = run_pipeline(golden(), timed);
  CHECK(rep.doc().contains("timings"));
  auto plain = run_pipeline(golden());
  CHECK(!plain.doc().contains("timings"));
}

TEST_CASE("plot series render as two-column blocks per t") {
  auto rep = run_pipeline(golden());
  auto residuals = emit_plot_data(rep, "residuals");
  CHECK(residuals.rfind("# residuals:", 0) == 0);
  CHECK(residuals.find("# t = 0") != std::string::npos);
  auto divisors = emit_plot_data(rep, "divisors");
  CHECK(divisors.rfind("# divisors:", 0) == 0);
  // 8 shells scanned: a data row per shell.
  int rows = 0;
  for (size_t pos = divisors.find('\n'); pos != std::string::npos;
       pos = divisors.find('\n', pos + 1)) {
    size_t next = pos + 1;
    if (next < divisors.size() && divisors[next] != '#' && divisors[next] != '\n') ++rows;
  }
  CHECK(rows == 8);
  CHECK(emit_plot_data(rep, "decay").find("# decay:") == 0);
  CHECK(emit_plot_data(rep, "growth").find("# growth:") == 0);
  CHECK_THROWS_AS(emit_plot_data(rep, "bogus"), SelectionError);

  PipelineOptions check;
  check.check_only = true;
  auto gate = run_pipeline(golden(), check);
  CHECK_THROWS_AS(emit_plot_data(gate, "residuals"), SelectionError);
}

TEST_CASE("reports file-round-trip through the canonical form") {
  auto rep = run_pipeline(golden());
  const char* path = "/tmp/qbnf_test_report.json";
  rep.write_file(path);
  auto loaded = RunReport::load_file(path);
  CHECK(loaded.to_json() == rep.to_json());
  CHECK(loaded.success());
  std::remove(path);
  CHECK_THROWS_AS(RunReport::from_json("not json"), ConfigError);
  CHECK_THROWS_AS(RunReport::load_file("/nonexistent/report.json"), IoError);
}
