#pragma once

// Problem configuration: JSON in, validated typed struct out, canonical JSON
// back.  The canonical form is deterministic (sorted keys, round-trip exact
// doubles) so configs can be hashed and compared bytewise.

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "qbnf/approximation.hpp"
#include "qbnf/frequency.hpp"
#include "qbnf/symbol.hpp"

namespace qbnf {

struct DeltaConfig {
  std::string kind; // polynomial | sub_exponential | log_tempered | product_with_power
  double exponent = 0.0;  // polynomial
  double a = 0.0;         // sub_exponential
  double gamma_exp = 0.0; // log_tempered
  double power = 0.0;     // product_with_power
  std::shared_ptr<DeltaConfig> inner; // product_with_power
};

struct SymbolTermConfig {
  int j = 0;
  std::vector<int> mode;
  std::vector<int> taylor;
  // Coefficient as a polynomial in t (ascending); a plain "coeff" entry in
  // the input is shorthand for a degree-0 polynomial.
  std::vector<std::complex<double>> t_poly;
};

struct FrequencyTermConfig {
  std::vector<int> exponents;
  TPoly t_poly;
};

struct FrequencyConfig {
  std::string form; // constant | polynomial
  std::vector<TPoly> omega;                                 // constant form
  std::vector<std::vector<FrequencyTermConfig>> components; // polynomial form
};

struct RunFlags {
  bool validity = true;
  bool nonresonance = true;
  bool recursion = true;
  bool verify = true;
  bool decay_fit = true;
  bool growth_fit = true;
  bool optimal_truncation = false;
};

struct GevreyConfig {
  double sigma = 2.0;
  double mu = 0.0;
  double lambda = 0.0;
  double rho = 0.0;
  double rho_bar = 0.0;
};

struct ProblemConfig {
  int schema_version = 1;
  int dimension = 1;
  GevreyConfig gevrey;
  DeltaConfig delta;
  double kappa = 0.0;
  FrequencyConfig frequency;
  std::vector<double> base_action;
  int h_order = 0;
  int fourier_radius = 0;
  int taylor_degree = 0;
  std::vector<double> t_values;
  std::vector<SymbolTermConfig> symbol_terms;
  RunFlags run_flags;
  double eta = 1.0;
  std::vector<double> h_values = {0.1};
  std::uint64_t seed = 0;
};

struct ConstraintViolation {
  std::string path; // e.g. "delta.a" or "symbol_terms[3].mode"
  std::string message;
};

// Structural parse (ConfigError with line/column info on malformed input).
ProblemConfig parse_config(const std::string& text);
ProblemConfig parse_config_file(const std::string& path);

// Canonical deterministic JSON.
std::string write_config(const ProblemConfig& cfg);

// Full constraint check; empty list means the config is runnable.
std::vector<ConstraintViolation> validate_config(const ProblemConfig& cfg);

// Throwing wrapper used by the pipeline: ConfigError listing every violation.
void require_valid(const ProblemConfig& cfg);

// FNV-1a 64 hash of the canonical form, as "fnv1a:<hex>".
std::string config_hash(const ProblemConfig& cfg);

// Builders (assume require_valid passed).
ApproximationFunction build_delta(const DeltaConfig& delta, double sigma);
FrequencySpec build_frequency(const ProblemConfig& cfg);
TorusSymbol build_symbol(const ProblemConfig& cfg, double t);

} // namespace qbnf
