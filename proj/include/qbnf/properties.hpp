#pragma once

// Seeded randomized property suite: algebraic invariants (bilinearity,
// associativity under safe truncation, mode-power derivatives), analytic
// invariants (gamma recurrence, sup monotonicity, threshold bounds), solver
// invariants (linearity, amplification, determinism) and config round-trips.
// Deterministic for a fixed seed; each property draws from its own stream.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qbnf {

struct PropertyResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::string detail; // first failure, empty when clean
  bool passed() const { return failures == 0; }
};

std::vector<PropertyResult> run_properties(std::uint64_t seed);

nlohmann::json properties_to_json(const std::vector<PropertyResult>& results, std::uint64_t seed);

} // namespace qbnf
