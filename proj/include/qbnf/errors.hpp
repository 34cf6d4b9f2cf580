#pragma once

// Error taxonomy for the normal-form toolkit.  Every failure mode carries a
// stable category (for the C API status mapping) plus a human-readable detail
// string; resonance and small-divisor failures additionally name the lattice
// vector involved.

#include <stdexcept>
#include <string>
#include <vector>

namespace qbnf {

enum class ErrorCode {
  domain = 1,        // argument outside mathematical domain (e.g. gamma at x <= 0)
  shape = 2,         // incompatible dimensions / truncations / base actions
  config = 3,        // config parse or constraint violation
  resonance = 4,     // exact resonance <k, omega> = 0
  small_divisor = 5, // |<k, omega>| below kappa / Delta(|k|)
  sequencing = 6,    // recursion order requested before prerequisites exist
  numeric = 7,       // iteration failed to converge / overflow
  fit = 8,           // not enough data for a requested fit
  size = 9,          // enumeration would exceed the configured cap
  io = 10,           // file read/write failure
  selection = 11,    // requested series/field not present in a report
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& what) : Error(ErrorCode::shape, what) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

// Exact resonance: <k, omega> == 0 for the named lattice vector.
class ResonanceError : public Error {
public:
  ResonanceError(const std::string& what, std::vector<int> k)
      : Error(ErrorCode::resonance, what), k_(std::move(k)) {}
  const std::vector<int>& mode() const { return k_; }

private:
  std::vector<int> k_;
};

// Divisor present but below the admissible threshold kappa / Delta(|k|).
class SmallDivisorError : public Error {
public:
  SmallDivisorError(const std::string& what, std::vector<int> k, int order = -1)
      : Error(ErrorCode::small_divisor, what), k_(std::move(k)), order_(order) {}
  const std::vector<int>& mode() const { return k_; }
  int order() const { return order_; }

private:
  std::vector<int> k_;
  int order_; // h-order at which the solve failed, -1 if outside a recursion
};

class SequencingError : public Error {
public:
  explicit SequencingError(const std::string& what) : Error(ErrorCode::sequencing, what) {}
};

class NumericError : public Error {
public:
  explicit NumericError(const std::string& what) : Error(ErrorCode::numeric, what) {}
};

class FitError : public Error {
public:
  explicit FitError(const std::string& what) : Error(ErrorCode::fit, what) {}
};

class SizeError : public Error {
public:
  explicit SizeError(const std::string& what) : Error(ErrorCode::size, what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

class SelectionError : public Error {
public:
  explicit SelectionError(const std::string& what) : Error(ErrorCode::selection, what) {}
};

} // namespace qbnf
