#pragma once

#include <stdexcept>
#include <string>

namespace tcvol {

// ============================================================================
// Error taxonomy
//
// All failures surface as exceptions derived from std::runtime_error (numeric
// failures) or std::invalid_argument (caller mistakes), so the CLI can map
// them onto distinct exit codes and tests can assert on the precise class.
// ============================================================================

/// Input outside the mathematical domain of a transform, e.g. a Laplace
/// argument at or below the divergence boundary of a CIR clock.
class DomainViolation : public std::invalid_argument {
 public:
  explicit DomainViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Contour placement that violates the strip of regularity of the inversion
/// integral (imaginary part must sit strictly below -1/2).
class ContourViolation : public std::invalid_argument {
 public:
  explicit ContourViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// A quadrature or series truncation hit its hard cap before the requested
/// tolerance was met.  Carries the best value so far in the message only;
/// callers that want partial results must lower the tolerance instead.
class NonConvergent : public std::runtime_error {
 public:
  explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

/// An internal consistency check on a quadrature result failed (NaN, residual
/// above tolerance, cancellation beyond the documented noise floor).
class QuadratureFailure : public std::runtime_error {
 public:
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Requested option price lies outside the static no-arbitrage band, so no
/// implied volatility exists.
class OutOfBand : public std::runtime_error {
 public:
  explicit OutOfBand(const std::string& what) : std::runtime_error(what) {}
};

/// Full-model simulation asked to run with a time step too coarse for the
/// fast mean-reverting factor (dt must satisfy dt <= epsilon / 50).
class StepTooCoarse : public std::invalid_argument {
 public:
  explicit StepTooCoarse(const std::string& what) : std::invalid_argument(what) {}
};

/// Config-file parse or validation error, anchored to a file and line.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& file, int line, const std::string& message)
      : std::invalid_argument(file + ":" + std::to_string(line) + ": " + message),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

}  // namespace tcvol
