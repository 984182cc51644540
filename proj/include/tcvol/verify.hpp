#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "tcvol/config.hpp"

namespace tcvol {

// ============================================================================
// Built-in oracle suite behind the `verify` command.
//
// Each check compares a library result against an independent reference --
// closed forms, finite differences, Monte Carlo -- and reports one line with
// its residual and tolerance.  The pricing checks run on the contour and
// tolerances of the supplied config, so a misconfigured numerics block shows
// up as a named failure rather than silent nonsense.
// ============================================================================

struct VerifyOptions {
  bool quick = false;  ///< skip the Monte Carlo checks
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  ///< non-empty when the check failed by exception
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const CheckResult& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

/// Runs the suite.  Deterministic in (config, options): Monte Carlo streams
/// derive from config.numerics.seed.
VerifyReport run_verification(const RunConfig& config, const VerifyOptions& options);

/// One line per check plus a summary line.
void print_report(const VerifyReport& report, std::ostream& os);

}  // namespace tcvol
