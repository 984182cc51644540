#pragma once

#include <string>
#include <vector>

#include "tcvol/config.hpp"

namespace tcvol {

// ============================================================================
// Weighted least-squares calibration of model parameters to implied-vol
// quotes, minimized with a derivative-free simplex search under box
// constraints.
// ============================================================================

/// One market observation.
struct Quote {
  double maturity = 0.0;
  double strike = 0.0;
  double implied_vol = 0.0;
  double weight = 1.0;
};

/// A parameter the optimizer may move.
struct FreeParam {
  std::string name;  ///< sigma, v2_eps, v3_eps or a clock parameter
  double lower = 0.0;
  double upper = 0.0;
  double initial = 0.0;
};

struct CalibrationResult {
  std::vector<FreeParam> params;  ///< the free parameters as resolved
  std::vector<double> fitted;     ///< optimizer output, same order
  std::vector<double> model_iv;   ///< per-quote model vols at the fitted point
  double rmse = 0.0;              ///< weighted RMS of vol residuals
  int iterations = 0;             ///< simplex iterations used
  bool converged = false;
};

/// Reads the current value of a calibratable parameter from the config.
/// Throws std::invalid_argument if the name does not apply to the configured
/// clock.
double get_param(const RunConfig& config, const std::string& name);

/// Copy of the config with the named parameters replaced.  Constructor
/// validation applies (e.g. the Feller condition), so a proposal can throw.
RunConfig with_params(const RunConfig& base, const std::vector<FreeParam>& params,
                      const std::vector<double>& values);

/// Runs the calibration declared in base.calibrate against the quotes.
/// Quotes that price outside the no-arbitrage band or fail to converge
/// contribute a fixed penalty instead of a residual, steering the search back
/// into sane territory.  Deterministic; requires at least as many quotes as
/// free parameters and strictly positive weights.
CalibrationResult calibrate(const RunConfig& base, const std::vector<Quote>& quotes);

}  // namespace tcvol
