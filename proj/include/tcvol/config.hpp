#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcvol/pricing.hpp"

namespace tcvol {

// ============================================================================
// Run configuration: a flat, line-oriented text format.
//
//   # comment
//   [model]
//   sigma  = 0.34
//   v2_eps = 0.03
//   ...
//
// Blocks: [model], [clock], [option], [grid], [numerics], [output],
// [calibrate].  Unknown blocks, unknown keys, duplicate keys and malformed
// values are all rejected with file:line anchored messages.
// ============================================================================

/// Single-option settings for the `price` command.
struct OptionSpec {
  double maturity = 1.0;
  std::optional<double> log_strike;  ///< defaults to log(spot) (ATM forwardless)
  PayoffKind payoff = PayoffKind::call;
};

/// Strike/maturity grid for the `surface` command.  When `strikes` is
/// non-empty it overrides the LMMR range.
struct GridSpec {
  std::vector<double> maturities{0.125, 0.25, 0.5, 1.0};
  double lmmr_min = -1.0;
  double lmmr_max = 1.0;
  int lmmr_steps = 41;
  std::vector<double> strikes;
};

struct NumericsSpec {
  double tolerance = 1e-9;
  double truncation = 1000.0;
  std::optional<double> contour_omega_i;  ///< override automatic placement
  std::uint64_t seed = 12345;
  std::size_t n_paths = 100000;
};

struct OutputSpec {
  std::string out_path;  ///< CSV destination; --out on the command line wins
  int precision = 12;    ///< significant digits in CSV output
};

/// Declares which parameters the calibrator may move and within which box.
/// Parameter names: sigma, v2_eps, v3_eps, gamma, alpha, eta, kappa, theta,
/// sigma2, z0 (clock names only when the configured clock has them).
struct CalibrateSpec {
  std::vector<std::string> free_names;
  std::map<std::string, double> lower;
  std::map<std::string, double> upper;
  int max_iterations = 4000;
};

struct RunConfig {
  GroupParams params;
  Clock clock;
  double r = 0.0;
  double spot = 1.0;
  OptionSpec option;
  GridSpec grid;
  NumericsSpec numerics;
  OutputSpec output;
  std::optional<CalibrateSpec> calibrate;
};

/// Builds a RunConfig from an optional config file and an optional preset
/// name.  Exactly the model sources compose: a preset supplies [model] and
/// [clock] (the file must then omit both); without a preset the file must
/// supply them.  Throws ConfigError with file:line anchoring on any parse or
/// validation problem, std::invalid_argument for an unknown preset or when
/// neither source is given.
RunConfig make_config(const std::optional<std::string>& config_path,
                      const std::optional<std::string>& preset_name);

/// Contour from the numerics block: the override height when present
/// (validated), otherwise automatic placement; truncation and tolerance are
/// taken from the block either way.
Contour contour_from_config(const RunConfig& config);

}  // namespace tcvol
