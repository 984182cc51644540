#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "tcvol/config.hpp"

namespace tcvol {

// ============================================================================
// Command layer: everything the CLI binary does, as testable library calls.
//
// Exit codes: 0 success, 1 validation error (bad config, bad arguments,
// malformed input files), 2 numeric failure (non-convergent integrals,
// quadrature failures, prices outside the arbitrage band).
// ============================================================================

/// Parsed command-line options shared by the subcommands; each command uses
/// the subset that applies to it.
struct CliArgs {
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::optional<std::string> out_path;     ///< overrides [output] out
  std::optional<std::string> quotes_path;  ///< calibrate input
  std::optional<std::uint64_t> seed;       ///< overrides [numerics] seed
  bool quick = false;                      ///< verify: skip Monte Carlo checks
};

/// Prices the single option described by the config and prints the result as
/// key = value lines; optionally appends the row to a surface-schema CSV.
int cmd_price(const CliArgs& args, std::ostream& out, std::ostream& err);

/// Prices the configured strike/maturity grid and writes the surface CSV.
int cmd_surface(const CliArgs& args, std::ostream& out, std::ostream& err);

/// Runs the oracle verification suite; exit 2 when any check fails.
int cmd_verify(const CliArgs& args, std::ostream& out, std::ostream& err);

/// Fits the free parameters declared in [calibrate] to a quote file.
int cmd_calibrate(const CliArgs& args, std::ostream& out, std::ostream& err);

}  // namespace tcvol
