#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tcvol/calibrate.hpp"
#include "tcvol/impliedvol.hpp"

namespace tcvol {

// ============================================================================
// Flat-file round trips.  The surface schema is stable; regression files
// depend on it byte for byte.
// ============================================================================

inline constexpr const char* kSurfaceCsvHeader =
    "maturity,log_strike,lmmr,price0,correction,price,implied_vol,flag";

/// Shortest representation with the given number of significant digits
/// (printf %g semantics).  12 digits round-trips doubles for our value
/// ranges.
std::string format_double(double v, int significant_digits);

/// Emits the header plus one row per surface cell.  NaN fields (prices of
/// non-convergent cells, implied vol of flagged cells) are left empty; the
/// flag column always states why.
void write_surface_csv(std::ostream& out, const SurfaceTable& table, int precision);

/// Reads a quote file with header `maturity,strike,implied_vol,weight`.
/// Malformed content raises ConfigError anchored to file and line.
std::vector<Quote> read_quotes_csv(std::istream& in, const std::string& filename);

/// Per-quote fit report: the input columns plus the model vol and residual.
void write_fit_csv(std::ostream& out, const std::vector<Quote>& quotes,
                   const std::vector<double>& model_iv, int precision);

}  // namespace tcvol
