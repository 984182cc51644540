#pragma once

#include <string>
#include <vector>

#include "tcvol/pricing.hpp"

namespace tcvol {

// ============================================================================
// Built-in parameter sets, one per time-change regime, matching the reference
// implied-volatility surfaces.  All share sigma = 0.34, v2_eps = 0.03,
// v3_eps = -0.03, r = 0 and spot = 1.
// ============================================================================

struct Preset {
  std::string name;
  std::string description;
  GroupParams params;
  Clock clock;
  double r = 0.0;
  double spot = 1.0;
};

/// fig1..fig4 in order: identity clock, compound-Poisson subordinator,
/// integrated square-root clock, subordinator composed with the square-root
/// clock.
const std::vector<Preset>& all_presets();

/// Lookup by name; nullptr when unknown.
const Preset* find_preset(const std::string& name);

}  // namespace tcvol
