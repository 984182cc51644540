#include "tcvol/presets.hpp"

namespace tcvol {

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = [] {
    const GroupParams params(0.34, 0.03, -0.03);
    std::vector<Preset> list;
    list.push_back(Preset{"fig1", "no time change (calendar clock)", params,
                          IdentityClock{}, 0.0, 1.0});
    list.push_back(Preset{"fig2",
                          "compound-Poisson subordinator, drift 0.25, "
                          "intensity 0.75, jump rate 0.10",
                          params, LevyExpCP(0.25, 0.75, 0.10), 0.0, 1.0});
    list.push_back(Preset{"fig3",
                          "integrated square-root activity rate, kappa 1, "
                          "theta 1, vol^2 2, z0 2",
                          params, CIRClock(1.0, 1.0, 2.0, 2.0), 0.0, 1.0});
    list.push_back(Preset{"fig4",
                          "subordinator (drift 0.05, intensity 0.50, jump "
                          "rate 0.50) on an integrated square-root clock "
                          "(kappa 2, theta 1, vol^2 4, z0 4)",
                          params,
                          CompositeClock(LevyExpCP(0.05, 0.50, 0.50),
                                         CIRClock(2.0, 1.0, 4.0, 4.0)),
                          0.0, 1.0});
    return list;
  }();
  return presets;
}

const Preset* find_preset(const std::string& name) {
  for (const Preset& p : all_presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace tcvol
