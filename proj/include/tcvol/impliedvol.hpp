#pragma once

#include <vector>

#include "tcvol/pricing.hpp"

namespace tcvol {

// ============================================================================
// Black-Scholes utilities and implied-volatility surfaces.
// ============================================================================

/// Standard normal CDF via erfc (accurate in both tails).
double norm_cdf(double x);

/// Black-Scholes call price.  vol = 0 and t = 0 degenerate to discounted
/// intrinsic value.
double bs_price(double spot, double strike, double r, double t, double vol);

/// Inverts bs_price in vol on [1e-6, 5] with an Illinois regula-falsi/
/// bisection hybrid (tolerance 1e-10 in price, at most 200 iterations).
/// Throws OutOfBand when the price sits outside the static no-arbitrage band
/// ( (spot - strike * e^{-rt})^+, spot ) or beyond the solver's vol range.
double implied_vol(double price, double spot, double strike, double r, double t);

enum class CellFlag { ok, out_of_band, non_convergent };
const char* to_string(CellFlag flag);

struct SurfaceRow {
  double maturity = 0.0;
  double log_strike = 0.0;
  double lmmr = 0.0;  ///< log-moneyness-to-maturity ratio (k - x) / t
  double price0 = 0.0;
  double correction = 0.0;
  double price = 0.0;
  double implied_vol = 0.0;  ///< NaN unless flag == ok
  CellFlag flag = CellFlag::ok;
};

struct SurfaceTable {
  std::vector<SurfaceRow> rows;
};

/// Prices the product grid of log-strikes and maturities under the template
/// request's model and inverts each cell to an implied volatility.  Cells
/// whose price leaves the no-arbitrage band or whose integral fails to
/// converge are kept in the table with the corresponding flag rather than
/// dropped.  The template payoff must be call or put (puts are converted to
/// calls by parity before inversion).  The first overload picks a contour
/// automatically; the second prices every cell on the caller's contour.
SurfaceTable surface(const PricingRequest& tmpl, const std::vector<double>& k_grid,
                     const std::vector<double>& t_grid);
SurfaceTable surface(const PricingRequest& tmpl, const std::vector<double>& k_grid,
                     const std::vector<double>& t_grid, const Contour& contour);

/// Same, but the strike grid is given in log-moneyness-to-maturity units:
/// k = x + lmmr * t per maturity.  This is the natural grid for smile plots.
SurfaceTable surface_lmmr(const PricingRequest& tmpl,
                          const std::vector<double>& lmmr_grid,
                          const std::vector<double>& t_grid);
SurfaceTable surface_lmmr(const PricingRequest& tmpl,
                          const std::vector<double>& lmmr_grid,
                          const std::vector<double>& t_grid, const Contour& contour);

}  // namespace tcvol
