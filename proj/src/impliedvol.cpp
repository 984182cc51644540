#include "tcvol/impliedvol.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tcvol/errors.hpp"

namespace tcvol {

namespace {
constexpr double kVolLo = 1e-6;
constexpr double kVolHi = 5.0;
constexpr double kPriceTol = 1e-10;
constexpr int kMaxIter = 200;
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double bs_price(double spot, double strike, double r, double t, double vol) {
  if (!(spot > 0.0) || !(strike > 0.0)) {
    throw std::invalid_argument("bs_price: spot and strike must be positive");
  }
  if (!(t >= 0.0) || !(vol >= 0.0)) {
    throw std::invalid_argument("bs_price: t and vol must be non-negative");
  }
  const double discounted_strike = strike * std::exp(-r * t);
  const double stdev = vol * std::sqrt(t);
  if (stdev <= 0.0) {
    return std::max(spot - discounted_strike, 0.0);
  }
  const double d1 = std::log(spot / discounted_strike) / stdev + 0.5 * stdev;
  const double d2 = d1 - stdev;
  return spot * norm_cdf(d1) - discounted_strike * norm_cdf(d2);
}

double implied_vol(double price, double spot, double strike, double r, double t) {
  if (!(spot > 0.0) || !(strike > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("implied_vol: spot, strike and t must be positive");
  }
  const double intrinsic = std::max(spot - strike * std::exp(-r * t), 0.0);
  if (!std::isfinite(price) || price <= intrinsic || price >= spot) {
    throw OutOfBand("implied_vol: price " + std::to_string(price) +
                    " outside the no-arbitrage band (" + std::to_string(intrinsic) +
                    ", " + std::to_string(spot) + ")");
  }

  double lo = kVolLo;
  double hi = kVolHi;
  double f_lo = bs_price(spot, strike, r, t, lo) - price;
  double f_hi = bs_price(spot, strike, r, t, hi) - price;
  if (f_lo > 0.0 || f_hi < 0.0) {
    throw OutOfBand("implied_vol: no volatility in [1e-6, 5] reproduces the price");
  }

  /**
   * Illinois regula falsi: the secant step gives superlinear convergence on
   * smooth brackets, the halving of the retained endpoint's function value
   * prevents the one-sided stalling of plain regula falsi, and the bracket
   * guarantees convergence even in the flat deep-in/out-of-the-money wings.
   */
  int side = 0;
  double v = 0.5 * (lo + hi);
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const double denom = f_hi - f_lo;
    v = (std::isfinite(denom) && denom != 0.0) ? (lo * f_hi - hi * f_lo) / denom
                                               : 0.5 * (lo + hi);
    if (!(v > lo) || !(v < hi)) v = 0.5 * (lo + hi);
    const double f_v = bs_price(spot, strike, r, t, v) - price;
    if (std::abs(f_v) < kPriceTol || hi - lo < 1e-12) return v;
    if (f_v < 0.0) {
      lo = v;
      f_lo = f_v;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = v;
      f_hi = f_v;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
  }
  return v;
}

const char* to_string(CellFlag flag) {
  switch (flag) {
    case CellFlag::ok:
      return "ok";
    case CellFlag::out_of_band:
      return "out_of_band";
    case CellFlag::non_convergent:
      return "non_convergent";
  }
  return "unknown";
}

namespace {

SurfaceRow price_cell(const PricingRequest& tmpl, const Contour& contour,
                      double k, double t) {
  PricingRequest req = tmpl;
  req.k = k;
  req.t = t;

  SurfaceRow row;
  row.maturity = t;
  row.log_strike = k;
  row.lmmr = (k - req.x) / t;
  row.implied_vol = kNaN;

  try {
    const PriceResult res = price(req, contour);
    row.price0 = res.p0;
    row.correction = res.correction;
    row.price = res.total;
  } catch (const NonConvergent&) {
    row.price0 = kNaN;
    row.correction = kNaN;
    row.price = kNaN;
    row.flag = CellFlag::non_convergent;
    return row;
  }

  // Invert a call price: puts convert through parity first.
  double call_price = row.price;
  if (req.payoff == PayoffKind::put) {
    call_price += std::exp(req.x) - std::exp(k - req.r * t);
  }
  try {
    row.implied_vol =
        implied_vol(call_price, std::exp(req.x), std::exp(k), req.r, t);
  } catch (const OutOfBand&) {
    row.flag = CellFlag::out_of_band;
  }
  return row;
}

SurfaceTable surface_impl(const PricingRequest& tmpl,
                          const std::vector<double>& k_grid,
                          const std::vector<double>& t_grid, bool lmmr_units,
                          const Contour& contour) {
  if (tmpl.payoff == PayoffKind::custom) {
    throw std::invalid_argument("surface: implied vol surfaces need a call or put payoff");
  }

  SurfaceTable table;
  table.rows.reserve(k_grid.size() * t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("surface: maturities must be positive");
    }
    for (double kk : k_grid) {
      const double k = lmmr_units ? tmpl.x + kk * t : kk;
      table.rows.push_back(price_cell(tmpl, contour, k, t));
    }
  }
  return table;
}

}  // namespace

SurfaceTable surface(const PricingRequest& tmpl, const std::vector<double>& k_grid,
                     const std::vector<double>& t_grid) {
  return surface_impl(tmpl, k_grid, t_grid, /*lmmr_units=*/false,
                      choose_contour(tmpl.params, tmpl.clock));
}

SurfaceTable surface(const PricingRequest& tmpl, const std::vector<double>& k_grid,
                     const std::vector<double>& t_grid, const Contour& contour) {
  return surface_impl(tmpl, k_grid, t_grid, /*lmmr_units=*/false, contour);
}

SurfaceTable surface_lmmr(const PricingRequest& tmpl,
                          const std::vector<double>& lmmr_grid,
                          const std::vector<double>& t_grid) {
  return surface_impl(tmpl, lmmr_grid, t_grid, /*lmmr_units=*/true,
                      choose_contour(tmpl.params, tmpl.clock));
}

SurfaceTable surface_lmmr(const PricingRequest& tmpl,
                          const std::vector<double>& lmmr_grid,
                          const std::vector<double>& t_grid, const Contour& contour) {
  return surface_impl(tmpl, lmmr_grid, t_grid, /*lmmr_units=*/true, contour);
}

}  // namespace tcvol
