#pragma once

#include <optional>

#include "tcvol/spectral.hpp"
#include "tcvol/timechange.hpp"

namespace tcvol {

// ============================================================================
// Contour-integral pricer.
//
// European prices under the time-changed dynamics are recovered as
//
//   price = e^{-rt} * Integral over omega of
//             coefficient(omega) * weight(omega) * eigenfunction(omega, x)
//
// with weight = laplace(clock, t, eigenvalue0) for the leading order and
// weight = weighted_laplace(clock, t, eigenvalue0, eigenvalue1_scaled) for
// the first correction.  Clocks that can sit still until maturity put an atom
// at T_t = 0; its (non-decaying) share of the transform is split off and
// priced in closed form so the remaining integrand decays.
// ============================================================================

enum class PayoffKind { call, put, custom };

/// User-defined payoff h(price) for PayoffKind::custom.
///
/// The engine prices the affine part value_at_zero + slope_at_zero * price
/// exactly and integrates only the remainder.  When `reduced` is null the
/// remainder is formed by plain subtraction, whose absolute noise floor is
/// about one ulp of value_at_zero; the coefficient integral amplifies that by
/// exp((1/2 - omega_i) * |x|), so payoffs with a sizeable affine part should
/// supply `reduced` -- a stable evaluation of
/// h(s) - value_at_zero - slope_at_zero * s, accurate in relative terms for
/// small s.
struct CustomPayoff {
  std::function<double(double)> h;
  double value_at_zero = 0.0;
  double slope_at_zero = 0.0;
  std::function<double(double)> reduced;
};

struct PricingRequest {
  double x = 0.0;  ///< log spot
  double k = 0.0;  ///< log strike (unused for custom payoffs)
  double r = 0.0;  ///< continuously compounded rate
  double t = 1.0;  ///< maturity in years, strictly positive
  GroupParams params;
  Clock clock;
  PayoffKind payoff = PayoffKind::call;
  std::optional<CustomPayoff> custom;
};

struct PriceResult {
  double p0 = 0.0;             ///< leading-order price
  double correction = 0.0;     ///< first-order (sqrt-epsilon) correction
  double total = 0.0;          ///< p0 + correction
  double imag_residual = 0.0;  ///< |Im| left over by the contour integrals
  Contour contour_used;
  long n_evals = 0;            ///< integrand evaluations across both integrals
  double quad_error = 0.0;     ///< accumulated quadrature error estimate
};

/// Picks a contour height for the given model: starts at omega_i = -1 and
/// moves toward -1/2 until the integrand's transform argument clears the
/// clock's divergence boundary with a 10% margin.  Throws ContourViolation if
/// no height works (only possible for a user clock whose boundary is >= 0).
Contour choose_contour(const GroupParams& params, const Clock& clock);

/// Leading-order price as the raw complex contour integral (discount and atom
/// term included).  The imaginary part is quadrature + symmetry residual and
/// should be negligible.
cplx price_order0(const PricingRequest& req, const Contour& contour);

/// First-order correction, same conventions.  Identically zero when both
/// correction amplitudes vanish.
cplx price_correction(const PricingRequest& req, const Contour& contour);

/// Full price: chooses a contour, runs both integrals, folds in put-call
/// parity and affine payoff legs, and reports diagnostics.
PriceResult price(const PricingRequest& req);

/// As above on a caller-supplied contour (used by the contour-independence
/// checks).
PriceResult price(const PricingRequest& req, const Contour& contour);

}  // namespace tcvol
