#pragma once

#include <functional>

#include "tcvol/numerics.hpp"

namespace tcvol {

// ============================================================================
// Spectral building blocks of the pricing expansion.
//
// The log-price generator at leading order has a continuous spectrum indexed
// by a complex frequency omega.  Prices are contour integrals over omega of
//
//     coefficient(omega) * transform_weight(omega) * eigenfunction(omega, x),
//
// with the contour running parallel to the real axis at Im(omega) < -1/2.
// This header provides the eigenvalues, eigenfunctions and payoff
// coefficients; the contour integration itself lives in pricing.hpp.
// ============================================================================

/// Effective model parameters after averaging over the fast volatility
/// factor: sigma is the root-mean-square volatility, v2_eps / v3_eps are the
/// two small correction amplitudes (already carrying their sqrt-epsilon
/// scaling, so the trio fully determines prices).
struct GroupParams {
  GroupParams(double sigma, double v2_eps, double v3_eps);

  double sigma;
  double v2_eps;
  double v3_eps;
};

/// Placement of the inversion contour omega = omega_r + i*omega_i.
struct Contour {
  explicit Contour(double omega_i, double truncation = 1000.0,
                   double tolerance = 1e-9);

  double omega_i;     ///< strictly below -1/2
  double truncation;  ///< hard cap on |Re omega| before giving up
  double tolerance;   ///< base absolute tolerance of the line integral
};

/// Leading-order eigenvalue  (sigma^2 / 2) * (omega^2 + 1/4).
/// Real part is bounded below by sigma^2/8 on the real axis.
cplx eigenvalue0(cplx omega, double sigma);

/// First-order eigenvalue, already scaled by sqrt(epsilon).  With
/// b = i*omega + 1/2:  -v3_eps * (b^3 - b^2) - v2_eps * (b^2 - b).
cplx eigenvalue1_scaled(cplx omega, const GroupParams& params);

/// Generalized eigenfunction  (2*pi)^(-1/2) * exp((i*omega + 1/2) * x).
cplx eigenfunction0(cplx omega, double x);

/// Closed-form projection coefficient of the call payoff (S - e^k)^+ against
/// the eigenfunction system, for maturity t, log-strike k and rate r.
/// The closed form has poles at omega = +-i/2; evaluating there throws
/// ContourViolation.
cplx call_coefficient(cplx omega, double t, double k, double r);

/// Projection coefficient of an arbitrary payoff h(price), computed by
/// quadrature over the log-price window.  The window is widened
/// geometrically until the integrand is negligible at both edges; if the
/// integrand has not decayed by half-width 400, throws NonConvergent.
/// Requires Im(omega) < -1/2 for payoffs with linear growth in price.
cplx generic_coefficient(const std::function<double(double)>& payoff, double t,
                         double r, cplx omega, double window_lo = -40.0,
                         double window_hi = 40.0, double abs_tol = 1e-10);

}  // namespace tcvol
