#pragma once

#include <functional>
#include <variant>

#include "tcvol/numerics.hpp"

namespace tcvol {

// ============================================================================
// Stochastic clocks and their Laplace transforms.
//
// A clock is a non-decreasing process T_t >= 0 used to time-change the asset
// dynamics.  Pricing needs two functionals of the clock, both analytic in a
// half-plane of the transform variable lam:
//
//   laplace           L(t, lam)        = E[ exp(-lam * T_t) ]
//   weighted_laplace  W(t, lam0, lam1) = E[ (-lam1 * T_t) exp(-lam0 * T_t) ]
//                                      =  lam1 * dL/dlam at lam0.
//
// All transforms are evaluated in closed form; derivatives are analytic, not
// finite differences.
// ============================================================================

/// Trivial clock T_t = t (no time change).
struct IdentityClock {};

/// Compound-Poisson subordinator with drift: jumps arrive at rate `intensity`
/// with Exp(`jump_rate`) sizes, plus linear drift.  Laplace exponent
///   phi(lam) = drift * lam + intensity * lam / (lam + jump_rate),
/// finite for Re(lam) > -jump_rate.  With zero drift the clock sits still
/// between jumps, so T_t carries an atom at 0 of mass exp(-intensity * t).
struct LevyExpCP {
  LevyExpCP(double drift, double intensity, double jump_rate);

  double drift;
  double intensity;
  double jump_rate;
};

/// Integrated square-root activity rate: T_t = integral of Z_s ds where
///   dZ = kappa * (theta - Z) dt + sqrt(vol2) * sqrt(Z) dB,   Z_0 = z0.
/// The Feller condition 2 * kappa * theta >= vol2 is enforced.  The transform
/// converges for Re(lam) > -kappa^2 / (2 * vol2), strictly.
struct CIRClock {
  CIRClock(double kappa, double theta, double vol2, double z0);

  double kappa;
  double theta;
  double vol2;
  double z0;
};

/// Subordinator run on the integrated square-root clock (outer evaluated at
/// the inner clock's time).  Its admissible half-plane is computed at
/// construction by solving phi_outer(lam) = inner lower bound.
struct CompositeClock {
  CompositeClock(LevyExpCP outer, CIRClock inner);

  LevyExpCP outer;
  CIRClock inner;
  double admissible_bound;  ///< transforms converge for Re(lam) > this
};

/// Escape hatch for subordinators outside the built-in family.  The caller
/// supplies the Laplace exponent, its analytic derivative, the divergence
/// boundary of the exponent, and (optionally) the mass of the atom of T_t at
/// zero as a function of t.
struct GenericLevyClock {
  std::function<cplx(cplx)> exponent;
  std::function<cplx(cplx)> exponent_derivative;
  double lower_bound = 0.0;  ///< exponent finite for Re(lam) > lower_bound
  std::function<double(double)> atom_mass_fn;  ///< null means no atom
};

using Clock =
    std::variant<IdentityClock, LevyExpCP, CIRClock, CompositeClock, GenericLevyClock>;

/// Laplace exponent of the compound-Poisson-with-drift subordinator and its
/// derivative in lam.  Throw DomainViolation outside Re(lam) > -jump_rate.
cplx levy_exponent(const LevyExpCP& clock, cplx lam);
cplx levy_exponent_derivative(const LevyExpCP& clock, cplx lam);

/// Transform of the integrated square-root clock and its lam-derivative.
/// Both use a log-domain form that neither overflows nor crosses branch cuts
/// for any admissible lam (see the implementation notes).
cplx cir_laplace(const CIRClock& clock, double t, cplx lam);
cplx cir_laplace_dlam(const CIRClock& clock, double t, cplx lam);

/// Infimum of Re(lam) over the convergence half-plane of laplace().
/// -infinity for the identity clock.
double admissible_real_lower_bound(const Clock& clock);

/// Mass of the atom of T_t at zero (probability that the clock has not moved
/// by calendar time t); zero for clocks with a.s. positive activity.
double atom_mass(const Clock& clock, double t);

/// E[exp(-lam * T_t)].  Throws DomainViolation outside the admissible
/// half-plane.
cplx laplace(const Clock& clock, double t, cplx lam);

/// E[(-lam1_scaled * T_t) * exp(-lam0 * T_t)] = lam1_scaled * dL/dlam(lam0).
cplx weighted_laplace(const Clock& clock, double t, cplx lam0, cplx lam1_scaled);

}  // namespace tcvol
