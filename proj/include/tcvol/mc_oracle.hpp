#pragma once

#include <cstdint>

#include "tcvol/numerics.hpp"
#include "tcvol/pricing.hpp"
#include "tcvol/rng.hpp"

namespace tcvol {

// ============================================================================
// Monte Carlo oracles.
//
// Everything here exists to cross-check the analytic transforms and the
// contour pricer from a direction that shares no code with them: clocks are
// sampled pathwise, prices are conditional Black-Scholes values averaged over
// clock draws, and the full two-factor model is simulated by Euler stepping.
// All estimators are deterministic in (seed, n_paths) regardless of thread
// count.
// ============================================================================

/// Draws one clock value T_t.
///   Identity   t itself.
///   LevyExpCP  drift * t plus a Poisson(intensity * t) number of
///              Exp(jump_rate) jumps.
///   CIRClock   trapezoid integral of a full-truncation Euler path of the
///              activity rate, `cir_steps` steps over [0, t].
///   Composite  inner draw first, outer sampled over the inner value.
/// User-supplied GenericLevyClock instances define no sampling law and are
/// rejected.
double sample_clock(const Clock& clock, double t, Xoshiro256pp& rng,
                    int cir_steps = 2000);

/// E[payoff | T_t = clock_value] for a call, undiscounted: the Black-Scholes
/// value with total variance sigma^2 * clock_value around the forward log
/// price r*t + x.  Degenerates to the payoff itself at clock_value = 0.
double conditional_bs_value(double clock_value, double x, double t, double k,
                            double r, double sigma);

/// Leading-order price by Monte Carlo: discounted conditional Black-Scholes
/// values averaged over clock draws.  Supports call and put (via parity).
McEstimate mc_price_order0(const PricingRequest& req, std::size_t n_paths,
                           std::uint64_t seed, unsigned n_threads = 1,
                           int cir_steps = 2000);

/// Samples E[(-lam1_scaled * T_t) * exp(-lam0 * T_t)] directly, as an oracle
/// for the analytic weighted_laplace.
McComplexEstimate mc_weighted_laplace(const Clock& clock, double t, cplx lam0,
                                      cplx lam1_scaled, std::size_t n_paths,
                                      std::uint64_t seed, unsigned n_threads = 1,
                                      int cir_steps = 2000);

/// Volatility shapes available for the full two-factor model.
enum class VolFnKind { exp_y, constant };

/// Concrete fast-factor model behind the group parameters:
///   dX = -f(Y)^2/2 dcalendar + f(Y) dW           (log price)
///   dY = [ (m - Y)/epsilon - nu*sqrt(2/epsilon)*gamma ] dcalendar
///        + nu*sqrt(2/epsilon) dB,   d<W,B> = rho dcalendar,
/// the whole system then run on the stochastic clock.
struct FullModelSpec {
  VolFnKind f_kind = VolFnKind::exp_y;
  double f_const = 0.34;    ///< used when f_kind == constant
  double gamma_const = 0.2; ///< volatility risk premium (constant shape)
  double m = 0.0;
  double nu = 0.5;
  double rho = -0.3;
  double epsilon = 0.01;
  double y0 = 0.0;
};

/// f(y) for the chosen shape.
double vol_fn(const FullModelSpec& model, double y);

/// Throws std::invalid_argument on out-of-range model parameters.
void validate_model(const FullModelSpec& model);

/// Prices req.payoff by simulating the full model on the clock: one clock
/// draw per path, then an Euler path of (X, Y) over [0, T] with step
/// dt = dt_factor * epsilon.  dt_factor must be <= 1/50 (StepTooCoarse
/// otherwise).  Antithetic pairs mirror the Gaussian increments within each
/// path (same clock draw), halving variance at no bias.
McEstimate simulate_full_model(const FullModelSpec& model, const Clock& clock,
                               const PricingRequest& req, std::size_t n_paths,
                               double dt_factor, std::uint64_t seed,
                               unsigned n_threads = 1, bool antithetic = true,
                               int cir_steps = 2000);

}  // namespace tcvol
