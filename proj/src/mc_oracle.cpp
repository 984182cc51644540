#include "tcvol/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tcvol/errors.hpp"
#include "tcvol/impliedvol.hpp"

namespace tcvol {

namespace {

/// Poisson count by Knuth's product-of-uniforms method; exact for any mean,
/// cost linear in the mean (our intensities keep the mean modest).
int poisson_count(double mean, Xoshiro256pp& rng) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.next_uniform();
  } while (p > limit);
  return k - 1;
}

/// Subordinator draw over an elapsed time `span`.
double levy_draw(const LevyExpCP& c, double span, Xoshiro256pp& rng) {
  double total = c.drift * span;
  const int jumps = poisson_count(c.intensity * span, rng);
  for (int j = 0; j < jumps; ++j) {
    total += -std::log(rng.next_uniform()) / c.jump_rate;
  }
  return total;
}

/// Integrated activity rate by full-truncation Euler plus trapezoid.
double cir_draw(const CIRClock& c, double t, int steps, Xoshiro256pp& rng) {
  const double dt = t / steps;
  const double sqrt_dt = std::sqrt(dt);
  double z = c.z0;
  double prev_pos = std::max(z, 0.0);
  double integral = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double z_pos = std::max(z, 0.0);
    z += c.kappa * (c.theta - z_pos) * dt +
         std::sqrt(c.vol2 * z_pos) * sqrt_dt * rng.next_normal();
    const double next_pos = std::max(z, 0.0);
    integral += 0.5 * (prev_pos + next_pos) * dt;
    prev_pos = next_pos;
  }
  return integral;
}

}  // namespace

double sample_clock(const Clock& clock, double t, Xoshiro256pp& rng, int cir_steps) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("sample_clock: t must be non-negative and finite");
  }
  if (cir_steps < 1) {
    throw std::invalid_argument("sample_clock: cir_steps must be at least 1");
  }
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IdentityClock>) {
          return t;
        } else if constexpr (std::is_same_v<T, LevyExpCP>) {
          return levy_draw(c, t, rng);
        } else if constexpr (std::is_same_v<T, CIRClock>) {
          return cir_draw(c, t, cir_steps, rng);
        } else if constexpr (std::is_same_v<T, CompositeClock>) {
          const double inner = cir_draw(c.inner, t, cir_steps, rng);
          return levy_draw(c.outer, inner, rng);
        } else {
          throw std::invalid_argument(
              "sample_clock: user-defined clocks expose no sampling law");
        }
      },
      clock);
}

double conditional_bs_value(double clock_value, double x, double t, double k,
                            double r, double sigma) {
  if (!(clock_value >= 0.0)) {
    throw std::invalid_argument("conditional_bs_value: clock value must be >= 0");
  }
  const double forward_log = r * t + x;
  if (clock_value == 0.0) {
    return std::max(std::exp(forward_log) - std::exp(k), 0.0);
  }
  const double stdev = sigma * std::sqrt(clock_value);
  const double d_plus = (forward_log - k) / stdev + 0.5 * stdev;
  const double d_minus = d_plus - stdev;
  return std::exp(forward_log) * norm_cdf(d_plus) - std::exp(k) * norm_cdf(d_minus);
}

McEstimate mc_price_order0(const PricingRequest& req, std::size_t n_paths,
                           std::uint64_t seed, unsigned n_threads, int cir_steps) {
  if (req.payoff == PayoffKind::custom) {
    throw std::invalid_argument(
        "mc_price_order0: only call/put payoffs have a conditional closed form");
  }
  const double discount = std::exp(-req.r * req.t);
  const auto path_value = [&](std::size_t i) -> double {
    Xoshiro256pp rng = Xoshiro256pp::for_stream(seed, i);
    const double T = sample_clock(req.clock, req.t, rng, cir_steps);
    return discount * conditional_bs_value(T, req.x, req.t, req.k, req.r,
                                           req.params.sigma);
  };
  McEstimate est = mc_reduce(n_paths, n_threads, path_value);
  if (req.payoff == PayoffKind::put) {
    est.mean -= std::exp(req.x) - std::exp(req.k - req.r * req.t);
  }
  return est;
}

McComplexEstimate mc_weighted_laplace(const Clock& clock, double t, cplx lam0,
                                      cplx lam1_scaled, std::size_t n_paths,
                                      std::uint64_t seed, unsigned n_threads,
                                      int cir_steps) {
  const auto path_value = [&](std::size_t i) -> cplx {
    Xoshiro256pp rng = Xoshiro256pp::for_stream(seed, i);
    const double T = sample_clock(clock, t, rng, cir_steps);
    return -lam1_scaled * T * std::exp(-lam0 * T);
  };
  return mc_reduce_complex(n_paths, n_threads, path_value);
}

double vol_fn(const FullModelSpec& model, double y) {
  return model.f_kind == VolFnKind::exp_y ? std::exp(y) : model.f_const;
}

void validate_model(const FullModelSpec& model) {
  if (!(model.nu > 0.0) || !std::isfinite(model.nu)) {
    throw std::invalid_argument("FullModelSpec: nu must be positive");
  }
  if (!(model.epsilon > 0.0) || !std::isfinite(model.epsilon)) {
    throw std::invalid_argument("FullModelSpec: epsilon must be positive");
  }
  if (!(model.rho > -1.0) || !(model.rho < 1.0)) {
    throw std::invalid_argument("FullModelSpec: rho must lie in (-1, 1)");
  }
  if (model.f_kind == VolFnKind::constant && !(model.f_const > 0.0)) {
    throw std::invalid_argument("FullModelSpec: f_const must be positive");
  }
  if (!std::isfinite(model.m) || !std::isfinite(model.y0) ||
      !std::isfinite(model.gamma_const)) {
    throw std::invalid_argument("FullModelSpec: m, y0, gamma_const must be finite");
  }
}

McEstimate simulate_full_model(const FullModelSpec& model, const Clock& clock,
                               const PricingRequest& req, std::size_t n_paths,
                               double dt_factor, std::uint64_t seed,
                               unsigned n_threads, bool antithetic, int cir_steps) {
  validate_model(model);
  if (!(dt_factor > 0.0)) {
    throw std::invalid_argument("simulate_full_model: dt_factor must be positive");
  }
  if (dt_factor > 1.0 / 50.0) {
    throw StepTooCoarse(
        "simulate_full_model: dt_factor must be <= 1/50 so the Euler step "
        "resolves the fast factor's mean reversion");
  }
  if (req.payoff == PayoffKind::custom && (!req.custom || !req.custom->h)) {
    throw std::invalid_argument("simulate_full_model: custom payoff missing");
  }

  const double strike = std::exp(req.k);
  const auto payoff_value = [&](double s) -> double {
    switch (req.payoff) {
      case PayoffKind::call:
        return std::max(s - strike, 0.0);
      case PayoffKind::put:
        return std::max(strike - s, 0.0);
      case PayoffKind::custom:
        return req.custom->h(s);
    }
    return 0.0;
  };

  const double discount = std::exp(-req.r * req.t);
  const double forward_shift = req.r * req.t;
  const double dt_target = dt_factor * model.epsilon;
  const double vol_of_vol = model.nu * std::sqrt(2.0 / model.epsilon);
  const double rho_perp = std::sqrt(1.0 - model.rho * model.rho);

  // One Euler leg over [0, T]; `sign` mirrors the Gaussian increments for the
  // antithetic partner.  Both legs replay the same generator state, so they
  // consume identical draws and stay in lockstep.
  const auto euler_leg = [&](Xoshiro256pp rng, double T, double sign) -> double {
    if (T <= 0.0) {
      return payoff_value(std::exp(forward_shift + req.x));
    }
    const long n_steps = std::max(1L, static_cast<long>(std::ceil(T / dt_target)));
    const double dt = T / static_cast<double>(n_steps);
    const double sqrt_dt = std::sqrt(dt);
    double x = req.x;
    double y = model.y0;
    for (long i = 0; i < n_steps; ++i) {
      const double xi_b = sign * rng.next_normal();
      const double xi_w = sign * rng.next_normal();
      const double f = vol_fn(model, y);
      const double dw = sqrt_dt * (model.rho * xi_b + rho_perp * xi_w);
      x += -0.5 * f * f * dt + f * dw;
      y += ((model.m - y) / model.epsilon - vol_of_vol * model.gamma_const) * dt +
           vol_of_vol * sqrt_dt * xi_b;
    }
    return payoff_value(std::exp(forward_shift + x));
  };

  const auto path_value = [&](std::size_t i) -> double {
    Xoshiro256pp rng = Xoshiro256pp::for_stream(seed, i);
    const double T = sample_clock(clock, req.t, rng, cir_steps);
    if (!antithetic) {
      return discount * euler_leg(rng, T, +1.0);
    }
    // The pair shares the clock draw and the post-draw generator state.
    const double leg_up = euler_leg(rng, T, +1.0);
    const double leg_dn = euler_leg(rng, T, -1.0);
    return discount * 0.5 * (leg_up + leg_dn);
  };

  return mc_reduce(n_paths, n_threads, path_value);
}

}  // namespace tcvol
