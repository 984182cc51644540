#include "tcvol/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tcvol/errors.hpp"

namespace tcvol {

namespace {

void validate_request(const PricingRequest& req) {
  if (!std::isfinite(req.x) || !std::isfinite(req.k) || !std::isfinite(req.r)) {
    throw std::invalid_argument("price: x, k and r must be finite");
  }
  if (!std::isfinite(req.t) || req.t <= 0.0) {
    throw std::invalid_argument("price: maturity t must be positive");
  }
  if (req.payoff == PayoffKind::custom) {
    if (!req.custom || !req.custom->h) {
      throw std::invalid_argument("price: custom payoff requested but no payoff supplied");
    }
    if (!std::isfinite(req.custom->value_at_zero) ||
        !std::isfinite(req.custom->slope_at_zero)) {
      throw std::invalid_argument("price: custom payoff affine part must be finite");
    }
  }
}

struct SpectralRun {
  cplx value{0.0, 0.0};
  long n_evals = 0;
  double quad_error = 0.0;
};

/// One contour integral: discount and atom split included.  `weighted`
/// selects the correction transform; the atom is only relevant for the
/// leading order (the correction weight of a clock stuck at T = 0 vanishes).
SpectralRun run_line(const std::function<cplx(cplx)>& coefficient,
                     const GroupParams& params, const Clock& clock, double x,
                     double t, double r, const Contour& contour, bool weighted,
                     double atom, double atom_payoff_value) {
  const double scale = std::max(1.0, std::exp(x));
  LineMarchPolicy policy;
  policy.hard_cap = contour.truncation;
  policy.abs_tol = contour.tolerance * scale / 16.0;
  policy.contrib_tol = 1e-13 * scale;
  policy.edge_tol = 1e-12 * scale;

  const auto integrand = [&](double omega_r) -> cplx {
    const cplx omega(omega_r, contour.omega_i);
    const cplx lam0 = eigenvalue0(omega, params.sigma);
    cplx weight;
    if (weighted) {
      weight = weighted_laplace(clock, t, lam0, eigenvalue1_scaled(omega, params));
    } else {
      weight = laplace(clock, t, lam0) - atom;
    }
    return coefficient(omega) * weight * eigenfunction0(omega, x);
  };

  const QuadratureOutcome line = integrate_real_line(integrand, policy);
  if (!line.converged) {
    throw NonConvergent(
        "price: contour integral did not meet tolerance " +
        std::to_string(contour.tolerance) + " within |Re omega| <= " +
        std::to_string(contour.truncation) +
        (weighted ? " (correction integral)" : " (leading-order integral)"));
  }

  SpectralRun run;
  run.n_evals = line.n_evals;
  run.quad_error = line.error_estimate;
  run.value = std::exp(-r * t) * line.value;
  if (!weighted && atom != 0.0) {
    run.value += atom * std::exp(-r * t) * atom_payoff_value;
  }
  return run;
}

/// Stable remainder of the custom payoff after removing its affine part.
std::function<double(double)> reduced_payoff(const CustomPayoff& payoff) {
  if (payoff.reduced) return payoff.reduced;
  const auto h = payoff.h;
  const double h0 = payoff.value_at_zero;
  const double h1 = payoff.slope_at_zero;
  return [h, h0, h1](double s) { return h(s) - h0 - h1 * s; };
}

SpectralRun order0_run(const PricingRequest& req, const Contour& contour) {
  const double atom = atom_mass(req.clock, req.t);
  const double s_at_atom = std::exp(req.r * req.t + req.x);

  if (req.payoff == PayoffKind::custom) {
    const auto reduced = reduced_payoff(*req.custom);
    const auto coefficient = [&](cplx omega) {
      return generic_coefficient(reduced, req.t, req.r, omega);
    };
    SpectralRun run = run_line(coefficient, req.params, req.clock, req.x, req.t,
                               req.r, contour, /*weighted=*/false, atom,
                               reduced(s_at_atom));
    // Affine legs price exactly: the constant discounts, the linear leg rides
    // the martingale property of the discounted asset.
    run.value += req.custom->value_at_zero * std::exp(-req.r * req.t) +
                 req.custom->slope_at_zero * std::exp(req.x);
    return run;
  }

  const auto coefficient = [&](cplx omega) {
    return call_coefficient(omega, req.t, req.k, req.r);
  };
  SpectralRun run = run_line(coefficient, req.params, req.clock, req.x, req.t,
                             req.r, contour, /*weighted=*/false, atom,
                             std::max(s_at_atom - std::exp(req.k), 0.0));
  if (req.payoff == PayoffKind::put) {
    // Put-call parity holds exactly at every order of the expansion.
    run.value -= std::exp(req.x) - std::exp(req.k - req.r * req.t);
  }
  return run;
}

SpectralRun correction_run(const PricingRequest& req, const Contour& contour) {
  if (req.params.v2_eps == 0.0 && req.params.v3_eps == 0.0) {
    return SpectralRun{};  // correction vanishes identically
  }

  if (req.payoff == PayoffKind::custom) {
    const auto reduced = reduced_payoff(*req.custom);
    const auto coefficient = [&](cplx omega) {
      return generic_coefficient(reduced, req.t, req.r, omega);
    };
    // The affine legs contribute nothing here: the correction operator
    // annihilates constants and the discounted asset itself.
    return run_line(coefficient, req.params, req.clock, req.x, req.t, req.r,
                    contour, /*weighted=*/true, 0.0, 0.0);
  }

  const auto coefficient = [&](cplx omega) {
    return call_coefficient(omega, req.t, req.k, req.r);
  };
  // Identical for calls and puts: the parity legs carry no correction.
  return run_line(coefficient, req.params, req.clock, req.x, req.t, req.r,
                  contour, /*weighted=*/true, 0.0, 0.0);
}

}  // namespace

Contour choose_contour(const GroupParams& params, const Clock& clock) {
  const double bound = admissible_real_lower_bound(clock);
  double omega_i = -1.0;
  for (int iter = 0; iter < 60; ++iter) {
    // The transform argument along the contour is eigenvalue0(omega_r + i*omega_i),
    // whose real part is smallest at omega_r = 0.
    const double min_re =
        0.5 * params.sigma * params.sigma * (0.25 - omega_i * omega_i);
    if (std::isinf(bound) || min_re > 0.9 * bound) {
      return Contour(omega_i);
    }
    omega_i = 0.5 * (omega_i - 0.5);
  }
  throw ContourViolation(
      "choose_contour: no contour height between -1 and -1/2 keeps the "
      "transform argument inside the clock's admissible half-plane");
}

cplx price_order0(const PricingRequest& req, const Contour& contour) {
  validate_request(req);
  return order0_run(req, contour).value;
}

cplx price_correction(const PricingRequest& req, const Contour& contour) {
  validate_request(req);
  return correction_run(req, contour).value;
}

PriceResult price(const PricingRequest& req) {
  validate_request(req);
  return price(req, choose_contour(req.params, req.clock));
}

PriceResult price(const PricingRequest& req, const Contour& contour) {
  validate_request(req);
  const SpectralRun p0 = order0_run(req, contour);
  const SpectralRun p1 = correction_run(req, contour);

  PriceResult result{.p0 = p0.value.real(),
                     .correction = p1.value.real(),
                     .total = p0.value.real() + p1.value.real(),
                     .imag_residual =
                         std::abs(p0.value.imag()) + std::abs(p1.value.imag()),
                     .contour_used = contour,
                     .n_evals = p0.n_evals + p1.n_evals,
                     .quad_error = p0.quad_error + p1.quad_error};
  return result;
}

}  // namespace tcvol
