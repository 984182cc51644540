#include "tcvol/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tcvol/errors.hpp"

namespace tcvol {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // (2*pi)^(-1/2)
constexpr double kSqrt2Pi = 2.5066282746310005024;

void require_finite(double v, const char* name, const char* fn) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(fn) + ": " + name + " must be finite");
  }
}
}  // namespace

GroupParams::GroupParams(double sigma_, double v2_eps_, double v3_eps_)
    : sigma(sigma_), v2_eps(v2_eps_), v3_eps(v3_eps_) {
  require_finite(sigma, "sigma", "GroupParams");
  require_finite(v2_eps, "v2_eps", "GroupParams");
  require_finite(v3_eps, "v3_eps", "GroupParams");
  if (sigma <= 0.0) {
    throw std::invalid_argument("GroupParams: sigma must be positive");
  }
}

Contour::Contour(double omega_i_, double truncation_, double tolerance_)
    : omega_i(omega_i_), truncation(truncation_), tolerance(tolerance_) {
  require_finite(omega_i, "omega_i", "Contour");
  if (!(omega_i < -0.5)) {
    throw ContourViolation("Contour: omega_i must lie strictly below -1/2, got " +
                           std::to_string(omega_i));
  }
  if (!(truncation > 0.0) || !(tolerance > 0.0)) {
    throw std::invalid_argument("Contour: truncation and tolerance must be positive");
  }
}

cplx eigenvalue0(cplx omega, double sigma) {
  return 0.5 * sigma * sigma * (omega * omega + 0.25);
}

cplx eigenvalue1_scaled(cplx omega, const GroupParams& params) {
  const cplx b = cplx(0.0, 1.0) * omega + 0.5;
  const cplx b2 = b * b;
  return -params.v3_eps * (b2 * b - b2) - params.v2_eps * (b2 - b);
}

cplx eigenfunction0(cplx omega, double x) {
  return kInvSqrt2Pi * std::exp((cplx(0.0, 1.0) * omega + 0.5) * x);
}

cplx call_coefficient(cplx omega, double t, double k, double r) {
  require_finite(t, "t", "call_coefficient");
  require_finite(k, "k", "call_coefficient");
  require_finite(r, "r", "call_coefficient");
  if (t < 0.0) {
    throw std::invalid_argument("call_coefficient: t must be non-negative");
  }

  const cplx i{0.0, 1.0};
  const cplx denom = 1.0 + 4.0 * omega * omega;
  if (std::abs(denom) < 1e-12) {
    throw ContourViolation(
        "call_coefficient: omega coincides with the pole at |Im(omega)| = 1/2");
  }

  // Projection of the call payoff; the exp(k*(1/2 - i*omega)) factor is the
  // transform of the strike boundary, the two bracketed terms carry the stock
  // and bond legs.
  const cplx strike_factor = std::exp(k * (0.5 - i * omega));
  const cplx numer = strike_factor * (4.0 * i * omega - 2.0) -
                     std::exp(r * t) * strike_factor * (4.0 * i * omega + 2.0);
  return numer / (kSqrt2Pi * denom);
}

cplx generic_coefficient(const std::function<double(double)>& payoff, double t,
                         double r, cplx omega, double window_lo,
                         double window_hi, double abs_tol) {
  require_finite(t, "t", "generic_coefficient");
  require_finite(r, "r", "generic_coefficient");
  if (t < 0.0) {
    throw std::invalid_argument("generic_coefficient: t must be non-negative");
  }
  if (!(window_lo < window_hi)) {
    throw std::invalid_argument("generic_coefficient: empty log-price window");
  }

  const double rt = r * t;
  const cplx exponent = -cplx(0.0, 1.0) * omega - 0.5;
  const auto integrand = [&](double x) -> cplx {
    return kInvSqrt2Pi * std::exp(exponent * x) * payoff(std::exp(rt + x));
  };

  /**
   * Widen the window until the integrand is negligible at both edges.  The
   * defaults cover payoffs with at-most-linear growth in price when the
   * contour sits at Im(omega) < -1/2; payoffs decaying slower than that never
   * satisfy the edge test and are reported as non-convergent.
   */
  constexpr double kEdgeTol = 1e-12;
  constexpr double kMaxHalfWidth = 400.0;
  double lo = std::min(window_lo, -1.0);
  double hi = std::max(window_hi, 1.0);
  while (std::abs(integrand(lo)) > kEdgeTol) {
    lo *= 1.5;
    if (lo < -kMaxHalfWidth) {
      throw NonConvergent(
          "generic_coefficient: integrand has not decayed by x = -400; payoff "
          "grows too fast or contour too shallow");
    }
  }
  while (std::abs(integrand(hi)) > kEdgeTol) {
    hi *= 1.5;
    if (hi > kMaxHalfWidth) {
      throw NonConvergent(
          "generic_coefficient: integrand has not decayed by x = +400; payoff "
          "grows too fast or contour too shallow");
    }
  }

  const QuadratureOutcome outcome = integrate_adaptive(integrand, lo, hi, abs_tol, 4000);
  if (!outcome.converged) {
    throw NonConvergent("generic_coefficient: quadrature tolerance not met");
  }
  return outcome.value;
}

}  // namespace tcvol
