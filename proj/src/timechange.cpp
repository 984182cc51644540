#include "tcvol/timechange.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tcvol/errors.hpp"

namespace tcvol {

namespace {

void require_positive(double v, const char* name, const char* fn) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(std::string(fn) + ": " + name + " must be positive and finite");
  }
}

double cir_lower_bound(const CIRClock& c) {
  return -c.kappa * c.kappa / (2.0 * c.vol2);
}

void check_levy_domain(const LevyExpCP& clock, cplx lam, const char* fn) {
  if (!(lam.real() > -clock.jump_rate)) {
    throw DomainViolation(std::string(fn) + ": Re(lam) = " + std::to_string(lam.real()) +
                          " outside the half-plane Re(lam) > " +
                          std::to_string(-clock.jump_rate));
  }
}

void check_cir_domain(const CIRClock& clock, cplx lam, const char* fn) {
  const double bound = cir_lower_bound(clock);
  if (!(lam.real() > bound)) {
    throw DomainViolation(std::string(fn) + ": Re(lam) = " + std::to_string(lam.real()) +
                          " outside the half-plane Re(lam) > " + std::to_string(bound));
  }
}

/// Shared pieces of the square-root-clock transform.  Everything is kept in
/// log form: the naive ratio 2*g*exp((kappa-g)*t/2) / D underflows for large
/// |lam|*t, while log(2g) + (kappa-g)*t/2 - log(D) stays finite.  Both 2g and
/// D lie strictly off the negative real axis for admissible lam (|arg| < pi),
/// so the principal logs never jump branches and the sum is the analytic
/// continuation that vanishes at lam = 0.
struct CirParts {
  cplx g;        ///< sqrt(kappa^2 + 2*vol2*lam), principal branch, Re > 0
  cplx emgt;     ///< exp(-g*t)
  cplx D;        ///< (g - kappa) * exp(-g*t) + (g + kappa), never zero
  cplx U;        ///< exponent factor multiplying kappa*theta
  cplx V;        ///< exponent factor multiplying z0
};

CirParts cir_parts(const CIRClock& c, double t, cplx lam) {
  CirParts p;
  p.g = std::sqrt(cplx(c.kappa * c.kappa, 0.0) + 2.0 * c.vol2 * lam);
  p.emgt = std::exp(-p.g * t);
  p.D = (p.g - c.kappa) * p.emgt + (p.g + c.kappa);
  const cplx log_w = std::log(2.0 * p.g) + (c.kappa - p.g) * (0.5 * t) - std::log(p.D);
  p.U = (-2.0 / c.vol2) * log_w;
  p.V = 2.0 * lam * (1.0 - p.emgt) / p.D;
  return p;
}

}  // namespace

LevyExpCP::LevyExpCP(double drift_, double intensity_, double jump_rate_)
    : drift(drift_), intensity(intensity_), jump_rate(jump_rate_) {
  if (!std::isfinite(drift) || drift < 0.0) {
    throw std::invalid_argument("LevyExpCP: drift must be non-negative and finite");
  }
  require_positive(intensity, "intensity", "LevyExpCP");
  require_positive(jump_rate, "jump_rate", "LevyExpCP");
}

CIRClock::CIRClock(double kappa_, double theta_, double vol2_, double z0_)
    : kappa(kappa_), theta(theta_), vol2(vol2_), z0(z0_) {
  require_positive(kappa, "kappa", "CIRClock");
  require_positive(theta, "theta", "CIRClock");
  require_positive(vol2, "vol2", "CIRClock");
  if (!std::isfinite(z0) || z0 < 0.0) {
    throw std::invalid_argument("CIRClock: z0 must be non-negative and finite");
  }
  if (2.0 * kappa * theta < vol2) {
    throw std::invalid_argument(
        "CIRClock: Feller condition 2*kappa*theta >= vol2 violated");
  }
}

CompositeClock::CompositeClock(LevyExpCP outer_, CIRClock inner_)
    : outer(outer_), inner(inner_), admissible_bound(0.0) {
  /**
   * The composite transform is L_inner(phi_outer(lam)), so lam is admissible
   * when phi_outer(lam) clears the inner clock's divergence boundary.  On the
   * reals phi_outer increases from -infinity (at -jump_rate) to 0 (at 0), and
   * the inner bound is negative, so the critical lam* solving
   * phi_outer(lam*) = inner bound lies in (-jump_rate, 0): bisect for it.
   * For complex lam, Re(phi(lam)) >= phi(Re(lam)), so the real bound governs
   * the whole half-plane.
   */
  const double target = cir_lower_bound(inner);
  double lo = -outer.jump_rate;
  double hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double phi_mid =
        outer.drift * mid + outer.intensity * mid / (mid + outer.jump_rate);
    if (phi_mid > target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  admissible_bound = hi;
}

cplx levy_exponent(const LevyExpCP& clock, cplx lam) {
  check_levy_domain(clock, lam, "levy_exponent");
  return clock.drift * lam + clock.intensity * lam / (lam + clock.jump_rate);
}

cplx levy_exponent_derivative(const LevyExpCP& clock, cplx lam) {
  check_levy_domain(clock, lam, "levy_exponent_derivative");
  const cplx shifted = lam + clock.jump_rate;
  return clock.drift + clock.intensity * clock.jump_rate / (shifted * shifted);
}

cplx cir_laplace(const CIRClock& clock, double t, cplx lam) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("cir_laplace: t must be non-negative and finite");
  }
  check_cir_domain(clock, lam, "cir_laplace");
  const CirParts p = cir_parts(clock, t, lam);
  return std::exp(-clock.kappa * clock.theta * p.U - clock.z0 * p.V);
}

cplx cir_laplace_dlam(const CIRClock& clock, double t, cplx lam) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("cir_laplace_dlam: t must be non-negative and finite");
  }
  check_cir_domain(clock, lam, "cir_laplace_dlam");
  const CirParts p = cir_parts(clock, t, lam);

  // dD/dg, with D = (g - kappa) * exp(-g t) + (g + kappa).
  const cplx D_g = p.emgt * (1.0 - t * (p.g - clock.kappa)) + 1.0;

  // Chain rule through g: dg/dlam = vol2 / g.
  const cplx dU = -2.0 / (p.g * p.g) + t / p.g + (2.0 / p.g) * (D_g / p.D);
  const cplx dV = 2.0 * (1.0 - p.emgt) / p.D +
                  2.0 * lam * (clock.vol2 / p.g) *
                      (t * p.emgt * p.D - (1.0 - p.emgt) * D_g) / (p.D * p.D);

  const cplx L = std::exp(-clock.kappa * clock.theta * p.U - clock.z0 * p.V);
  return L * (-clock.kappa * clock.theta * dU - clock.z0 * dV);
}

double admissible_real_lower_bound(const Clock& clock) {
  return std::visit(
      [](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IdentityClock>) {
          return -std::numeric_limits<double>::infinity();
        } else if constexpr (std::is_same_v<T, LevyExpCP>) {
          return -c.jump_rate;
        } else if constexpr (std::is_same_v<T, CIRClock>) {
          return cir_lower_bound(c);
        } else if constexpr (std::is_same_v<T, CompositeClock>) {
          return c.admissible_bound;
        } else {
          return c.lower_bound;
        }
      },
      clock);
}

double atom_mass(const Clock& clock, double t) {
  return std::visit(
      [t](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LevyExpCP>) {
          // With zero drift the clock only moves by jumps; no jump by time t
          // has probability exp(-intensity * t).
          return c.drift == 0.0 ? std::exp(-c.intensity * t) : 0.0;
        } else if constexpr (std::is_same_v<T, CompositeClock>) {
          if (c.outer.drift != 0.0) return 0.0;
          // The jump count is Poisson conditional on the inner clock, so the
          // no-jump probability is the inner transform at the intensity.
          return cir_laplace(c.inner, t, cplx(c.outer.intensity, 0.0)).real();
        } else if constexpr (std::is_same_v<T, GenericLevyClock>) {
          return c.atom_mass_fn ? c.atom_mass_fn(t) : 0.0;
        } else {
          return 0.0;
        }
      },
      clock);
}

cplx laplace(const Clock& clock, double t, cplx lam) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("laplace: t must be non-negative and finite");
  }
  return std::visit(
      [&](const auto& c) -> cplx {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IdentityClock>) {
          return std::exp(-lam * t);
        } else if constexpr (std::is_same_v<T, LevyExpCP>) {
          return std::exp(-levy_exponent(c, lam) * t);
        } else if constexpr (std::is_same_v<T, CIRClock>) {
          return cir_laplace(c, t, lam);
        } else if constexpr (std::is_same_v<T, CompositeClock>) {
          if (!(lam.real() > c.admissible_bound)) {
            throw DomainViolation("laplace: Re(lam) outside the composite half-plane Re(lam) > " +
                                  std::to_string(c.admissible_bound));
          }
          const cplx inner_arg = levy_exponent(c.outer, lam);
          return cir_laplace(c.inner, t, inner_arg);
        } else {
          if (!(lam.real() > c.lower_bound)) {
            throw DomainViolation("laplace: Re(lam) outside the user clock's half-plane");
          }
          return std::exp(-c.exponent(lam) * t);
        }
      },
      clock);
}

cplx weighted_laplace(const Clock& clock, double t, cplx lam0, cplx lam1_scaled) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("weighted_laplace: t must be non-negative and finite");
  }
  return std::visit(
      [&](const auto& c) -> cplx {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IdentityClock>) {
          return -lam1_scaled * t * std::exp(-lam0 * t);
        } else if constexpr (std::is_same_v<T, LevyExpCP>) {
          // E[T exp(-phi(lam0) T)] over the deterministic t just rescales by
          // phi'(lam0) through the subordinator's chain rule.
          return -lam1_scaled * levy_exponent_derivative(c, lam0) * t *
                 std::exp(-levy_exponent(c, lam0) * t);
        } else if constexpr (std::is_same_v<T, CIRClock>) {
          return lam1_scaled * cir_laplace_dlam(c, t, lam0);
        } else if constexpr (std::is_same_v<T, CompositeClock>) {
          if (!(lam0.real() > c.admissible_bound)) {
            throw DomainViolation(
                "weighted_laplace: Re(lam0) outside the composite half-plane Re(lam) > " +
                std::to_string(c.admissible_bound));
          }
          const cplx inner_arg = levy_exponent(c.outer, lam0);
          return lam1_scaled * levy_exponent_derivative(c.outer, lam0) *
                 cir_laplace_dlam(c.inner, t, inner_arg);
        } else {
          if (!(lam0.real() > c.lower_bound)) {
            throw DomainViolation("weighted_laplace: Re(lam0) outside the user clock's half-plane");
          }
          return -lam1_scaled * c.exponent_derivative(lam0) * t *
                 std::exp(-c.exponent(lam0) * t);
        }
      },
      clock);
}

}  // namespace tcvol
