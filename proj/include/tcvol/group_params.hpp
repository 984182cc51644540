#pragma once

#include <utility>
#include <vector>

#include "tcvol/mc_oracle.hpp"
#include "tcvol/spectral.hpp"

namespace tcvol {

// ============================================================================
// From the concrete two-factor model to the three effective parameters.
//
// The fast factor's stationary law is N(m, nu^2).  Averaging f^2 over it
// gives sigma^2; the first-order amplitudes come from moments of the
// derivative of the solution of the centering (Poisson) equation
//
//   nu^2 * Phi'' + (m - y) * Phi' = f(y)^2 - sigma^2,
//
// solved with an integrating factor against the stationary density.
// ============================================================================

/// Gauss-Hermite rule for integrals against exp(-u^2): nodes and weights,
/// computed by Newton iteration on the orthonormal recurrence (no external
/// linear algebra).  Exposed for tests.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Tabulated solution of the centering equation.
struct PoissonSolution {
  std::vector<double> y;      ///< uniform grid over [m - 8 nu, m + 8 nu]
  std::vector<double> dphi;   ///< Phi'(y) on the grid
  std::vector<double> ddphi;  ///< Phi''(y) from the ODE itself
  double sigma2 = 0.0;
  double centering_residual = 0.0;  ///< | <f^2 - sigma^2> | after quadrature

  /// Phi'(y) by cubic Hermite interpolation (the ODE supplies exact slopes).
  /// Clamped to the tabulated window.
  double phi_prime(double y_eval) const;
};

/// Computes (sigma, v2_eps, v3_eps) and the Poisson-equation solution for the
/// model.  sigma^2 uses Gauss-Hermite quadrature against the stationary law;
/// the moment integrals use the identity <g * Phi'> = (1/nu^2) * Integral of
/// g(y) * I(y) dy with I the cumulative centering integral, which avoids
/// dividing by the tiny Gaussian density in the tails.
/// Throws QuadratureFailure if the centering residual exceeds 1e-8.
std::pair<GroupParams, PoissonSolution> group_params_from_model(
    const FullModelSpec& model);

}  // namespace tcvol
