#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace tcvol {

using cplx = std::complex<double>;

// ============================================================================
// Compensated summation
// ============================================================================

/// Neumaier variant of Kahan summation: exact to one ulp of the running sum
/// even when terms exceed the partial sum in magnitude.
class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ============================================================================
// Quadrature
// ============================================================================

struct QuadratureOutcome {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;  ///< sum of per-panel |K15 - G7| error bounds
  long n_evals = 0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod (G7, K15) on a finite interval to an absolute
/// tolerance.  Globally adaptive: always splits the panel with the largest
/// error estimate.  `converged == false` when the panel budget is exhausted
/// before the tolerance is met.
QuadratureOutcome integrate_adaptive(const std::function<cplx(double)>& f,
                                     double a, double b, double abs_tol,
                                     int max_panels = 2000);

/// Real-valued convenience wrapper around integrate_adaptive.
double integrate_adaptive_real(const std::function<double(double)>& f,
                               double a, double b, double abs_tol,
                               int max_panels = 2000);

/// Controls for whole-line integration (see integrate_real_line).
struct LineMarchPolicy {
  double block_width = 4.0;    ///< width of one marching block per side
  double hard_cap = 1000.0;    ///< give up once |omega| exceeds this
  double abs_tol = 1e-10;      ///< per-block adaptive tolerance
  double contrib_tol = 1e-13;  ///< block pair negligible below this magnitude
  double edge_tol = 1e-12;     ///< ... or when |f| at both outer edges is below this
  int consecutive_negligible = 5;  ///< negligible pairs required to stop
};

/// Integrates f over the whole real line by marching mirrored blocks
/// [j*w, (j+1)*w] and [-(j+1)*w, -j*w] outward from the origin.  Both
/// half-lines are integrated independently -- no symmetry shortcut -- so the
/// imaginary part of the result is a genuine diagnostic for integrands that
/// should produce real values.
///
/// Termination: after `consecutive_negligible` successive block pairs whose
/// contribution is below `contrib_tol` or whose outer-edge integrand values
/// are both below `edge_tol`.  If |omega| reaches `hard_cap` first, the
/// outcome is flagged `converged == false`; deciding whether that is fatal is
/// the caller's business.
QuadratureOutcome integrate_real_line(const std::function<cplx(double)>& f,
                                      const LineMarchPolicy& policy);

// ============================================================================
// Parallel Monte Carlo reduction
// ============================================================================

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

struct McComplexEstimate {
  cplx mean{0.0, 0.0};
  double std_error = 0.0;  ///< sqrt((Var Re + Var Im) / n)
  std::size_t n = 0;
};

/// Evaluates path_value(i) for i in [0, n_paths) across threads and reduces
/// to a mean and standard error.  Accumulation is chunked (4096 paths per
/// chunk) with compensated partial sums combined in chunk order, so the
/// result is independent of the thread count.  n_threads == 0 means "use all
/// hardware threads".
McEstimate mc_reduce(std::size_t n_paths, unsigned n_threads,
                     const std::function<double(std::size_t)>& path_value);

/// Complex-valued variant; the reported standard error aggregates the
/// variances of the real and imaginary parts.
McComplexEstimate mc_reduce_complex(std::size_t n_paths, unsigned n_threads,
                                    const std::function<cplx(std::size_t)>& path_value);

}  // namespace tcvol
