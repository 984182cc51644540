#include "tcvol/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <queue>
#include <thread>
#include <vector>

#include "tcvol/errors.hpp"

namespace tcvol {

namespace {

// ----------------------------------------------------------------------------
// (G7, K15) Gauss-Kronrod pair on [-1, 1].  Nodes and weights are the classic
// QUADPACK dqk15 constants; the Gauss weights apply to the even-indexed nodes.
// ----------------------------------------------------------------------------
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};

constexpr double kGaussWeights[4] = {0.129484966168870, 0.279705391489277,
                                     0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b;
  cplx integral;
  double error;
};

struct PanelOrder {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    return lhs.error < rhs.error;
  }
};

bool non_finite(const cplx& v) {
  return !std::isfinite(v.real()) || !std::isfinite(v.imag());
}

/// One (G7, K15) evaluation over [a, b].  Fifteen integrand calls.
Panel kronrod_panel(const std::function<cplx(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  cplx k15{0.0, 0.0};
  cplx g7{0.0, 0.0};
  for (int i = 0; i < 8; ++i) {
    cplx value;
    if (i == 7) {
      value = f(mid);
    } else {
      value = f(mid - half * kKronrodNodes[i]) + f(mid + half * kKronrodNodes[i]);
    }
    k15 += kKronrodWeights[i] * value;
    if (i % 2 == 1) g7 += kGaussWeights[i / 2] * value;
  }
  if (non_finite(k15)) {
    throw QuadratureFailure("integrate_adaptive: integrand returned a non-finite value");
  }
  return Panel{a, b, half * k15, std::abs(half * (k15 - g7))};
}

}  // namespace

QuadratureOutcome integrate_adaptive(const std::function<cplx(double)>& f,
                                     double a, double b, double abs_tol,
                                     int max_panels) {
  QuadratureOutcome outcome;
  if (a == b) return outcome;

  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> panels;
  panels.push(kronrod_panel(f, a, b));
  outcome.n_evals = 15;

  double total_error = panels.top().error;
  int panel_count = 1;
  while (total_error > abs_tol && panel_count < max_panels) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval no longer splittable in double precision; keep its estimate.
      panels.push(worst);
      break;
    }
    const Panel left = kronrod_panel(f, worst.a, mid);
    const Panel right = kronrod_panel(f, mid, worst.b);
    outcome.n_evals += 30;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++panel_count;
  }

  NeumaierSum re, im, err;
  while (!panels.empty()) {
    const Panel& p = panels.top();
    re.add(p.integral.real());
    im.add(p.integral.imag());
    err.add(p.error);
    panels.pop();
  }
  outcome.value = cplx(re.value(), im.value());
  outcome.error_estimate = err.value();
  outcome.converged = outcome.error_estimate <= abs_tol;
  return outcome;
}

double integrate_adaptive_real(const std::function<double(double)>& f,
                               double a, double b, double abs_tol,
                               int max_panels) {
  const auto wrapped = [&f](double x) { return cplx(f(x), 0.0); };
  const QuadratureOutcome outcome = integrate_adaptive(wrapped, a, b, abs_tol, max_panels);
  if (!outcome.converged) {
    throw NonConvergent("integrate_adaptive_real: tolerance not met on [" +
                        std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return outcome.value.real();
}

QuadratureOutcome integrate_real_line(const std::function<cplx(double)>& f,
                                      const LineMarchPolicy& policy) {
  QuadratureOutcome total;
  NeumaierSum re, im, err;
  const double w = policy.block_width;

  int negligible_run = 0;
  bool stopped_by_tail = false;
  for (int j = 0;; ++j) {
    const double lo = j * w;
    const double hi = (j + 1) * w;
    if (hi > policy.hard_cap) break;

    const QuadratureOutcome right = integrate_adaptive(f, lo, hi, policy.abs_tol);
    const QuadratureOutcome left = integrate_adaptive(f, -hi, -lo, policy.abs_tol);
    total.n_evals += right.n_evals + left.n_evals;
    total.converged = total.converged && right.converged && left.converged;

    re.add(right.value.real());
    re.add(left.value.real());
    im.add(right.value.imag());
    im.add(left.value.imag());
    err.add(right.error_estimate);
    err.add(left.error_estimate);

    const double contribution = std::abs(right.value) + std::abs(left.value);
    const double edge = std::max(std::abs(f(hi)), std::abs(f(-hi)));
    total.n_evals += 2;
    if (contribution < policy.contrib_tol || edge < policy.edge_tol) {
      if (++negligible_run >= policy.consecutive_negligible) {
        stopped_by_tail = true;
        break;
      }
    } else {
      negligible_run = 0;
    }
  }

  total.value = cplx(re.value(), im.value());
  total.error_estimate = err.value();
  if (!stopped_by_tail) total.converged = false;
  return total;
}

namespace {

struct ChunkPartial {
  double sum_re = 0.0;
  double sum_im = 0.0;
  double sum_sq = 0.0;  ///< sum of |value|^2 (squared modulus for complex)
};

/// Shared chunked reduction: workers claim 4096-path chunks from an atomic
/// counter, accumulate compensated partials per chunk, and the partials are
/// folded in chunk order afterwards -- the result cannot depend on thread
/// scheduling.
template <typename Value, typename PathFn, typename Split>
void run_chunks(std::size_t n_paths, unsigned n_threads, const PathFn& path_value,
                const Split& split, std::vector<ChunkPartial>& partials) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t n_chunks = (n_paths + kChunk - 1) / kChunk;
  partials.assign(n_chunks, ChunkPartial{});

  if (n_threads == 0) {
    n_threads = std::max(1u, std::thread::hardware_concurrency());
  }
  n_threads = static_cast<unsigned>(
      std::min<std::size_t>(n_threads, std::max<std::size_t>(n_chunks, 1)));

  std::atomic<std::size_t> next_chunk{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      const std::size_t begin = c * kChunk;
      const std::size_t end = std::min(begin + kChunk, n_paths);
      NeumaierSum re, im, sq;
      for (std::size_t i = begin; i < end; ++i) {
        const Value v = path_value(i);
        double vr, vi;
        split(v, vr, vi);
        re.add(vr);
        im.add(vi);
        sq.add(vr * vr + vi * vi);
      }
      partials[c] = ChunkPartial{re.value(), im.value(), sq.value()};
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
}

}  // namespace

McEstimate mc_reduce(std::size_t n_paths, unsigned n_threads,
                     const std::function<double(std::size_t)>& path_value) {
  if (n_paths == 0) return McEstimate{};
  std::vector<ChunkPartial> partials;
  run_chunks<double>(n_paths, n_threads, path_value,
                     [](double v, double& re, double& im) {
                       re = v;
                       im = 0.0;
                     },
                     partials);

  NeumaierSum sum, sum_sq;
  for (const auto& p : partials) {
    sum.add(p.sum_re);
    sum_sq.add(p.sum_sq);
  }
  McEstimate est;
  est.n = n_paths;
  const double n = static_cast<double>(n_paths);
  est.mean = sum.value() / n;
  if (n_paths > 1) {
    const double var = std::max(0.0, (sum_sq.value() - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

McComplexEstimate mc_reduce_complex(std::size_t n_paths, unsigned n_threads,
                                    const std::function<cplx(std::size_t)>& path_value) {
  if (n_paths == 0) return McComplexEstimate{};
  std::vector<ChunkPartial> partials;
  run_chunks<cplx>(n_paths, n_threads, path_value,
                   [](const cplx& v, double& re, double& im) {
                     re = v.real();
                     im = v.imag();
                   },
                   partials);

  NeumaierSum sum_re, sum_im, sum_sq;
  for (const auto& p : partials) {
    sum_re.add(p.sum_re);
    sum_im.add(p.sum_im);
    sum_sq.add(p.sum_sq);
  }
  McComplexEstimate est;
  est.n = n_paths;
  const double n = static_cast<double>(n_paths);
  est.mean = cplx(sum_re.value() / n, sum_im.value() / n);
  if (n_paths > 1) {
    const double var =
        std::max(0.0, (sum_sq.value() - n * std::norm(est.mean)) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

}  // namespace tcvol
