#include "tcvol/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "tcvol/errors.hpp"
#include "tcvol/impliedvol.hpp"

namespace tcvol {

namespace {

/// Default search boxes per parameter; a config can narrow or widen them.
const std::map<std::string, std::pair<double, double>>& default_bounds() {
  static const std::map<std::string, std::pair<double, double>> bounds = {
      {"sigma", {0.01, 3.0}},  {"v2_eps", {-1.0, 1.0}}, {"v3_eps", {-1.0, 1.0}},
      {"gamma", {0.0, 5.0}},   {"alpha", {1e-4, 20.0}}, {"eta", {1e-4, 20.0}},
      {"kappa", {1e-3, 20.0}}, {"theta", {1e-3, 20.0}}, {"sigma2", {1e-6, 50.0}},
      {"z0", {0.0, 50.0}}};
  return bounds;
}

double clock_param(const Clock& clock, const std::string& name, bool& found) {
  found = true;
  if (const auto* levy = std::get_if<LevyExpCP>(&clock)) {
    if (name == "gamma") return levy->drift;
    if (name == "alpha") return levy->intensity;
    if (name == "eta") return levy->jump_rate;
  } else if (const auto* cir = std::get_if<CIRClock>(&clock)) {
    if (name == "kappa") return cir->kappa;
    if (name == "theta") return cir->theta;
    if (name == "sigma2") return cir->vol2;
    if (name == "z0") return cir->z0;
  } else if (const auto* comp = std::get_if<CompositeClock>(&clock)) {
    if (name == "gamma") return comp->outer.drift;
    if (name == "alpha") return comp->outer.intensity;
    if (name == "eta") return comp->outer.jump_rate;
    if (name == "kappa") return comp->inner.kappa;
    if (name == "theta") return comp->inner.theta;
    if (name == "sigma2") return comp->inner.vol2;
    if (name == "z0") return comp->inner.z0;
  }
  found = false;
  return 0.0;
}

Clock clock_with_param(const Clock& clock, const std::string& name, double value) {
  if (const auto* levy = std::get_if<LevyExpCP>(&clock)) {
    double g = levy->drift, a = levy->intensity, e = levy->jump_rate;
    if (name == "gamma") g = value;
    else if (name == "alpha") a = value;
    else if (name == "eta") e = value;
    return LevyExpCP(g, a, e);
  }
  if (const auto* cir = std::get_if<CIRClock>(&clock)) {
    double k = cir->kappa, th = cir->theta, v = cir->vol2, z = cir->z0;
    if (name == "kappa") k = value;
    else if (name == "theta") th = value;
    else if (name == "sigma2") v = value;
    else if (name == "z0") z = value;
    return CIRClock(k, th, v, z);
  }
  if (const auto* comp = std::get_if<CompositeClock>(&clock)) {
    double g = comp->outer.drift, a = comp->outer.intensity, e = comp->outer.jump_rate;
    double k = comp->inner.kappa, th = comp->inner.theta, v = comp->inner.vol2,
           z = comp->inner.z0;
    if (name == "gamma") g = value;
    else if (name == "alpha") a = value;
    else if (name == "eta") e = value;
    else if (name == "kappa") k = value;
    else if (name == "theta") th = value;
    else if (name == "sigma2") v = value;
    else if (name == "z0") z = value;
    return CompositeClock(LevyExpCP(g, a, e), CIRClock(k, th, v, z));
  }
  return clock;
}

}  // namespace

double get_param(const RunConfig& config, const std::string& name) {
  if (name == "sigma") return config.params.sigma;
  if (name == "v2_eps") return config.params.v2_eps;
  if (name == "v3_eps") return config.params.v3_eps;
  bool found = false;
  const double value = clock_param(config.clock, name, found);
  if (!found) {
    throw std::invalid_argument("get_param: parameter '" + name +
                                "' does not apply to the configured clock");
  }
  return value;
}

RunConfig with_params(const RunConfig& base, const std::vector<FreeParam>& params,
                      const std::vector<double>& values) {
  double sigma = base.params.sigma;
  double v2 = base.params.v2_eps;
  double v3 = base.params.v3_eps;
  Clock clock = base.clock;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::string& name = params[i].name;
    if (name == "sigma") {
      sigma = values[i];
    } else if (name == "v2_eps") {
      v2 = values[i];
    } else if (name == "v3_eps") {
      v3 = values[i];
    } else {
      clock = clock_with_param(clock, name, values[i]);
    }
  }
  RunConfig out = base;
  out.params = GroupParams(sigma, v2, v3);
  out.clock = clock;
  return out;
}

namespace {

/// Weighted mean-square vol residual; pricing or inversion failures turn the
/// affected quote into a flat penalty so the search retreats.
double objective(const RunConfig& base, const std::vector<FreeParam>& params,
                 const std::vector<double>& point, const std::vector<Quote>& quotes,
                 std::vector<double>* model_iv_out) {
  constexpr double kPenalty = 1e6;
  RunConfig cfg = base;
  try {
    cfg = with_params(base, params, point);
  } catch (const std::exception&) {
    return kPenalty * static_cast<double>(quotes.size());
  }

  Contour contour = Contour(-1.0);
  try {
    const Contour chosen = choose_contour(cfg.params, cfg.clock);
    contour = Contour(chosen.omega_i, cfg.numerics.truncation, cfg.numerics.tolerance);
  } catch (const std::exception&) {
    return kPenalty * static_cast<double>(quotes.size());
  }

  const double x = std::log(cfg.spot);
  double weight_sum = 0.0;
  double acc = 0.0;
  if (model_iv_out) model_iv_out->assign(quotes.size(), 0.0);
  for (std::size_t i = 0; i < quotes.size(); ++i) {
    const Quote& q = quotes[i];
    weight_sum += q.weight;
    double residual;
    try {
      const PricingRequest req{x,         std::log(q.strike), cfg.r, q.maturity,
                               cfg.params, cfg.clock,         PayoffKind::call,
                               std::nullopt};
      const PriceResult res = price(req, contour);
      const double iv = implied_vol(res.total, cfg.spot, q.strike, cfg.r, q.maturity);
      if (model_iv_out) (*model_iv_out)[i] = iv;
      residual = iv - q.implied_vol;
    } catch (const std::exception&) {
      if (model_iv_out) (*model_iv_out)[i] = std::numeric_limits<double>::quiet_NaN();
      acc += q.weight * kPenalty;
      continue;
    }
    acc += q.weight * residual * residual;
  }
  return acc / weight_sum;
}

std::vector<double> project(const std::vector<FreeParam>& params,
                            std::vector<double> point) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    point[i] = std::clamp(point[i], params[i].lower, params[i].upper);
  }
  return point;
}

struct SimplexOutcome {
  std::vector<double> best;
  double f_best = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead with box projection.  Standard coefficients; proposals are
/// clamped into the box before evaluation.
SimplexOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<FreeParam>& params,
                           std::vector<double> start, double initial_step_frac,
                           int max_iterations) {
  const std::size_t n = params.size();
  std::vector<std::vector<double>> xs;
  std::vector<double> fs;
  xs.push_back(project(params, start));
  fs.push_back(f(xs[0]));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = xs[0];
    const double span = params[i].upper - params[i].lower;
    double step = initial_step_frac * span;
    if (x[i] + step > params[i].upper) step = -step;
    x[i] += step;
    xs.push_back(project(params, x));
    fs.push_back(f(xs.back()));
  }

  const auto order = [&]() {
    std::vector<std::size_t> idx(xs.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> xs2;
    std::vector<double> fs2;
    for (std::size_t i : idx) {
      xs2.push_back(xs[i]);
      fs2.push_back(fs[i]);
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  SimplexOutcome out;
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    order();

    // Convergence: simplex collapsed in both argument and value.
    double diameter = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter, std::abs(xs[i][j] - xs[0][j]));
      }
    }
    const double spread = fs.back() - fs.front();
    if (diameter < 1e-9 || spread < 1e-18 * std::max(1.0, std::abs(fs.front()))) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += xs[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

    const auto blend = [&](double coeff) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) {
        x[j] = centroid[j] + coeff * (xs.back()[j] - centroid[j]);
      }
      return project(params, x);
    };

    const std::vector<double> reflected = blend(-1.0);
    const double f_reflected = f(reflected);
    if (f_reflected < fs.front()) {
      const std::vector<double> expanded = blend(-2.0);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        xs.back() = expanded;
        fs.back() = f_expanded;
      } else {
        xs.back() = reflected;
        fs.back() = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[fs.size() - 2]) {
      xs.back() = reflected;
      fs.back() = f_reflected;
      continue;
    }
    const bool outside = f_reflected < fs.back();
    const std::vector<double> contracted = blend(outside ? -0.5 : 0.5);
    const double f_contracted = f(contracted);
    if (f_contracted < std::min(f_reflected, fs.back())) {
      xs.back() = contracted;
      fs.back() = f_contracted;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 1; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
      }
      xs[i] = project(params, xs[i]);
      fs[i] = f(xs[i]);
    }
  }

  order();
  out.best = xs.front();
  out.f_best = fs.front();
  out.iterations = iter;
  return out;
}

}  // namespace

CalibrationResult calibrate(const RunConfig& base, const std::vector<Quote>& quotes) {
  if (!base.calibrate) {
    throw std::invalid_argument("calibrate: config has no [calibrate] block");
  }
  const CalibrateSpec& spec = *base.calibrate;
  if (quotes.size() < spec.free_names.size()) {
    throw std::invalid_argument("calibrate: need at least as many quotes (" +
                                std::to_string(quotes.size()) + ") as free parameters (" +
                                std::to_string(spec.free_names.size()) + ")");
  }
  for (const Quote& q : quotes) {
    if (!(q.weight > 0.0)) {
      throw std::invalid_argument("calibrate: quote weights must be positive");
    }
  }

  std::vector<FreeParam> params;
  for (const std::string& name : spec.free_names) {
    FreeParam p;
    p.name = name;
    p.initial = get_param(base, name);  // throws for inapplicable names
    const auto defaults = default_bounds().at(name);
    p.lower = spec.lower.count(name) ? spec.lower.at(name) : defaults.first;
    p.upper = spec.upper.count(name) ? spec.upper.at(name) : defaults.second;
    if (!(p.lower < p.upper)) {
      throw std::invalid_argument("calibrate: empty bounds for parameter '" + name + "'");
    }
    params.push_back(p);
  }

  const auto f = [&](const std::vector<double>& point) {
    return objective(base, params, point, quotes, nullptr);
  };

  std::vector<double> start(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) start[i] = params[i].initial;

  // Two passes: a coarse simplex to find the basin, then a tight restart from
  // the coarse optimum to polish it.
  SimplexOutcome coarse = nelder_mead(f, params, start, 0.05, spec.max_iterations);
  SimplexOutcome fine =
      nelder_mead(f, params, coarse.best, 0.002,
                  std::max(1, spec.max_iterations - coarse.iterations));

  CalibrationResult result;
  result.params = params;
  result.fitted = fine.best;
  result.iterations = coarse.iterations + fine.iterations;
  result.converged = fine.converged;
  result.rmse = std::sqrt(
      std::max(0.0, objective(base, params, fine.best, quotes, &result.model_iv)));
  return result;
}

}  // namespace tcvol
