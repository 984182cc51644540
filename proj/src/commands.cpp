#include "tcvol/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

#include "tcvol/calibrate.hpp"
#include "tcvol/csv.hpp"
#include "tcvol/errors.hpp"
#include "tcvol/impliedvol.hpp"
#include "tcvol/verify.hpp"

namespace tcvol {

namespace {

/// Maps the error taxonomy onto the documented exit codes.
int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 2;
  }
}

std::string resolve_out_path(const CliArgs& args, const RunConfig& config) {
  return args.out_path ? *args.out_path : config.output.out_path;
}

RunConfig load_config(const CliArgs& args) {
  RunConfig config = make_config(args.config_path, args.preset);
  if (args.seed) config.numerics.seed = *args.seed;
  return config;
}

void write_table(const SurfaceTable& table, const std::string& path, int precision) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot open output file '" + path + "'");
  }
  write_surface_csv(out, table, precision);
  if (!out.good()) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  }
  return out;
}

PricingRequest request_template(const RunConfig& config) {
  return PricingRequest{std::log(config.spot),
                        0.0,
                        config.r,
                        config.option.maturity,
                        config.params,
                        config.clock,
                        config.option.payoff,
                        std::nullopt};
}

}  // namespace

int cmd_price(const CliArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(
      [&]() {
        const RunConfig config = load_config(args);
        const int prec = config.output.precision;

        PricingRequest req = request_template(config);
        req.k = config.option.log_strike.value_or(req.x);
        const Contour contour = contour_from_config(config);
        const PriceResult res = price(req, contour);

        SurfaceRow row;
        row.maturity = req.t;
        row.log_strike = req.k;
        row.lmmr = (req.k - req.x) / req.t;
        row.price0 = res.p0;
        row.correction = res.correction;
        row.price = res.total;
        row.implied_vol = std::numeric_limits<double>::quiet_NaN();
        double call_px = res.total;
        if (req.payoff == PayoffKind::put) {
          call_px += std::exp(req.x) - std::exp(req.k - req.r * req.t);
        }
        try {
          row.implied_vol =
              implied_vol(call_px, config.spot, std::exp(req.k), req.r, req.t);
        } catch (const OutOfBand&) {
          row.flag = CellFlag::out_of_band;
        }

        const auto fmt = [prec](double v) { return format_double(v, prec); };
        out << "payoff        = "
            << (req.payoff == PayoffKind::call ? "call" : "put") << "\n";
        out << "maturity      = " << fmt(req.t) << "\n";
        out << "log_strike    = " << fmt(req.k) << "\n";
        out << "price0        = " << fmt(res.p0) << "\n";
        out << "correction    = " << fmt(res.correction) << "\n";
        out << "price         = " << fmt(res.total) << "\n";
        if (row.flag == CellFlag::ok) {
          out << "implied_vol   = " << fmt(row.implied_vol) << "\n";
        } else {
          out << "implied_vol   = (" << to_string(row.flag) << ")\n";
        }
        out << "imag_residual = " << fmt(res.imag_residual) << "\n";
        out << "contour       = omega_i=" << fmt(contour.omega_i)
            << " truncation=" << fmt(contour.truncation)
            << " tolerance=" << fmt(contour.tolerance) << "\n";
        out << "n_evals       = " << res.n_evals << "\n";

        const std::string path = resolve_out_path(args, config);
        if (!path.empty()) {
          SurfaceTable table;
          table.rows.push_back(row);
          write_table(table, path, prec);
          out << "csv           = " << path << "\n";
        }
        return 0;
      },
      err);
}

int cmd_surface(const CliArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(
      [&]() {
        const RunConfig config = load_config(args);
        const std::string path = resolve_out_path(args, config);
        if (path.empty()) {
          throw std::invalid_argument(
              "surface: no output file (pass --out or set [output] out)");
        }
        if (config.grid.maturities.empty()) {
          throw std::invalid_argument("surface: empty maturity grid");
        }

        const PricingRequest tmpl = request_template(config);
        const Contour contour = contour_from_config(config);

        SurfaceTable table;
        if (!config.grid.strikes.empty()) {
          std::vector<double> k_grid;
          k_grid.reserve(config.grid.strikes.size());
          for (double s : config.grid.strikes) k_grid.push_back(std::log(s));
          table = surface(tmpl, k_grid, config.grid.maturities, contour);
        } else {
          table = surface_lmmr(
              tmpl,
              linspace(config.grid.lmmr_min, config.grid.lmmr_max,
                       config.grid.lmmr_steps),
              config.grid.maturities, contour);
        }

        write_table(table, path, config.output.precision);
        out << "wrote " << table.rows.size() << " rows to " << path << "\n";
        return 0;
      },
      err);
}

int cmd_verify(const CliArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(
      [&]() {
        CliArgs effective = args;
        // The suite needs some model to exercise; the smile regime is the
        // default when the caller brings no config of their own.
        if (!effective.config_path && !effective.preset) effective.preset = "fig2";
        const RunConfig config = load_config(effective);

        VerifyOptions options;
        options.quick = args.quick;
        const VerifyReport report = run_verification(config, options);
        print_report(report, out);
        return report.all_pass() ? 0 : 2;
      },
      err);
}

int cmd_calibrate(const CliArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(
      [&]() {
        const RunConfig config = load_config(args);
        if (!args.quotes_path) {
          throw std::invalid_argument("calibrate: no quote file (pass --quotes)");
        }
        std::ifstream in(*args.quotes_path);
        if (!in) {
          throw std::invalid_argument("cannot open quote file '" +
                                      *args.quotes_path + "'");
        }
        const std::vector<Quote> quotes = read_quotes_csv(in, *args.quotes_path);

        const CalibrationResult result = calibrate(config, quotes);

        const int prec = config.output.precision;
        const auto fmt = [prec](double v) { return format_double(v, prec); };
        for (std::size_t i = 0; i < result.params.size(); ++i) {
          const FreeParam& p = result.params[i];
          out << p.name << " = " << fmt(result.fitted[i]) << "  (initial "
              << fmt(p.initial) << ", bounds [" << fmt(p.lower) << ", "
              << fmt(p.upper) << "])\n";
        }
        out << "rmse       = " << fmt(result.rmse) << "\n";
        out << "iterations = " << result.iterations << "\n";
        out << "converged  = " << (result.converged ? "yes" : "no") << "\n";

        const std::string path = resolve_out_path(args, config);
        if (!path.empty()) {
          std::ofstream fit(path);
          if (!fit) {
            throw std::invalid_argument("cannot open output file '" + path + "'");
          }
          write_fit_csv(fit, quotes, result.model_iv, prec);
          out << "csv        = " << path << "\n";
        }
        return 0;
      },
      err);
}

}  // namespace tcvol
