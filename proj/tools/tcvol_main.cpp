#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tcvol/commands.hpp"

// ============================================================================
// tcvol: asymptotic option pricing under time-changed fast mean-reverting
// stochastic volatility.
//
//   tcvol price     --preset fig2 [--config FILE] [--out CSV]
//   tcvol surface   --preset fig2 --out CSV
//   tcvol verify    [--seed N] [--quick] [--config FILE] [--preset NAME]
//   tcvol calibrate --config FILE --quotes CSV [--out CSV]
//
// Exit codes: 0 success, 1 validation error, 2 numeric failure.
// ============================================================================

int main(int argc, char** argv) {
  CLI::App app{
      "Asymptotic pricing of European options under time-changed fast "
      "mean-reverting stochastic volatility"};
  app.require_subcommand(1);

  tcvol::CliArgs args;

  const auto add_model_sources = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path,
                    "Config file (blocks: model, clock, option, grid, numerics, "
                    "output, calibrate)");
    cmd->add_option("--preset", args.preset,
                    "Built-in model preset: fig1, fig2, fig3, fig4");
  };

  CLI::App* price = app.add_subcommand("price", "Price one option");
  add_model_sources(price);
  price->add_option("--out", args.out_path, "Also write the row as a surface CSV");

  CLI::App* surface =
      app.add_subcommand("surface", "Price a strike/maturity grid to CSV");
  add_model_sources(surface);
  surface->add_option("--out", args.out_path, "Output CSV path");

  CLI::App* verify = app.add_subcommand("verify", "Run the oracle check suite");
  add_model_sources(verify);
  verify->add_option("--seed", args.seed, "Seed for the Monte Carlo checks");
  verify->add_flag("--quick", args.quick, "Skip the Monte Carlo checks");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Fit free parameters to quoted vols");
  add_model_sources(calibrate);
  calibrate->add_option("--quotes", args.quotes_path,
                        "Quote CSV: maturity,strike,implied_vol,weight");
  calibrate->add_option("--out", args.out_path, "Per-quote fit report CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // --help exits cleanly; anything else is misuse
  }

  if (price->parsed()) return tcvol::cmd_price(args, std::cout, std::cerr);
  if (surface->parsed()) return tcvol::cmd_surface(args, std::cout, std::cerr);
  if (verify->parsed()) return tcvol::cmd_verify(args, std::cout, std::cerr);
  if (calibrate->parsed()) return tcvol::cmd_calibrate(args, std::cout, std::cerr);
  return 1;
}
