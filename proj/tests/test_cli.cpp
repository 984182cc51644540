#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "tcvol/calibrate.hpp"
#include "tcvol/config.hpp"
#include "tcvol/csv.hpp"
#include "tcvol/errors.hpp"
#include "tcvol/impliedvol.hpp"
#include "tcvol/presets.hpp"

namespace {

// ============================================================================
// Helpers: scratch files and a subprocess runner for the real binary.
// ============================================================================

std::string scratch_path(const std::string& name) {
  return std::string(TCVOL_TEST_TMPDIR) + "/" + name;
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = scratch_path(name);
  std::ofstream out(path);
  out << content;
  out.close();
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int exit_code = -1;
  std::string output;  ///< stdout and stderr interleaved
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TCVOL_BIN + "\" " + args + " 2>&1";
  CliRun result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

/// First "key = value" match in CLI output, parsed as a double.
double parse_value(const std::string& output, const std::string& key) {
  const auto pos = output.find(key);
  EXPECT_NE(pos, std::string::npos) << "missing '" << key << "' in:\n" << output;
  if (pos == std::string::npos) return 0.0;
  const auto eq = output.find('=', pos);
  EXPECT_NE(eq, std::string::npos);
  return std::strtod(output.c_str() + eq + 1, nullptr);
}

// ============================================================================
// Config file parsing
// ============================================================================

class ConfigTest : public ::testing::Test {};

TEST_F(ConfigTest, FullFileParsesEveryBlock) {
  const std::string path = write_file("full.cfg",
                                      "# a complete standalone run file\n"
                                      "[model]\n"
                                      "sigma  = 0.41\n"
                                      "v2_eps = 0.02\n"
                                      "v3_eps = -0.01\n"
                                      "r      = 0.015\n"
                                      "spot   = 1.25\n"
                                      "[clock]\n"
                                      "kind  = levy\n"
                                      "gamma = 0.3\n"
                                      "alpha = 0.6\n"
                                      "eta   = 0.2\n"
                                      "[option]\n"
                                      "maturity   = 0.5\n"
                                      "log_strike = 0.05\n"
                                      "payoff     = put\n"
                                      "[grid]\n"
                                      "maturities = 0.25, 0.5\n"
                                      "lmmr_min   = -0.8\n"
                                      "lmmr_max   = 0.8\n"
                                      "lmmr_steps = 17\n"
                                      "[numerics]\n"
                                      "tolerance       = 1e-8\n"
                                      "truncation      = 500\n"
                                      "contour_omega_i = -0.9\n"
                                      "seed            = 99\n"
                                      "n_paths         = 5000\n"
                                      "[output]\n"
                                      "out       = /tmp/ignored.csv\n"
                                      "precision = 9\n"
                                      "[calibrate]\n"
                                      "free           = sigma, eta\n"
                                      "sigma_lower    = 0.05\n"
                                      "sigma_upper    = 2.0\n"
                                      "max_iterations = 150\n");
  const tcvol::RunConfig config = tcvol::make_config(path, std::nullopt);

  EXPECT_DOUBLE_EQ(config.params.sigma, 0.41);
  EXPECT_DOUBLE_EQ(config.params.v2_eps, 0.02);
  EXPECT_DOUBLE_EQ(config.params.v3_eps, -0.01);
  EXPECT_DOUBLE_EQ(config.r, 0.015);
  EXPECT_DOUBLE_EQ(config.spot, 1.25);

  const auto* levy = std::get_if<tcvol::LevyExpCP>(&config.clock);
  ASSERT_NE(levy, nullptr);
  EXPECT_DOUBLE_EQ(levy->drift, 0.3);
  EXPECT_DOUBLE_EQ(levy->intensity, 0.6);
  EXPECT_DOUBLE_EQ(levy->jump_rate, 0.2);

  EXPECT_EQ(config.option.payoff, tcvol::PayoffKind::put);
  EXPECT_DOUBLE_EQ(config.option.maturity, 0.5);
  ASSERT_TRUE(config.option.log_strike.has_value());
  EXPECT_DOUBLE_EQ(*config.option.log_strike, 0.05);

  ASSERT_EQ(config.grid.maturities.size(), 2u);
  EXPECT_DOUBLE_EQ(config.grid.maturities[1], 0.5);
  EXPECT_EQ(config.grid.lmmr_steps, 17);

  EXPECT_DOUBLE_EQ(config.numerics.tolerance, 1e-8);
  EXPECT_DOUBLE_EQ(config.numerics.truncation, 500.0);
  ASSERT_TRUE(config.numerics.contour_omega_i.has_value());
  EXPECT_EQ(config.numerics.seed, 99u);
  EXPECT_EQ(config.numerics.n_paths, 5000u);
  EXPECT_EQ(config.output.precision, 9);

  ASSERT_TRUE(config.calibrate.has_value());
  ASSERT_EQ(config.calibrate->free_names.size(), 2u);
  EXPECT_EQ(config.calibrate->free_names[0], "sigma");
  EXPECT_EQ(config.calibrate->free_names[1], "eta");
  EXPECT_DOUBLE_EQ(config.calibrate->lower.at("sigma"), 0.05);
  EXPECT_EQ(config.calibrate->max_iterations, 150);

  // The numerics block feeds the pricing contour.
  const tcvol::Contour contour = tcvol::contour_from_config(config);
  EXPECT_DOUBLE_EQ(contour.omega_i, -0.9);
  EXPECT_DOUBLE_EQ(contour.truncation, 500.0);
  EXPECT_DOUBLE_EQ(contour.tolerance, 1e-8);
}

TEST_F(ConfigTest, PresetSuppliesModelAndClock) {
  const tcvol::RunConfig config = tcvol::make_config(std::nullopt, "fig3");
  EXPECT_DOUBLE_EQ(config.params.sigma, 0.34);
  EXPECT_DOUBLE_EQ(config.params.v2_eps, 0.03);
  EXPECT_DOUBLE_EQ(config.params.v3_eps, -0.03);
  EXPECT_DOUBLE_EQ(config.r, 0.0);
  EXPECT_DOUBLE_EQ(config.spot, 1.0);
  const auto* cir = std::get_if<tcvol::CIRClock>(&config.clock);
  ASSERT_NE(cir, nullptr);
  EXPECT_DOUBLE_EQ(cir->kappa, 1.0);
  EXPECT_DOUBLE_EQ(cir->theta, 1.0);
  EXPECT_DOUBLE_EQ(cir->vol2, 2.0);
  EXPECT_DOUBLE_EQ(cir->z0, 2.0);
}

TEST_F(ConfigTest, PresetComposesWithRunSettingsFromFile) {
  const std::string path = write_file("opts.cfg",
                                      "[option]\n"
                                      "maturity = 0.25\n"
                                      "[numerics]\n"
                                      "tolerance = 1e-7\n");
  const tcvol::RunConfig config = tcvol::make_config(path, "fig2");
  EXPECT_DOUBLE_EQ(config.option.maturity, 0.25);
  EXPECT_DOUBLE_EQ(config.numerics.tolerance, 1e-7);
  EXPECT_NE(std::get_if<tcvol::LevyExpCP>(&config.clock), nullptr)
      << "model still comes from the preset";
}

TEST_F(ConfigTest, RejectsModelBlockAlongsidePreset) {
  const std::string path = write_file("conflict.cfg",
                                      "[model]\n"
                                      "sigma = 0.4\n");
  try {
    tcvol::make_config(path, "fig1");
    FAIL() << "expected ConfigError";
  } catch (const tcvol::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("conflicts with --preset"),
              std::string::npos)
        << e.what();
  }
}

TEST_F(ConfigTest, ErrorsAreAnchoredToFileAndLine) {
  const std::string path = write_file("bad_key.cfg",
                                      "[model]\n"
                                      "sigma = 0.4\n"
                                      "signa = 0.4\n"   // line 3: typo
                                      "[clock]\n"
                                      "kind = identity\n");
  try {
    tcvol::make_config(path, std::nullopt);
    FAIL() << "expected ConfigError";
  } catch (const tcvol::ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("bad_key.cfg:3"), std::string::npos) << what;
    EXPECT_NE(what.find("unknown key 'signa'"), std::string::npos) << what;
  }
}

TEST_F(ConfigTest, RejectsStructuralMistakes) {
  // Duplicate key.
  EXPECT_THROW(tcvol::make_config(
                   write_file("dup.cfg",
                              "[model]\nsigma = 0.4\nsigma = 0.5\n"
                              "[clock]\nkind = identity\n"),
                   std::nullopt),
               tcvol::ConfigError);
  // Key before any section.
  EXPECT_THROW(tcvol::make_config(write_file("stray.cfg", "sigma = 0.4\n"),
                                  std::nullopt),
               tcvol::ConfigError);
  // Malformed line (no '=').
  EXPECT_THROW(tcvol::make_config(
                   write_file("noeq.cfg", "[model]\nsigma 0.4\n"), std::nullopt),
               tcvol::ConfigError);
  // Unknown section.
  EXPECT_THROW(tcvol::make_config(
                   write_file("badsec.cfg",
                              "[model]\nsigma = 0.4\n[clock]\nkind = identity\n"
                              "[nonsense]\nx = 1\n"),
                   std::nullopt),
               tcvol::ConfigError);
  // Non-numeric value.
  EXPECT_THROW(tcvol::make_config(
                   write_file("nonnum.cfg",
                              "[model]\nsigma = fast\n[clock]\nkind = identity\n"),
                   std::nullopt),
               tcvol::ConfigError);
  // Missing clock parameters.
  EXPECT_THROW(tcvol::make_config(
                   write_file("noeta.cfg",
                              "[model]\nsigma = 0.4\n[clock]\nkind = levy\n"
                              "gamma = 0.1\nalpha = 0.5\n"),
                   std::nullopt),
               tcvol::ConfigError);
  // Model without clock.
  EXPECT_THROW(tcvol::make_config(
                   write_file("noclock.cfg", "[model]\nsigma = 0.4\n"),
                   std::nullopt),
               tcvol::ConfigError);
}

TEST_F(ConfigTest, RejectsUnknownPresetAndEmptyCall) {
  EXPECT_THROW(tcvol::make_config(std::nullopt, "fig9"), std::invalid_argument);
  EXPECT_THROW(tcvol::make_config(std::nullopt, std::nullopt),
               std::invalid_argument);
}

TEST_F(ConfigTest, ContourOverrideIsValidatedOnUse) {
  const std::string path = write_file("badcontour.cfg",
                                      "[numerics]\n"
                                      "contour_omega_i = -0.3\n");
  const tcvol::RunConfig config = tcvol::make_config(path, "fig1");
  EXPECT_THROW(tcvol::contour_from_config(config), tcvol::ContourViolation)
      << "-0.3 is above the admissible strip";
}

// ============================================================================
// CSV round trips
// ============================================================================

TEST(CsvTest, FormatDoubleUsesSignificantDigits) {
  EXPECT_EQ(tcvol::format_double(0.5, 12), "0.5");
  EXPECT_EQ(tcvol::format_double(1.0 / 3.0, 6), "0.333333");
  EXPECT_EQ(tcvol::format_double(1e-9, 12), "1e-09");
  EXPECT_EQ(tcvol::format_double(123456.789, 9), "123456.789");
}

TEST(CsvTest, SurfaceWriterEmitsHeaderAndRows) {
  const tcvol::Preset* fig1 = tcvol::find_preset("fig1");
  ASSERT_NE(fig1, nullptr);
  tcvol::PricingRequest tmpl{.x = 0.0,
                             .k = 0.0,
                             .r = fig1->r,
                             .t = 1.0,
                             .params = fig1->params,
                             .clock = fig1->clock,
                             .payoff = tcvol::PayoffKind::call,
                             .custom = std::nullopt};
  const auto table = tcvol::surface_lmmr(tmpl, {-0.4, 0.0, 0.2}, {0.5});
  std::stringstream out;
  tcvol::write_surface_csv(out, table, 12);

  std::string line;
  ASSERT_TRUE(std::getline(out, line));
  EXPECT_EQ(line, tcvol::kSurfaceCsvHeader);
  int rows = 0;
  while (std::getline(out, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7)
        << "8 columns per row: " << line;
    EXPECT_NE(line.find(",ok"), std::string::npos);
  }
  EXPECT_EQ(rows, 3);
}

TEST(CsvTest, FlaggedCellsKeepPricesAndEmptyVol) {
  const tcvol::Preset* fig2 = tcvol::find_preset("fig2");
  ASSERT_NE(fig2, nullptr);
  tcvol::PricingRequest tmpl{.x = 0.0,
                             .k = 0.0,
                             .r = fig2->r,
                             .t = 1.0,
                             .params = fig2->params,
                             .clock = fig2->clock,
                             .payoff = tcvol::PayoffKind::call,
                             .custom = std::nullopt};
  // Short maturity far OTM: the correction overwhelms the tiny base price.
  const auto table = tcvol::surface_lmmr(tmpl, {0.7}, {0.125});
  std::stringstream out;
  tcvol::write_surface_csv(out, table, 12);
  std::string header, row;
  ASSERT_TRUE(std::getline(out, header));
  ASSERT_TRUE(std::getline(out, row));
  EXPECT_NE(row.find(",,out_of_band"), std::string::npos)
      << "empty implied_vol field, explicit flag: " << row;
}

TEST(CsvTest, QuoteReaderRoundTrip) {
  const std::string path = write_file("quotes.csv",
                                      "maturity,strike,implied_vol,weight\n"
                                      "0.5,0.95,0.41,1\n"
                                      "0.5,1.05,0.37,2.5\n"
                                      "\n"
                                      "1,1,0.38,1\n");
  std::ifstream in(path);
  const auto quotes = tcvol::read_quotes_csv(in, path);
  ASSERT_EQ(quotes.size(), 3u);
  EXPECT_DOUBLE_EQ(quotes[0].maturity, 0.5);
  EXPECT_DOUBLE_EQ(quotes[1].weight, 2.5);
  EXPECT_DOUBLE_EQ(quotes[2].implied_vol, 0.38);
}

TEST(CsvTest, QuoteReaderRejectsMalformedContent) {
  {
    std::stringstream in("strike,maturity,implied_vol,weight\n");
    EXPECT_THROW(tcvol::read_quotes_csv(in, "q.csv"), tcvol::ConfigError)
        << "wrong column order in header";
  }
  {
    std::stringstream in("maturity,strike,implied_vol,weight\n0.5,1,oops,1\n");
    try {
      tcvol::read_quotes_csv(in, "q.csv");
      FAIL() << "expected ConfigError";
    } catch (const tcvol::ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find("q.csv:2"), std::string::npos)
          << e.what();
    }
  }
  {
    std::stringstream in("maturity,strike,implied_vol,weight\n0.5,1,0.3\n");
    EXPECT_THROW(tcvol::read_quotes_csv(in, "q.csv"), tcvol::ConfigError)
        << "missing weight column";
  }
  {
    std::stringstream in("maturity,strike,implied_vol,weight\n0.5,1,0.3,-1\n");
    EXPECT_THROW(tcvol::read_quotes_csv(in, "q.csv"), tcvol::ConfigError)
        << "weights must be positive";
  }
}

// ============================================================================
// Calibration layer
// ============================================================================

class CalibrateTest : public ::testing::Test {
 protected:
  static tcvol::RunConfig fig1_config() {
    return tcvol::make_config(std::nullopt, "fig1");
  }
};

TEST_F(CalibrateTest, ParameterAccessorsRoundTrip) {
  tcvol::RunConfig config = tcvol::make_config(std::nullopt, "fig3");
  EXPECT_DOUBLE_EQ(tcvol::get_param(config, "sigma"), 0.34);
  EXPECT_DOUBLE_EQ(tcvol::get_param(config, "kappa"), 1.0);
  EXPECT_DOUBLE_EQ(tcvol::get_param(config, "sigma2"), 2.0);

  const std::vector<tcvol::FreeParam> params{{"kappa", 0.1, 10.0, 1.0},
                                             {"v2_eps", -1.0, 1.0, 0.03}};
  const tcvol::RunConfig moved = tcvol::with_params(config, params, {2.5, 0.01});
  EXPECT_DOUBLE_EQ(tcvol::get_param(moved, "kappa"), 2.5);
  EXPECT_DOUBLE_EQ(moved.params.v2_eps, 0.01);
  EXPECT_DOUBLE_EQ(tcvol::get_param(config, "kappa"), 1.0) << "base untouched";
}

TEST_F(CalibrateTest, ClockParametersRespectTheirFamilies) {
  tcvol::RunConfig config = fig1_config();  // identity clock
  EXPECT_THROW(tcvol::get_param(config, "kappa"), std::invalid_argument)
      << "no square-root parameters on the identity clock";
  EXPECT_THROW(tcvol::get_param(config, "nonsense"), std::invalid_argument);
}

TEST_F(CalibrateTest, ProposalsFailingConstructorValidationThrow) {
  tcvol::RunConfig config = tcvol::make_config(std::nullopt, "fig3");
  const std::vector<tcvol::FreeParam> params{{"sigma2", 1e-6, 50.0, 2.0}};
  // 2*kappa*theta = 2 < 3: Feller violated.
  EXPECT_THROW(tcvol::with_params(config, params, {3.0}), std::invalid_argument);
}

TEST_F(CalibrateTest, HeavilyWeightedQuoteIsInterpolated) {
  // One quote carries a million times the weight of its neighbours: the
  // fitted model must pass through it (to the optimizer's tolerance), since a
  // single free parameter can match a single target exactly.
  tcvol::RunConfig config = fig1_config();
  config.calibrate = tcvol::CalibrateSpec{};
  config.calibrate->free_names = {"sigma"};
  config.calibrate->max_iterations = 2000;

  const std::vector<tcvol::Quote> quotes{{1.0, 0.9, 0.40, 1.0},
                                         {1.0, 1.0, 0.38, 1e6},
                                         {1.0, 1.1, 0.36, 1.0}};
  const auto result = tcvol::calibrate(config, quotes);
  ASSERT_EQ(result.model_iv.size(), 3u);
  EXPECT_TRUE(result.converged);
  EXPECT_NEAR(result.model_iv[1], 0.38, 1e-6)
      << "the dominant quote must be interpolated";
  EXPECT_GT(result.rmse, 0.0) << "the neighbours still carry residuals";
}

TEST_F(CalibrateTest, RejectsUnderdeterminedProblems) {
  tcvol::RunConfig config = fig1_config();
  config.calibrate = tcvol::CalibrateSpec{};
  config.calibrate->free_names = {"sigma", "v2_eps"};
  const std::vector<tcvol::Quote> quotes{{1.0, 1.0, 0.38, 1.0}};
  EXPECT_THROW(tcvol::calibrate(config, quotes), std::invalid_argument)
      << "more free parameters than quotes";
}

// ============================================================================
// The real binary, end to end
// ============================================================================

class CliBinaryTest : public ::testing::Test {};

TEST_F(CliBinaryTest, PriceCommandPrintsTheAnchorValues) {
  const CliRun run = run_cli("price --preset fig1");
  ASSERT_EQ(run.exit_code, 0) << run.output;
  EXPECT_NEAR(parse_value(run.output, "price0"), 0.13498986335007683, 1e-9);
  EXPECT_NEAR(parse_value(run.output, "correction"), 0.01734789770428664, 1e-9);
  EXPECT_NEAR(parse_value(run.output, "implied_vol"), 0.384204177125, 1e-8);
  EXPECT_EQ(parse_value(run.output, "imag_residual"), 0.0);
}

TEST_F(CliBinaryTest, RunsAreByteIdentical) {
  const std::string out_a = scratch_path("repeat_a.csv");
  const std::string out_b = scratch_path("repeat_b.csv");
  const CliRun a = run_cli("surface --preset fig3 --out " + out_a);
  const CliRun b = run_cli("surface --preset fig3 --out " + out_b);
  ASSERT_EQ(a.exit_code, 0) << a.output;
  ASSERT_EQ(b.exit_code, 0) << b.output;
  const std::string bytes_a = read_file(out_a);
  const std::string bytes_b = read_file(out_b);
  ASSERT_FALSE(bytes_a.empty());
  EXPECT_EQ(bytes_a, bytes_b) << "same inputs must produce identical output files";
  EXPECT_NE(a.output.find("wrote"), std::string::npos);
}

TEST_F(CliBinaryTest, SurfaceHonorsTheConfiguredGrid) {
  const std::string cfg = write_file("grid.cfg",
                                     "[grid]\n"
                                     "maturities = 0.5\n"
                                     "lmmr_min   = -0.2\n"
                                     "lmmr_max   = 0.2\n"
                                     "lmmr_steps = 5\n");
  const std::string out = scratch_path("grid.csv");
  const CliRun run =
      run_cli("surface --preset fig1 --config " + cfg + " --out " + out);
  ASSERT_EQ(run.exit_code, 0) << run.output;
  const std::string csv = read_file(out);
  // Header plus 5 rows.
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_NE(csv.find("0.384"), std::string::npos)
      << "ATM vol near 0.3842 must appear in the table";
}

TEST_F(CliBinaryTest, ValidationFailuresExitOne) {
  EXPECT_EQ(run_cli("price --preset fig9").exit_code, 1) << "unknown preset";
  EXPECT_EQ(run_cli("surface --preset fig1").exit_code, 1)
      << "surface without an output path";
  EXPECT_EQ(run_cli("calibrate --preset fig1").exit_code, 1)
      << "calibrate without quotes";
  EXPECT_EQ(run_cli("price").exit_code, 1) << "price without a model source";
  EXPECT_EQ(run_cli("frobnicate").exit_code, 1) << "unknown subcommand";
  const CliRun run = run_cli("price --preset fig9");
  EXPECT_NE(run.output.find("error:"), std::string::npos) << run.output;
}

TEST_F(CliBinaryTest, NumericFailuresExitTwo) {
  // An unattainable tolerance makes the contour integral give up; that is a
  // numeric failure, distinct from bad input.
  const std::string cfg = write_file("hopeless.cfg",
                                     "[numerics]\n"
                                     "tolerance = 1e-30\n");
  const CliRun run = run_cli("price --preset fig1 --config " + cfg);
  EXPECT_EQ(run.exit_code, 2) << run.output;
  EXPECT_NE(run.output.find("numeric failure:"), std::string::npos) << run.output;
}

TEST_F(CliBinaryTest, HelpIsAvailableAndClean) {
  const CliRun top = run_cli("--help");
  EXPECT_EQ(top.exit_code, 0);
  EXPECT_NE(top.output.find("price"), std::string::npos);
  EXPECT_NE(top.output.find("surface"), std::string::npos);
  EXPECT_NE(top.output.find("verify"), std::string::npos);
  EXPECT_NE(top.output.find("calibrate"), std::string::npos);
}

TEST_F(CliBinaryTest, VerifyQuickPassesOnAConfiguredModel) {
  const CliRun run = run_cli("verify --preset fig4 --quick --seed 7");
  EXPECT_EQ(run.exit_code, 0) << run.output;
  EXPECT_NE(run.output.find("checks passed"), std::string::npos) << run.output;
  EXPECT_EQ(run.output.find("FAIL"), std::string::npos) << run.output;
}

TEST_F(CliBinaryTest, CalibrateCommandFitsQuotesFromFile) {
  // Two synthetic quotes straddling the money and one free parameter: the
  // fit must come back tight and report its workings.
  const std::string quotes = write_file("cal_quotes.csv",
                                        "maturity,strike,implied_vol,weight\n"
                                        "1,0.95,0.39,1\n"
                                        "1,1.05,0.375,1\n");
  const std::string cfg = write_file("cal.cfg",
                                     "[calibrate]\n"
                                     "free = sigma\n");
  const std::string out = scratch_path("fit.csv");
  const CliRun run = run_cli("calibrate --preset fig1 --config " + cfg +
                             " --quotes " + quotes + " --out " + out);
  ASSERT_EQ(run.exit_code, 0) << run.output;
  EXPECT_NE(run.output.find("rmse"), std::string::npos);
  EXPECT_NE(run.output.find("converged  = yes"), std::string::npos) << run.output;
  const double fitted_sigma = parse_value(run.output, "sigma");
  EXPECT_GT(fitted_sigma, 0.2);
  EXPECT_LT(fitted_sigma, 0.6);
  const std::string fit = read_file(out);
  EXPECT_NE(fit.find("model_implied_vol"), std::string::npos)
      << "per-quote fit report: " << fit;
}

}  // namespace
