#include "tcvol/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "tcvol/errors.hpp"
#include "tcvol/presets.hpp"

namespace tcvol {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;  ///< line of the [header]
  std::map<std::string, Entry> entries;
};

using RawConfig = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

RawConfig parse_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path, 0, "cannot open config file");
  }

  static const std::set<std::string> kKnownSections = {
      "model", "clock", "option", "grid", "numerics", "output", "calibrate"};

  RawConfig raw;
  Section* current = nullptr;
  std::string current_name;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError(path, line_no, "malformed section header '" + text + "'");
      }
      const std::string name = trim(text.substr(1, text.size() - 2));
      if (!kKnownSections.count(name)) {
        throw ConfigError(path, line_no, "unknown section [" + name + "]");
      }
      if (raw.count(name)) {
        throw ConfigError(path, line_no, "duplicate section [" + name + "]");
      }
      current = &raw[name];
      current->line = line_no;
      current_name = name;
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path, line_no, "expected 'key = value', got '" + text + "'");
    }
    if (!current) {
      throw ConfigError(path, line_no, "key outside any [section]");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path, line_no, "empty key");
    }
    if (value.empty()) {
      throw ConfigError(path, line_no, "empty value for key '" + key + "'");
    }
    if (current->entries.count(key)) {
      throw ConfigError(path, line_no, "duplicate key '" + key + "' in [" + current_name + "]");
    }
    current->entries[key] = Entry{value, line_no, false};
  }
  return raw;
}

double parse_double(const std::string& path, const Entry& e, const std::string& key) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError(path, e.line, "key '" + key + "': expected a finite number, got '" +
                                        e.value + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& path, const Entry& e, const std::string& key) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || e.value.front() == '-') {
    throw ConfigError(path, e.line, "key '" + key + "': expected a non-negative integer, got '" +
                                        e.value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_list(const std::string& path, const Entry& e,
                               const std::string& key) {
  std::vector<double> values;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string token = trim(item);
    if (token.empty()) {
      throw ConfigError(path, e.line, "key '" + key + "': empty element in list");
    }
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
      throw ConfigError(path, e.line,
                        "key '" + key + "': expected a number, got '" + token + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw ConfigError(path, e.line, "key '" + key + "': empty list");
  }
  return values;
}

/// Access helpers that mark entries as used, so leftovers can be reported as
/// unknown keys.
const Entry* find(Section* section, const std::string& key) {
  if (!section) return nullptr;
  const auto it = section->entries.find(key);
  if (it == section->entries.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

void reject_unused(const std::string& path, const RawConfig& raw) {
  for (const auto& [name, section] : raw) {
    for (const auto& [key, entry] : section.entries) {
      if (!entry.used) {
        throw ConfigError(path, entry.line,
                          "unknown key '" + key + "' in [" + name + "]");
      }
    }
  }
}

Clock build_clock(const std::string& path, Section* section) {
  const Entry* kind_entry = find(section, "kind");
  if (!kind_entry) {
    throw ConfigError(path, section->line, "[clock] block requires key 'kind'");
  }
  const std::string kind = kind_entry->value;
  const int kind_line = kind_entry->line;

  const auto need = [&](const char* key) -> double {
    const Entry* e = find(section, key);
    if (!e) {
      throw ConfigError(path, kind_line,
                        "clock kind '" + kind + "' requires key '" + key + "'");
    }
    return parse_double(path, *e, key);
  };

  try {
    if (kind == "identity") {
      return IdentityClock{};
    }
    if (kind == "levy") {
      return LevyExpCP(need("gamma"), need("alpha"), need("eta"));
    }
    if (kind == "cir") {
      return CIRClock(need("kappa"), need("theta"), need("sigma2"), need("z0"));
    }
    if (kind == "composite") {
      return CompositeClock(LevyExpCP(need("gamma"), need("alpha"), need("eta")),
                            CIRClock(need("kappa"), need("theta"), need("sigma2"),
                                     need("z0")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw ConfigError(path, kind_line, err.what());
  }
  throw ConfigError(path, kind_line,
                    "unknown clock kind '" + kind +
                        "' (expected identity, levy, cir or composite)");
}

PayoffKind parse_payoff(const std::string& path, const Entry& e) {
  if (e.value == "call") return PayoffKind::call;
  if (e.value == "put") return PayoffKind::put;
  throw ConfigError(path, e.line,
                    "key 'payoff': expected 'call' or 'put', got '" + e.value + "'");
}

const std::set<std::string> kCalibratableNames = {
    "sigma", "v2_eps", "v3_eps", "gamma", "alpha",
    "eta",   "kappa",  "theta",  "sigma2", "z0"};

CalibrateSpec build_calibrate(const std::string& path, Section* section) {
  CalibrateSpec spec;
  const Entry* free_entry = find(section, "free");
  if (!free_entry) {
    throw ConfigError(path, section->line, "[calibrate] block requires key 'free'");
  }
  std::stringstream ss(free_entry->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string name = trim(item);
    if (!kCalibratableNames.count(name)) {
      throw ConfigError(path, free_entry->line,
                        "key 'free': unknown parameter '" + name + "'");
    }
    if (std::find(spec.free_names.begin(), spec.free_names.end(), name) !=
        spec.free_names.end()) {
      throw ConfigError(path, free_entry->line,
                        "key 'free': parameter '" + name + "' listed twice");
    }
    spec.free_names.push_back(name);
  }
  if (spec.free_names.empty()) {
    throw ConfigError(path, free_entry->line, "key 'free': empty parameter list");
  }

  if (const Entry* e = find(section, "max_iterations")) {
    spec.max_iterations = static_cast<int>(parse_uint(path, *e, "max_iterations"));
    if (spec.max_iterations < 1) {
      throw ConfigError(path, e->line, "max_iterations must be positive");
    }
  }
  for (const std::string& name : kCalibratableNames) {
    if (const Entry* e = find(section, name + "_lower")) {
      spec.lower[name] = parse_double(path, *e, name + "_lower");
    }
    if (const Entry* e = find(section, name + "_upper")) {
      spec.upper[name] = parse_double(path, *e, name + "_upper");
    }
  }
  return spec;
}

}  // namespace

RunConfig make_config(const std::optional<std::string>& config_path,
                      const std::optional<std::string>& preset_name) {
  if (!config_path && !preset_name) {
    throw std::invalid_argument("make_config: need a config file, a preset, or both");
  }

  const Preset* preset = nullptr;
  if (preset_name) {
    preset = find_preset(*preset_name);
    if (!preset) {
      std::string names;
      for (const Preset& p : all_presets()) names += (names.empty() ? "" : ", ") + p.name;
      throw std::invalid_argument("unknown preset '" + *preset_name +
                                  "' (available: " + names + ")");
    }
  }

  RawConfig raw;
  std::string path;
  if (config_path) {
    path = *config_path;
    raw = parse_raw(path);
  }

  Section* model = raw.count("model") ? &raw["model"] : nullptr;
  Section* clock_section = raw.count("clock") ? &raw["clock"] : nullptr;

  if (preset && model) {
    throw ConfigError(path, model->line,
                      "[model] block conflicts with --preset " + preset->name +
                          "; drop one of the two");
  }
  if (preset && clock_section) {
    throw ConfigError(path, clock_section->line,
                      "[clock] block conflicts with --preset " + preset->name +
                          "; drop one of the two");
  }
  if (!preset && !model) {
    throw ConfigError(path, 0, "missing [model] block (or use --preset)");
  }
  if (!preset && !clock_section) {
    throw ConfigError(path, 0, "missing [clock] block (or use --preset)");
  }

  // ----- model + clock -----
  double sigma = 0.0, v2 = 0.0, v3 = 0.0, r = 0.0, spot = 1.0;
  std::optional<Clock> clock;
  if (preset) {
    sigma = preset->params.sigma;
    v2 = preset->params.v2_eps;
    v3 = preset->params.v3_eps;
    r = preset->r;
    spot = preset->spot;
    clock = preset->clock;
  } else {
    const Entry* sigma_entry = find(model, "sigma");
    if (!sigma_entry) {
      throw ConfigError(path, model->line, "[model] block requires key 'sigma'");
    }
    sigma = parse_double(path, *sigma_entry, "sigma");
    if (const Entry* e = find(model, "v2_eps")) v2 = parse_double(path, *e, "v2_eps");
    if (const Entry* e = find(model, "v3_eps")) v3 = parse_double(path, *e, "v3_eps");
    if (const Entry* e = find(model, "r")) r = parse_double(path, *e, "r");
    if (const Entry* e = find(model, "spot")) {
      spot = parse_double(path, *e, "spot");
      if (!(spot > 0.0)) throw ConfigError(path, e->line, "spot must be positive");
    }
    clock = build_clock(path, clock_section);
  }

  std::optional<GroupParams> params;
  try {
    params.emplace(sigma, v2, v3);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(path, model ? model->line : 0, err.what());
  }

  RunConfig config{*params, *clock, r, spot, OptionSpec{}, GridSpec{},
                   NumericsSpec{}, OutputSpec{}, std::nullopt};

  // ----- option -----
  if (Section* s = raw.count("option") ? &raw["option"] : nullptr) {
    if (const Entry* e = find(s, "maturity")) {
      config.option.maturity = parse_double(path, *e, "maturity");
      if (!(config.option.maturity > 0.0)) {
        throw ConfigError(path, e->line, "maturity must be positive");
      }
    }
    const Entry* strike = find(s, "strike");
    const Entry* log_strike = find(s, "log_strike");
    if (strike && log_strike) {
      throw ConfigError(path, log_strike->line,
                        "give either 'strike' or 'log_strike', not both");
    }
    if (strike) {
      const double kv = parse_double(path, *strike, "strike");
      if (!(kv > 0.0)) throw ConfigError(path, strike->line, "strike must be positive");
      config.option.log_strike = std::log(kv);
    }
    if (log_strike) {
      config.option.log_strike = parse_double(path, *log_strike, "log_strike");
    }
    if (const Entry* e = find(s, "payoff")) config.option.payoff = parse_payoff(path, *e);
  }

  // ----- grid -----
  if (Section* s = raw.count("grid") ? &raw["grid"] : nullptr) {
    if (const Entry* e = find(s, "maturities")) {
      config.grid.maturities = parse_list(path, *e, "maturities");
      for (double t : config.grid.maturities) {
        if (!(t > 0.0)) throw ConfigError(path, e->line, "maturities must be positive");
      }
    }
    if (const Entry* e = find(s, "lmmr_min")) {
      config.grid.lmmr_min = parse_double(path, *e, "lmmr_min");
    }
    if (const Entry* e = find(s, "lmmr_max")) {
      config.grid.lmmr_max = parse_double(path, *e, "lmmr_max");
    }
    if (const Entry* e = find(s, "lmmr_steps")) {
      config.grid.lmmr_steps = static_cast<int>(parse_uint(path, *e, "lmmr_steps"));
      if (config.grid.lmmr_steps < 2) {
        throw ConfigError(path, e->line, "lmmr_steps must be at least 2");
      }
    }
    if (!(config.grid.lmmr_min < config.grid.lmmr_max)) {
      throw ConfigError(path, s->line, "grid requires lmmr_min < lmmr_max");
    }
    if (const Entry* e = find(s, "strikes")) {
      config.grid.strikes = parse_list(path, *e, "strikes");
      for (double k : config.grid.strikes) {
        if (!(k > 0.0)) throw ConfigError(path, e->line, "strikes must be positive");
      }
    }
  }

  // ----- numerics -----
  if (Section* s = raw.count("numerics") ? &raw["numerics"] : nullptr) {
    if (const Entry* e = find(s, "tolerance")) {
      config.numerics.tolerance = parse_double(path, *e, "tolerance");
      if (!(config.numerics.tolerance > 0.0)) {
        throw ConfigError(path, e->line, "tolerance must be positive");
      }
    }
    if (const Entry* e = find(s, "truncation")) {
      config.numerics.truncation = parse_double(path, *e, "truncation");
      if (!(config.numerics.truncation > 0.0)) {
        throw ConfigError(path, e->line, "truncation must be positive");
      }
    }
    if (const Entry* e = find(s, "contour_omega_i")) {
      config.numerics.contour_omega_i = parse_double(path, *e, "contour_omega_i");
    }
    if (const Entry* e = find(s, "seed")) {
      config.numerics.seed = parse_uint(path, *e, "seed");
    }
    if (const Entry* e = find(s, "n_paths")) {
      config.numerics.n_paths = static_cast<std::size_t>(parse_uint(path, *e, "n_paths"));
      if (config.numerics.n_paths == 0) {
        throw ConfigError(path, e->line, "n_paths must be positive");
      }
    }
  }

  // ----- output -----
  if (Section* s = raw.count("output") ? &raw["output"] : nullptr) {
    if (const Entry* e = find(s, "out")) config.output.out_path = e->value;
    if (const Entry* e = find(s, "precision")) {
      config.output.precision = static_cast<int>(parse_uint(path, *e, "precision"));
      if (config.output.precision < 1 || config.output.precision > 17) {
        throw ConfigError(path, e->line, "precision must be between 1 and 17");
      }
    }
  }

  // ----- calibrate -----
  if (Section* s = raw.count("calibrate") ? &raw["calibrate"] : nullptr) {
    config.calibrate = build_calibrate(path, s);
  }

  if (config_path) reject_unused(path, raw);
  return config;
}

Contour contour_from_config(const RunConfig& config) {
  if (config.numerics.contour_omega_i) {
    return Contour(*config.numerics.contour_omega_i, config.numerics.truncation,
                   config.numerics.tolerance);
  }
  Contour contour = choose_contour(config.params, config.clock);
  return Contour(contour.omega_i, config.numerics.truncation, config.numerics.tolerance);
}

}  // namespace tcvol
