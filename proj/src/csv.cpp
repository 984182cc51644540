#include "tcvol/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "tcvol/errors.hpp"

namespace tcvol {

std::string format_double(double v, int significant_digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, v);
  return buffer;
}

namespace {

std::string field(double v, int precision) {
  return std::isnan(v) ? std::string() : format_double(v, precision);
}

}  // namespace

void write_surface_csv(std::ostream& out, const SurfaceTable& table, int precision) {
  out << kSurfaceCsvHeader << '\n';
  for (const SurfaceRow& row : table.rows) {
    out << field(row.maturity, precision) << ',' << field(row.log_strike, precision)
        << ',' << field(row.lmmr, precision) << ',' << field(row.price0, precision)
        << ',' << field(row.correction, precision) << ',' << field(row.price, precision)
        << ',' << field(row.implied_vol, precision) << ',' << to_string(row.flag)
        << '\n';
  }
}

std::vector<Quote> read_quotes_csv(std::istream& in, const std::string& filename) {
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) {
    throw ConfigError(filename, 0, "empty quote file");
  }
  ++line_no;
  // Tolerate a trailing carriage return from foreign line endings.
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "maturity,strike,implied_vol,weight") {
    throw ConfigError(filename, line_no,
                      "expected header 'maturity,strike,implied_vol,weight', got '" +
                          line + "'");
  }

  std::vector<Quote> quotes;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    double values[4];
    std::stringstream ss(line);
    std::string item;
    int count = 0;
    while (std::getline(ss, item, ',')) {
      if (count >= 4) break;
      const char* begin = item.c_str();
      char* end = nullptr;
      values[count] = std::strtod(begin, &end);
      if (end == begin || *end != '\0' || !std::isfinite(values[count])) {
        throw ConfigError(filename, line_no,
                          "column " + std::to_string(count + 1) +
                              ": expected a finite number, got '" + item + "'");
      }
      ++count;
    }
    if (count != 4) {
      throw ConfigError(filename, line_no, "expected 4 comma-separated columns");
    }
    Quote q{values[0], values[1], values[2], values[3]};
    if (!(q.maturity > 0.0) || !(q.strike > 0.0)) {
      throw ConfigError(filename, line_no, "maturity and strike must be positive");
    }
    if (!(q.implied_vol > 0.0)) {
      throw ConfigError(filename, line_no, "implied_vol must be positive");
    }
    if (!(q.weight > 0.0)) {
      throw ConfigError(filename, line_no, "weight must be positive");
    }
    quotes.push_back(q);
  }
  return quotes;
}

void write_fit_csv(std::ostream& out, const std::vector<Quote>& quotes,
                   const std::vector<double>& model_iv, int precision) {
  out << "maturity,strike,implied_vol,weight,model_implied_vol,residual\n";
  for (std::size_t i = 0; i < quotes.size(); ++i) {
    const Quote& q = quotes[i];
    const double model = i < model_iv.size() ? model_iv[i]
                                             : std::numeric_limits<double>::quiet_NaN();
    out << field(q.maturity, precision) << ',' << field(q.strike, precision) << ','
        << field(q.implied_vol, precision) << ',' << field(q.weight, precision) << ','
        << field(model, precision) << ',' << field(model - q.implied_vol, precision)
        << '\n';
  }
}

}  // namespace tcvol
