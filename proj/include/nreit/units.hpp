#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nreit {

/// All internal rates and frequencies are expressed in units of Gamma,
/// the excited-state decay rate. Conversion to/from MHz happens only at
/// the I/O boundary. Gamma for the 85Rb D1 line is 2pi x 5.75 MHz.
inline constexpr double kGammaMHz = 5.75;

inline double mhz_to_gamma(double f_mhz) { return f_mhz / kGammaMHz; }
inline double gamma_to_mhz(double w_gamma) { return w_gamma * kGammaMHz; }

/// Parses "<value> <unit>" where unit is "MHz" or "Gamma" (case-insensitive).
/// Returns the value in Gamma units.
inline double parse_rate(const std::string& text) {
  std::size_t pos = 0;
  double value = std::stod(text, &pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  std::string unit = text.substr(pos);
  for (auto& c : unit) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (unit == "mhz") return mhz_to_gamma(value);
  if (unit == "gamma") return value;
  throw std::invalid_argument("rate '" + text + "': unit must be 'MHz' or 'Gamma'");
}

}  // namespace nreit
