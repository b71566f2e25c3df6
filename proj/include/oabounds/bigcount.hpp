#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oabounds {

using BigCount = boost::multiprecision::cpp_int;

// Natural log of a positive BigCount, exact to double precision via the
// top bits plus the bit length.
inline double log_big(const BigCount& v) {
  if (v <= 0) throw std::domain_error("log_big needs a positive value");
  const unsigned bits = boost::multiprecision::msb(v) + 1;
  if (bits <= 62) return std::log(static_cast<double>(v.convert_to<unsigned long long>()));
  const unsigned shift = bits - 62;
  const BigCount top = v >> shift;
  return std::log(static_cast<double>(top.convert_to<unsigned long long>())) + shift * std::numbers::ln2;
}

// Scientific rendering d.ddd x 10^e with mantissa in [1, 10).
struct SciParts {
  double mantissa = 0;
  long long exponent10 = 0;
};

inline SciParts to_sci(double log_value_nats) {
  SciParts p;
  const double log10v = log_value_nats / std::numbers::ln10;
  p.exponent10 = static_cast<long long>(std::floor(log10v));
  p.mantissa = std::pow(10.0, log10v - static_cast<double>(p.exponent10));
  if (p.mantissa >= 10.0) {  // floor/pow rounding at a decade edge
    p.mantissa /= 10.0;
    ++p.exponent10;
  }
  return p;
}

inline SciParts to_sci(const BigCount& v) { return to_sci(log_big(v)); }

}  // namespace oabounds
