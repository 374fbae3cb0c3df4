#pragma once

#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace gasket {

/// Exact rational in canonical form (GMP-backed).
using Rational = boost::multiprecision::mpq_rational;

/// 50 significant decimal digits.
using Real = boost::multiprecision::cpp_bin_float_50;

inline std::string to_string(const Rational& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

inline Real to_real(const Rational& q) {
  return Real(numerator(q).str()) / Real(denominator(q).str());
}

inline Rational make_rational(long num, long den = 1) { return Rational(num, den); }

}  // namespace gasket
