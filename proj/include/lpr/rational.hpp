#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace lpr {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(Integer(num), Integer(den));
}

/// 2^k for k >= 0.
inline Rational pow2(unsigned k) {
  Integer v = 1;
  v <<= k;
  return Rational(v);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Largest integer not exceeding r.
inline Integer floor(const Rational& r) {
  const Integer& n = boost::multiprecision::numerator(r);
  const Integer& d = boost::multiprecision::denominator(r);
  Integer q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

/// "n/d" (or "n" when d == 1).
inline std::string to_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1)
    return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

}  // namespace lpr
