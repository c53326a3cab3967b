#pragma once

// Arbitrary-precision counts and conversions to floating point / decimal.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace parity_lab {

/// Exact non-negative count. Signed quantities (biases) use the same type.
using BigCount = boost::multiprecision::cpp_int;
using BigSigned = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Natural log of |x|; -inf for zero. Uses the top 128 bits, so the result
/// carries full double precision for any magnitude.
inline double log_abs(const BigSigned& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  BigSigned mag = boost::multiprecision::abs(x);
  const std::size_t top = boost::multiprecision::msb(mag);
  std::size_t shift = top > 127 ? top - 127 : 0;
  BigSigned head = mag >> shift;
  const auto lead = head.convert_to<long double>();
  return static_cast<double>(std::log(lead)) + static_cast<double>(shift) * std::numbers::ln2;
}

inline int sign_of(const BigSigned& x) { return x.sign(); }

/// Quotient num/den as a double without overflowing either operand.
inline double ratio_to_double(const BigSigned& num, const BigSigned& den) {
  if (den == 0) return std::numeric_limits<double>::quiet_NaN();
  if (num == 0) return 0.0;
  const std::size_t top = std::max(boost::multiprecision::msb(boost::multiprecision::abs(num)),
                                   boost::multiprecision::msb(boost::multiprecision::abs(den)));
  const std::size_t shift = top > 120 ? top - 120 : 0;
  const BigSigned a = num >> shift;
  const BigSigned b = den >> shift;
  if (b == 0 || a == 0) {
    const int s = num.sign() * den.sign();
    return s * std::exp(log_abs(num) - log_abs(den));
  }
  return static_cast<double>(a.convert_to<long double>() / b.convert_to<long double>());
}

inline std::string to_decimal(const BigSigned& x) { return x.str(); }

/// Little-endian 64-bit limbs to a big integer.
inline BigCount from_limbs(std::span<const std::uint64_t> limbs) {
  BigCount out;
  boost::multiprecision::import_bits(out, limbs.begin(), limbs.end(), 64, false);
  return out;
}

}  // namespace parity_lab
