#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "parity_lab/big_count.hpp"

namespace parity_lab {

/// Real number held as sign * exp(log_abs); zero is sign 0 with log_abs = -inf.
class LogScaledValue {
 public:
  LogScaledValue() = default;

  static LogScaledValue from_log(int sign, double log_abs) {
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return {};
    return LogScaledValue(sign > 0 ? 1 : -1, log_abs);
  }

  static LogScaledValue from_double(double x) {
    if (x == 0.0) return {};
    return LogScaledValue(x > 0 ? 1 : -1, std::log(std::abs(x)));
  }

  static LogScaledValue from_exact(const BigSigned& x) { return from_log(sign_of(x), parity_lab::log_abs(x)); }

  int sign() const noexcept { return sign_; }
  double log_abs() const noexcept { return log_abs_; }
  bool is_zero() const noexcept { return sign_ == 0; }

  /// May overflow to +-inf for large magnitudes.
  double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }

  LogScaledValue operator-() const { return from_log(-sign_, log_abs_); }

  friend LogScaledValue operator*(const LogScaledValue& a, const LogScaledValue& b) {
    return from_log(a.sign_ * b.sign_, a.log_abs_ + b.log_abs_);
  }
  friend LogScaledValue operator/(const LogScaledValue& a, const LogScaledValue& b) {
    if (b.sign_ == 0) return from_log(a.sign_, std::numeric_limits<double>::infinity());
    return from_log(a.sign_ * b.sign_, a.log_abs_ - b.log_abs_);
  }

  /// Log-sum-exp addition.
  friend LogScaledValue operator+(const LogScaledValue& a, const LogScaledValue& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const LogScaledValue& big = a.log_abs_ >= b.log_abs_ ? a : b;
    const LogScaledValue& small = a.log_abs_ >= b.log_abs_ ? b : a;
    const double rel = std::exp(small.log_abs_ - big.log_abs_);
    if (big.sign_ == small.sign_) return from_log(big.sign_, big.log_abs_ + std::log1p(rel));
    if (rel == 1.0) return {};
    return from_log(big.sign_, big.log_abs_ + std::log1p(-rel));
  }
  friend LogScaledValue operator-(const LogScaledValue& a, const LogScaledValue& b) { return a + (-b); }

  LogScaledValue& operator+=(const LogScaledValue& o) { return *this = *this + o; }
  LogScaledValue& operator*=(const LogScaledValue& o) { return *this = *this * o; }

  /// this / other as a plain double, computed in log space.
  double ratio_to(const LogScaledValue& other) const {
    if (sign_ == 0) return 0.0;
    if (other.sign_ == 0) return sign_ * std::numeric_limits<double>::infinity();
    return sign_ * other.sign_ * std::exp(log_abs_ - other.log_abs_);
  }

  friend std::ostream& operator<<(std::ostream& os, const LogScaledValue& v) {
    return os << (v.sign_ < 0 ? "-" : v.sign_ == 0 ? "0*" : "") << "exp(" << v.log_abs_ << ")";
  }

 private:
  LogScaledValue(int sign, double log_abs) : sign_(sign), log_abs_(log_abs) {}

  int sign_ = 0;
  double log_abs_ = -std::numeric_limits<double>::infinity();
};

}  // namespace parity_lab
