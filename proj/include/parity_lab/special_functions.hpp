#pragma once

// Double-precision special functions used by the asymptotic formulas:
// erfc, Bernoulli numbers/polynomials (exact rationals), polylogarithms of
// integer order <= 2, the Rogers dilogarithm, Lambda(y), s(y) and gamma.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "parity_lab/big_count.hpp"

namespace parity_lab::special {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

// ---------------------------------------------------------------------------
// erfc

/// Complementary error function. Positive series for |x| <= 1, Lentz
/// continued fraction beyond; erfc(-x) = 2 - erfc(x).
inline double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x <= 1.0) {
    // erf(x) = 2/sqrt(pi) e^{-x^2} sum_k 2^k x^{2k+1} / (2k+1)!!
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 200; ++k) {
      term *= 2.0 * x2 / (2.0 * k + 1.0);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return 1.0 - 2.0 / std::sqrt(kPi) * std::exp(-x2) * sum;
  }
  if (x > 27.3) return 0.0;
  // erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int k = 1; k < 5000; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / (std::sqrt(kPi) * f);
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and polynomials

/// B_0..B_60 as exact rationals, with B_1 = -1/2.
class BernoulliTable {
 public:
  static constexpr int kMaxOrder = 60;

  BernoulliTable() : numbers_(kMaxOrder + 1) {
    numbers_[0] = 1;
    for (int m = 1; m <= kMaxOrder; ++m) {
      BigRational acc = 0;
      for (int k = 0; k < m; ++k) acc += BigRational(binomial(m + 1, k)) * numbers_[static_cast<std::size_t>(k)];
      numbers_[static_cast<std::size_t>(m)] = -acc / (m + 1);
    }
  }

  static const BernoulliTable& standard() {
    static const BernoulliTable table;
    return table;
  }

  const BigRational& number(int r) const {
    check(r);
    return numbers_[static_cast<std::size_t>(r)];
  }

  /// B_r(x) = sum_k C(r,k) B_k x^{r-k}, exactly.
  BigRational poly(int r, const BigRational& x) const {
    check(r);
    BigRational acc = 0;
    BigRational power = 1;  // x^{r-k}, built from k = r downwards
    for (int k = r; k >= 0; --k) {
      acc += BigRational(binomial(r, k)) * numbers_[static_cast<std::size_t>(k)] * power;
      power *= x;
    }
    return acc;
  }

  /// B_r(x) for a double argument; x is converted exactly, rounded once.
  double poly(int r, double x) const { return poly(r, BigRational(x)).convert_to<double>(); }

  /// Copy with one entry replaced (fault-injection hook for the verifier).
  BernoulliTable with_override(int r, BigRational value) const {
    check(r);
    BernoulliTable copy = *this;
    copy.numbers_[static_cast<std::size_t>(r)] = std::move(value);
    return copy;
  }

  static BigCount binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigCount c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
  }

 private:
  static void check(int r) {
    if (r < 0 || r > kMaxOrder)
      throw std::out_of_range("Bernoulli order " + std::to_string(r) + " outside the table [0, 60]");
  }

  std::vector<BigRational> numbers_;
};

inline const BigRational& bernoulli_number(int r) { return BernoulliTable::standard().number(r); }
inline double bernoulli_poly(int r, double x) { return BernoulliTable::standard().poly(r, x); }
inline BigRational bernoulli_poly(int r, const BigRational& x) { return BernoulliTable::standard().poly(r, x); }

// ---------------------------------------------------------------------------
// Polylogarithms

namespace detail {

// B_k / (k+1)! for the dilogarithm series in u = -log(1-w).
inline const std::array<double, BernoulliTable::kMaxOrder + 1>& dilog_u_coefficients() {
  static const auto coeffs = [] {
    std::array<double, BernoulliTable::kMaxOrder + 1> c{};
    BigRational fact = 1;
    for (int k = 0; k <= BernoulliTable::kMaxOrder; ++k) {
      fact *= (k + 1);
      c[static_cast<std::size_t>(k)] = (BernoulliTable::standard().number(k) / fact).convert_to<double>();
    }
    return c;
  }();
  return coeffs;
}

inline Complex dilog_direct(Complex w) {
  Complex power = w;
  Complex sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const Complex term = power / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    power *= w;
  }
  return sum;
}

inline Complex dilog(Complex w) {
  if (std::abs(w) <= 0.5) return dilog_direct(w);
  const Complex u = -std::log(1.0 - w);
  if (std::abs(u) <= 3.0) {
    // Li_2(w) = sum_k B_k u^{k+1} / (k+1)!, |u| < 2 pi
    const auto& c = dilog_u_coefficients();
    Complex power = u;
    Complex sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k, power *= u) {
      if (c[k] == 0.0) continue;
      const Complex term = c[k] * power;
      sum += term;
      if (k > 2 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  // w close to 1: Li_2(w) + Li_2(1-w) = pi^2/6 - log(w) log(1-w)
  return kPi * kPi / 6.0 - std::log(w) * std::log(1.0 - w) - dilog_direct(1.0 - w);
}

// Stirling numbers of the second kind S(n, k), n <= 40.
inline double stirling2(int n, int k) {
  static const auto table = [] {
    std::vector<std::vector<double>> s(41, std::vector<double>(41, 0.0));
    s[0][0] = 1.0;
    for (std::size_t i = 1; i <= 40; ++i)
      for (std::size_t j = 1; j <= i; ++j) s[i][j] = static_cast<double>(j) * s[i - 1][j] + s[i - 1][j - 1];
    return s;
  }();
  return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace detail

/// Li_s(w) for integer s <= 2 and |w| < 1.
inline Complex polylog(int s, Complex w) {
  if (s > 2) throw std::invalid_argument("polylog order must be <= 2");
  if (!(std::abs(w) < 1.0)) throw std::domain_error("polylog requires |w| < 1");
  switch (s) {
    case 2: return detail::dilog(w);
    case 1: return -std::log(1.0 - w);
    case 0: return w / (1.0 - w);
    default: break;
  }
  const int k = -s;
  if (k > 39) throw std::invalid_argument("polylog order below -39 not supported");
  // Li_{-k}(w) = sum_{j=0}^{k} j! S(k+1, j+1) (w/(1-w))^{j+1}
  const Complex ratio = w / (1.0 - w);
  Complex power = ratio;
  Complex sum = 0.0;
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    sum += fact * detail::stirling2(k + 1, j + 1) * power;
    power *= ratio;
  }
  return sum;
}

/// L(w) = Li_2(w) + log(w) log(1-w) / 2 - pi^2/6 on (0, 1).
inline double rogers_L(double w) {
  if (!(w > 0.0 && w < 1.0)) throw std::domain_error("Rogers dilogarithm requires 0 < w < 1");
  return detail::dilog(Complex(w, 0.0)).real() + 0.5 * std::log(w) * std::log1p(-w) - kPi * kPi / 6.0;
}

/// Lambda(y) = N (pi^2/6 - log(2)^2 (1+iy)^2 / 2 - Li_2(2^{-(1+iy)})).
inline Complex lambda_y(double y, int N) {
  const Complex t(1.0, y);
  const Complex w = std::exp(-t * kLn2);
  return static_cast<double>(N) * (kPi * kPi / 6.0 - kLn2 * kLn2 * t * t / 2.0 - detail::dilog(w));
}

/// s(y) = Re(Lambda(y)/(1+iy)) - pi^2 N / 12.
inline double s_of_y(double y, int N) {
  const Complex t(1.0, y);
  return (lambda_y(y, N) / t).real() - kPi * kPi * N / 12.0;
}

// ---------------------------------------------------------------------------
// Gamma

/// Lanczos approximation (g = 7, 9 terms), reflection below 1/2.
inline double gamma(double x) {
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    if (x == std::floor(x)) throw std::domain_error("gamma pole at non-positive integer");
    return kPi / (std::sin(kPi * x) * gamma(1.0 - x));
  }
  x -= 1.0;
  double a = c[0];
  const double t = x + 7.5;
  for (std::size_t i = 1; i < c.size(); ++i) a += c[i] / (x + static_cast<double>(i));
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

/// 1/Gamma(x), zero at the poles.
inline double reciprocal_gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  return 1.0 / gamma(x);
}

}  // namespace parity_lab::special
