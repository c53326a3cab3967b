#pragma once

// Closed-form asymptotics for d_{alpha,beta;N;c}(n) with c = c0 n^{1/4}:
// the quadratic form H, residue tuples, threshold bookkeeping, the two-term
// expansion summed over residue tuples and its closed form for N = 2 and
// N >= 5, the classical main term for d(n), the bias main term, and the
// saddle-point integral coefficients T_{A,B,r} with a quadrature cross-check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/rational.hpp>

#include "parity_lab/exact_counts.hpp"
#include "parity_lab/log_scaled.hpp"
#include "parity_lab/special_functions.hpp"

namespace parity_lab {

using Rational = boost::rational<std::int64_t>;
using special::Complex;

inline constexpr int kMaxTupleModulus = 6;

/// Element of {0..N-1}^N; entry(j) is 1-based to match residue indexing.
struct ResidueTuple {
  std::vector<int> entries;

  int modulus() const noexcept { return static_cast<int>(entries.size()); }
  int entry(int j) const { return entries.at(static_cast<std::size_t>(j - 1)); }

  friend bool operator==(const ResidueTuple&, const ResidueTuple&) = default;
};

/// N * H(m) = sum_j [N m_j (m_j - 1)/2 + j m_j], always an integer.
inline std::int64_t scaled_h(const std::vector<int>& m) {
  const auto N = static_cast<std::int64_t>(m.size());
  std::int64_t acc = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const std::int64_t mj = m[j];
    acc += N * mj * (mj - 1) / 2 + static_cast<std::int64_t>(j + 1) * mj;
  }
  return acc;
}

/// H(m) = m.m/2 + b.m with b_j = j/N - 1/2.
inline Rational H_value(const std::vector<int>& m) {
  if (m.empty()) throw std::invalid_argument("H needs a non-empty vector");
  return {scaled_h(m), static_cast<std::int64_t>(m.size())};
}

/// [x]_N: least non-negative residue.
constexpr long long mod_floor(long long x, long long N) noexcept {
  const long long r = x % N;
  return r < 0 ? r + N : r;
}

inline void require_tuple_modulus(int N) {
  if (N < 2 || N > kMaxTupleModulus)
    throw std::invalid_argument("residue-tuple enumeration supports 2 <= N <= 6");
}

/// Calls visit(tuple) for every tuple in {0..N-1}^N, odometer order.
template <class Visit>
void for_each_tuple(int N, Visit&& visit) {
  std::vector<int> l(static_cast<std::size_t>(N), 0);
  while (true) {
    visit(l);
    std::size_t j = l.size();
    while (j > 0) {
      --j;
      if (++l[j] < N) break;
      l[j] = 0;
      if (j == 0) return;
    }
  }
}

/// Tuples l with N H(l) = n (mod N).
inline std::vector<ResidueTuple> residue_tuples(long long n, int N) {
  require_tuple_modulus(N);
  std::vector<ResidueTuple> out;
  const long long target = mod_floor(n, N);
  for_each_tuple(N, [&](const std::vector<int>& l) {
    if (mod_floor(scaled_h(l), N) == target) out.push_back({l});
  });
  return out;
}

/// #{l_[2] : N H(l_[2], l_alpha, l_beta) = r (mod N)} over the N-2 free
/// coordinates; N^{N-3} whenever N >= 5.
inline long long l_count_check(int N, int alpha, int beta, int r, int l_alpha, int l_beta) {
  require_tuple_modulus(N);
  const ParitySpec spec(N, alpha, beta);  // validates indices
  long long count = 0;
  const long long target = mod_floor(r, N);
  std::vector<int> full(static_cast<std::size_t>(N));
  full[static_cast<std::size_t>(alpha - 1)] = static_cast<int>(mod_floor(l_alpha, N));
  full[static_cast<std::size_t>(beta - 1)] = static_cast<int>(mod_floor(l_beta, N));
  const auto visit_free = [&](const std::vector<int>& free) {
    std::size_t next = 0;
    for (int j = 1; j <= N; ++j)
      if (j != alpha && j != beta) full[static_cast<std::size_t>(j - 1)] = free[next++];
    if (mod_floor(scaled_h(full), N) == target) ++count;
  };
  if (N == 2) {
    visit_free({});
  } else {
    std::vector<int> free(static_cast<std::size_t>(N - 2), 0);
    while (true) {
      visit_free(free);
      std::size_t j = free.size();
      while (j > 0 && ++free[j - 1] == N) free[--j] = 0;
      if (j == 0) break;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Threshold bookkeeping

inline constexpr double kNearIntegerGuard = 1e-9;

/// ceil(c0 n^{1/4}) and the fractional gap to it. Thresholds within 1e-9 of
/// an integer snap to that integer with gap 0.
struct Threshold {
  double value = 0.0;
  long long ceil_value = 0;
  double partial = 0.0;
};

inline double quarter_power(double n) { return std::sqrt(std::sqrt(n)); }

inline Threshold threshold(double c0, long long n) {
  Threshold t;
  t.value = c0 * quarter_power(static_cast<double>(n));
  const double nearest = std::round(t.value);
  if (std::abs(t.value - nearest) < kNearIntegerGuard) {
    t.ceil_value = static_cast<long long>(nearest);
    t.partial = 0.0;
  } else {
    t.ceil_value = static_cast<long long>(std::ceil(t.value));
    t.partial = static_cast<double>(t.ceil_value) - t.value;
  }
  return t;
}

struct BoundaryData {
  double partial = 0.0;       // ceil(c) - c, in [0, 1)
  double partial_star = 0.0;  // partial + [l_alpha - l_beta - ceil(c)]_N
  long long kappa = 0;        // least integer >= c congruent to l_alpha - l_beta
  long long ceil_c = 0;
};

inline BoundaryData boundary_data(double c0, long long n, const ResidueTuple& l, const ParitySpec& spec) {
  if (n < 1) throw std::invalid_argument("boundary data needs n >= 1");
  if (l.modulus() != spec.modulus()) throw std::invalid_argument("tuple length differs from N");
  const int N = spec.modulus();
  const Threshold t = threshold(c0, n);
  const long long residue = l.entry(spec.alpha()) - l.entry(spec.beta());

  BoundaryData b;
  b.ceil_c = t.ceil_value;
  b.partial = t.partial;
  b.kappa = t.ceil_value;
  while (mod_floor(b.kappa - residue, N) != 0) ++b.kappa;
  b.partial_star = t.partial + static_cast<double>(mod_floor(residue - t.ceil_value, N));

  if (std::abs(static_cast<double>(b.kappa) - (t.value + b.partial_star)) > 1e-9 * std::max(1.0, std::abs(t.value)))
    throw std::logic_error("kappa disagrees with c0 n^{1/4} + partial_star");
  return b;
}

// ---------------------------------------------------------------------------
// Two-term estimates

struct TupleTerm {
  ResidueTuple tuple;
  BoundaryData boundary;
  LogScaledValue main;
  LogScaledValue second;
};

struct EstimateTerms {
  LogScaledValue main;
  LogScaledValue second;
  LogScaledValue total;
  std::vector<TupleTerm> per_tuple;
};

/// How the tuple sum is evaluated for N >= 5.
enum class TupleSum {
  enumerate,       // visit all N^{N-1} admissible tuples
  class_counting,  // group by (l_alpha, l_beta), each class holding N^{N-3} tuples
};

namespace detail {

/// e^{pi sqrt(n/3)} n^{-3/4}
inline LogScaledValue growth_scale(long long n) {
  const double nd = static_cast<double>(n);
  return LogScaledValue::from_log(1, std::numbers::pi * std::sqrt(nd / 3.0) - 0.75 * std::log(nd));
}

inline double erfc_argument(double c0, int N) {
  return c0 * std::sqrt(std::numbers::pi * N) / (2.0 * quarter_power(3.0));
}

inline double gaussian_damping(double c0, int N) {
  return std::exp(-c0 * c0 * std::numbers::pi * N / (4.0 * std::sqrt(3.0)));
}

inline EstimateTerms assemble(long long n, double main_coeff, double second_coeff, std::vector<TupleTerm> tuples = {}) {
  const LogScaledValue scale = growth_scale(n);
  EstimateTerms e;
  e.main = scale * LogScaledValue::from_double(main_coeff);
  e.second = scale * LogScaledValue::from_double(second_coeff);
  e.total = e.main + e.second;
  e.per_tuple = std::move(tuples);
  return e;
}

}  // namespace detail

/// Sum over residue tuples of the per-tuple main and second terms.
inline EstimateTerms estimate_thm1(long long n, const ParitySpec& spec, double c0, TupleSum mode = TupleSum::enumerate) {
  if (n < 1) throw std::invalid_argument("estimates need n >= 1");
  const int N = spec.modulus();
  require_tuple_modulus(N);
  const double Nd = N;
  const double main_each = special::erfc(detail::erfc_argument(c0, N)) /
                           (8.0 * quarter_power(3.0) * std::pow(Nd, N - 1));
  const double second_scale = detail::gaussian_damping(c0, N) /
                              (16.0 * std::sqrt(3.0) * std::pow(Nd, N - 0.5) * quarter_power(static_cast<double>(n)));
  const double bias = spec.beta() - spec.alpha();
  auto second_each = [&](double partial_star) { return second_scale * (Nd * Nd - 2.0 * partial_star * Nd + bias); };

  if (mode == TupleSum::class_counting) {
    if (N < 5) throw std::invalid_argument("class counting needs N >= 5");
    const Threshold t = threshold(c0, n);
    const double multiplicity = std::pow(Nd, N - 3);
    long double second_sum = 0.0L;
    for (int la = 0; la < N; ++la)
      for (int lb = 0; lb < N; ++lb)
        second_sum += multiplicity * second_each(t.partial + static_cast<double>(mod_floor(la - lb - t.ceil_value, N)));
    return detail::assemble(n, main_each * std::pow(Nd, N - 1), static_cast<double>(second_sum));
  }

  const LogScaledValue scale = detail::growth_scale(n);
  std::vector<TupleTerm> terms;
  long double second_sum = 0.0L;
  auto tuples = residue_tuples(n, N);
  const double main_sum = main_each * static_cast<double>(tuples.size());
  for (auto& tuple : tuples) {
    const BoundaryData b = boundary_data(c0, n, tuple, spec);
    const double s = second_each(b.partial_star);
    second_sum += s;
    terms.push_back({std::move(tuple), b, scale * LogScaledValue::from_double(main_each),
                     scale * LogScaledValue::from_double(s)});
  }
  return detail::assemble(n, main_sum, static_cast<double>(second_sum), std::move(terms));
}

/// Closed form for N = 2 or N >= 5:
/// main erfc term + e^{-c0^2 pi N/(4 sqrt3)} (beta - alpha + N - 2N partial) / (16 sqrt(3N)) n^{-1/4}.
inline EstimateTerms estimate_thm2(long long n, const ParitySpec& spec, double c0) {
  if (n < 1) throw std::invalid_argument("estimates need n >= 1");
  const int N = spec.modulus();
  if (N != 2 && N < 5) throw std::invalid_argument("closed-form estimate needs N = 2 or N >= 5");
  const Threshold t = threshold(c0, n);
  const double main = special::erfc(detail::erfc_argument(c0, N)) / (8.0 * quarter_power(3.0));
  const double second = detail::gaussian_damping(c0, N) *
                        (spec.beta() - spec.alpha() + N - 2.0 * N * t.partial) /
                        (16.0 * std::sqrt(3.0 * N) * quarter_power(static_cast<double>(n)));
  return detail::assemble(n, main, second);
}

/// sigma_{r,s} for N = 3, (alpha, beta) = (1, 2); r = n mod 3, s = ceil(c) mod 3.
inline int sigma_n3(int r, int s) {
  static constexpr int table[3][3] = {{0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
  return table[mod_floor(r, 3)][mod_floor(s, 3)];
}

/// Tabulated closed form for N = 3, (alpha, beta) = (1, 2):
/// second term e^{-c0^2 pi N/(4 sqrt3)} (10 - 6 (partial + sigma_{r,s})) / 48 n^{-1/4}.
inline EstimateTerms estimate_n3_table(long long n, double c0) {
  if (n < 1) throw std::invalid_argument("estimates need n >= 1");
  const Threshold t = threshold(c0, n);
  const int sigma = sigma_n3(static_cast<int>(mod_floor(n, 3)), static_cast<int>(mod_floor(t.ceil_value, 3)));
  const double main = special::erfc(c0 * std::sqrt(std::numbers::pi) * quarter_power(3.0) / 2.0) / (8.0 * quarter_power(3.0));
  const double second = detail::gaussian_damping(c0, 3) * (10.0 - 6.0 * (t.partial + sigma)) /
                        (48.0 * quarter_power(static_cast<double>(n)));
  return detail::assemble(n, main, second);
}

/// d(n) ~ e^{pi sqrt(n/3)} / (4 3^{1/4} n^{3/4}).
inline LogScaledValue estimate_hua(long long n) {
  if (n < 1) throw std::invalid_argument("estimates need n >= 1");
  return detail::growth_scale(n) * LogScaledValue::from_double(1.0 / (4.0 * quarter_power(3.0)));
}

/// d_{alpha,beta;N;0} - d_{beta,alpha;N;0} ~ e^{pi sqrt(n/3)} n^{-1} (beta - alpha) / (8 sqrt(3N)).
inline LogScaledValue estimate_bias(long long n, const ParitySpec& spec) {
  if (n < 1) throw std::invalid_argument("estimates need n >= 1");
  const double nd = static_cast<double>(n);
  const double coeff = (spec.beta() - spec.alpha()) / (8.0 * std::sqrt(3.0 * spec.modulus()));
  return LogScaledValue::from_log(1, std::numbers::pi * std::sqrt(nd / 3.0) - std::log(nd)) *
         LogScaledValue::from_double(coeff);
}

// ---------------------------------------------------------------------------
// Saddle-point integral (1/2 pi i) int z^A e^{B^2/z + n z} dz

/// T_{A,B,r} = (-4B)^{-r} B^{A+1/2} Gamma(A+r+3/2) / (2 sqrt(pi) r! Gamma(A-r+3/2)),
/// zero where the denominator gamma has a pole.
inline double nr_coefficient(double A, double B, int r) {
  if (A < 0.0) throw std::invalid_argument("A must be non-negative");
  if (!(B > 0.0)) throw std::invalid_argument("B must be positive");
  if (r < 0) throw std::invalid_argument("r must be non-negative");
  const double rg = special::reciprocal_gamma(A - r + 1.5);
  if (rg == 0.0) return 0.0;
  double r_fact = 1.0;
  for (int i = 2; i <= r; ++i) r_fact *= i;
  return std::pow(-4.0 * B, -r) * std::pow(B, A + 0.5) * special::gamma(A + r + 1.5) * rg /
         (2.0 * std::sqrt(std::numbers::pi) * r_fact);
}

class quadrature_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Trapezoid over y in [-theta, theta] of (1+iy)^A exp(-B sqrt(n) y^2 / (1+iy)).
inline Complex nr_trapezoid(double A, double B, double n, double theta, int intervals) {
  const double h = 2.0 * theta / intervals;
  const double b_root_n = B * std::sqrt(n);
  Complex acc = 0.0;
  for (int j = 0; j <= intervals; ++j) {
    const double y = -theta + j * h;
    const Complex w(1.0, y);
    const Complex v = std::pow(w, A) * std::exp(-b_root_n * y * y / w);
    acc += (j == 0 || j == intervals) ? 0.5 * v : v;
  }
  return acc * h;
}

}  // namespace detail

/// The major-arc integral on z = eta (1 + iy), |y| <= theta, eta = B / sqrt(n),
/// divided by n^{(-2A-3)/4} e^{2B sqrt(n)}. The exponent is evaluated after
/// cancelling e^{2B sqrt(n)} analytically, so the result is O(1).
inline Complex nr_contour_integral(double A, double B, long long n, double theta = 1.0, int mesh = 4096) {
  if (A < 0.0 || !(B > 0.0)) throw std::invalid_argument("need A >= 0 and B > 0");
  if (n < 1) throw std::invalid_argument("n must be positive");
  const double nd = static_cast<double>(n);
  if (!(theta > 0.0 && theta < std::numbers::pi * std::sqrt(nd) / B))
    throw std::invalid_argument("theta outside (0, pi sqrt(n) / B)");
  if (mesh < 1000) throw std::invalid_argument("mesh must be at least 1000");
  const Complex fine = detail::nr_trapezoid(A, B, nd, theta, mesh);
  const Complex coarse = detail::nr_trapezoid(A, B, nd, theta, mesh / 2);
  const double prefactor = std::pow(B, A + 1.0) * quarter_power(nd) / (2.0 * std::numbers::pi);
  if (std::abs(fine - coarse) * prefactor > 1e-6)
    throw quadrature_failure("contour quadrature not converged; increase mesh");
  return prefactor * fine;
}

// ---------------------------------------------------------------------------
// Gaussian tail integrals over {u in R^N : u_alpha - u_beta >= t}

struct GaussianTail {
  double c0_integral = 0.0;  // int e^{-u.u}
  double c1_integral = 0.0;  // int C_1(u) e^{-u.u}, C_1(u) = sum_j -j u_j / N + u_j^3 / 3
};

/// Closed forms: pi^{N/2}/2 erfc(t/sqrt2) and e^{-t^2/2} (beta-alpha) pi^{(N-1)/2} / (2 sqrt2 N).
/// With t = kappa sqrt(eta) these are the two tails entering the main and
/// second terms.
inline GaussianTail gaussian_tail_integrals(double t, const ParitySpec& spec) {
  const double N = spec.modulus();
  const double pi = std::numbers::pi;
  return {std::pow(pi, N / 2.0) / 2.0 * special::erfc(t / std::sqrt(2.0)),
          std::exp(-t * t / 2.0) * (spec.beta() - spec.alpha()) * std::pow(pi, (N - 1.0) / 2.0) /
              (2.0 * std::sqrt(2.0) * N)};
}

/// Same integrals by quadrature. Coordinates other than alpha, beta factor
/// out (their odd C_1 terms vanish); the remaining plane is rotated to
/// p = (u_a - u_b)/sqrt2, q = (u_a + u_b)/sqrt2 and integrated numerically
/// over q in R and p >= t/sqrt2.
inline GaussianTail gaussian_tail_quadrature(double t, const ParitySpec& spec) {
  const double N = spec.modulus();
  const double a = spec.alpha();
  const double b = spec.beta();
  const double pi = std::numbers::pi;
  const double s2 = std::sqrt(2.0);
  boost::math::quadrature::sinh_sinh<double> inner;
  boost::math::quadrature::exp_sinh<double> outer;

  auto plane = [&](auto&& integrand) {
    return outer.integrate(
        [&](double p) {
          return inner.integrate(
              [&](double q) {
                const double weight = std::exp(-p * p - q * q);
                return weight == 0.0 ? 0.0 : integrand((q + p) / s2, (q - p) / s2) * weight;
              },
                                 1e-13);
        },
        t / s2, std::numeric_limits<double>::infinity(), 1e-13);
  };
  const double rest = std::pow(pi, (N - 2.0) / 2.0);
  const double c0 = rest * plane([](double, double) { return 1.0; });
  const double c1 = rest * plane([&](double ua, double ub) {
    return -(a * ua + b * ub) / N + (ua * ua * ua + ub * ub * ub) / 3.0;
  });
  return {c0, c1};
}

}  // namespace parity_lab
