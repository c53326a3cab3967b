#pragma once

// Euler-Maclaurin summation along a ray a + t z, t >= 0, for functions that
// decay rapidly along the ray:
//
//   sum_{n>=0} f(nz + a) = int_0^inf f(a + tz) dt + f(a)/2
//                          - sum_{r=1}^R B_{2r} z^{2r-1} / (2r)! f^{(2r-1)}(a) + residual

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "parity_lab/special_functions.hpp"

namespace parity_lab {

using special::Complex;

struct EmfReport {
  Complex sum_value{};
  Complex integral_term{};
  Complex boundary_term{};
  std::vector<Complex> correction_terms;  // r = 1..R
  Complex residual{};
  std::size_t terms_summed = 0;
};

class non_decaying_function : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using HolomorphicFn = std::function<Complex(Complex)>;
/// (order, point) -> f^{(order)}(point)
using DerivativeFn = std::function<Complex(int, Complex)>;

/// Weights w_j (j = -M..M) with f^{(k)}(0) ~ h^{-k} sum_j w_j f(j h), by
/// Fornberg's recursion on the equispaced central stencil.
inline std::vector<double> central_difference_weights(int order, int half_width) {
  const int points = 2 * half_width + 1;
  std::vector<double> nodes(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) nodes[static_cast<std::size_t>(j)] = j - half_width;
  // c[i][m]: weight of node i for the m-th derivative.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(points), std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0];
  c[0][0] = 1.0;
  for (int i = 1; i < points; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[iu];
    for (int j = 0; j < i; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const double c3 = nodes[iu] - nodes[ju];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          const auto ku = static_cast<std::size_t>(k);
          c[iu][ku] = c1 * (k * c[iu - 1][ku - 1] - c5 * c[iu - 1][ku]) / c2;
        }
        c[iu][0] = -c1 * c5 * c[iu - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        const auto ku = static_cast<std::size_t>(k);
        c[ju][ku] = (c4 * c[ju][ku] - k * c[ju][ku - 1]) / c3;
      }
      c[ju][0] = c4 * c[ju][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(order)];
  return w;
}

/// Fourth-order central difference for f^{(order)}(x), stepping along the
/// real axis. Step h = eps^{1/(order+4)} * scale balances truncation against
/// rounding for each order.
inline Complex finite_difference_derivative(const HolomorphicFn& f, int order, Complex x, double scale = 1.0) {
  if (order == 0) return f(x);
  const int half_width = (order + 1) / 2 + 1;
  const auto w = central_difference_weights(order, half_width);
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (order + 4)) * scale;
  Complex acc = 0.0;
  for (int j = -half_width; j <= half_width; ++j) {
    const double wj = w[static_cast<std::size_t>(j + half_width)];
    if (wj != 0.0) acc += wj * f(x + Complex(j * h, 0.0));
  }
  return acc / std::pow(h, order);
}

struct EmfOptions {
  /// Supplied derivatives; finite differences when empty.
  std::optional<DerivativeFn> derivative;
  /// Direct summation stops once consecutive terms fall below this.
  double term_tolerance = 1e-18;
  std::size_t max_terms = 50'000'000;
  double quadrature_tolerance = 1e-14;
};

inline EmfReport euler_maclaurin(const HolomorphicFn& f, Complex a, Complex z, int R, const EmfOptions& options = {}) {
  if (R < 0) throw std::invalid_argument("R must be non-negative");
  if (2 * R > special::BernoulliTable::kMaxOrder) throw std::out_of_range("R exceeds the Bernoulli table");
  if (z == Complex(0.0, 0.0)) throw std::invalid_argument("step z must be nonzero");
  EmfReport report;

  // Direct sum; stop after a run of negligible terms.
  Complex sum = 0.0;
  int quiet = 0;
  double previous = std::numeric_limits<double>::infinity();
  int growth = 0;
  std::size_t n = 0;
  for (; n < options.max_terms; ++n) {
    const Complex term = f(static_cast<double>(n) * z + a);
    sum += term;
    const double mag = std::abs(term);
    if (!std::isfinite(mag)) throw non_decaying_function("summand is not finite");
    quiet = mag < options.term_tolerance ? quiet + 1 : 0;
    if (quiet >= 8) break;
    growth = (mag > previous && mag > options.term_tolerance) ? growth + 1 : 0;
    if (growth > 1000) throw non_decaying_function("summand grows along the ray");
    previous = mag;
  }
  if (n == options.max_terms) throw non_decaying_function("summand does not decay along the ray");
  report.sum_value = sum;
  report.terms_summed = n + 1;

  // int_0^inf f(a + t z) dt, real and imaginary parts separately.
  boost::math::quadrature::exp_sinh<double> integrator;
  auto part = [&](bool imag) {
    return integrator.integrate(
        [&](double t) {
          const Complex v = f(a + t * z);
          return imag ? v.imag() : v.real();
        },
        options.quadrature_tolerance);
  };
  report.integral_term = Complex(part(false), part(true));

  const Complex fa = f(a);
  report.boundary_term = fa / 2.0;

  const double scale = std::max(1.0, std::abs(z));
  Complex zpow = z;  // z^{2r-1}
  BigRational fact = 1;
  for (int r = 1; r <= R; ++r) {
    fact *= (2 * r - 1) * (2 * r);
    const double coeff = (special::bernoulli_number(2 * r) / fact).convert_to<double>();
    const Complex deriv = options.derivative ? (*options.derivative)(2 * r - 1, a)
                                             : finite_difference_derivative(f, 2 * r - 1, a, scale);
    report.correction_terms.push_back(-coeff * zpow * deriv);
    zpow *= z * z;
  }

  Complex rhs = report.integral_term + report.boundary_term;
  for (const auto& c : report.correction_terms) rhs += c;
  report.residual = report.sum_value - rhs;
  return report;
}

}  // namespace parity_lab
