#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "parity_lab/special_functions.hpp"

using namespace parity_lab;
using namespace parity_lab::special;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

/// Akiyama-Tanigawa: B_n with B_1 = +1/2; independent of the table recurrence.
BigRational akiyama_tanigawa(int n) {
  std::vector<BigRational> a(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    a[static_cast<std::size_t>(m)] = BigRational(1, m + 1);
    for (int j = m; j >= 1; --j)
      a[static_cast<std::size_t>(j - 1)] = j * (a[static_cast<std::size_t>(j - 1)] - a[static_cast<std::size_t>(j)]);
  }
  return a[0];
}

Complex dilog_series(Complex w, int terms) {
  Complex sum = 0.0;
  Complex power = w;
  for (int k = 1; k <= terms; ++k) {
    sum += power / (static_cast<double>(k) * k);
    power *= w;
  }
  return sum;
}

}  // namespace

TEST_CASE("erfc agrees with the standard library") {
  for (int i = -600; i <= 600; ++i) {
    const double x = i / 100.0;
    const double ref = std::erfc(x);
    INFO("x = " << x);
    if (ref > 1e-300) {
      REQUIRE_THAT(special::erfc(x), WithinRel(ref, 1e-13) || WithinAbs(ref, 1e-16));
    }
  }
  CHECK(special::erfc(0.0) == 1.0);
  CHECK(special::erfc(30.0) == 0.0);
  CHECK(special::erfc(-30.0) == 2.0);
  CHECK(std::isnan(special::erfc(std::nan(""))));
}

TEST_CASE("erfc is strictly decreasing on a grid") {
  double prev = special::erfc(-5.0);
  for (int i = -499; i <= 500; ++i) {
    const double v = special::erfc(i / 100.0);
    REQUIRE(v < prev);
    prev = v;
  }
}

TEST_CASE("Bernoulli numbers: known values") {
  const auto& t = BernoulliTable::standard();
  CHECK(t.number(0) == 1);
  CHECK(t.number(1) == BigRational(-1, 2));
  CHECK(t.number(2) == BigRational(1, 6));
  CHECK(t.number(4) == BigRational(-1, 30));
  CHECK(t.number(6) == BigRational(1, 42));
  CHECK(t.number(12) == BigRational(-691, 2730));
  CHECK(t.number(3) == 0);
  CHECK(t.number(59) == 0);
  CHECK_THROWS_AS(t.number(61), std::out_of_range);
  CHECK_THROWS_AS(t.number(-1), std::out_of_range);
}

TEST_CASE("Bernoulli numbers agree with the Akiyama-Tanigawa algorithm") {
  for (int n = 2; n <= 60; ++n) REQUIRE(bernoulli_number(n) == akiyama_tanigawa(n));
}

TEST_CASE("Bernoulli polynomials") {
  const BigRational x(3, 7);
  CHECK(bernoulli_poly(1, x) == x - BigRational(1, 2));
  CHECK(bernoulli_poly(2, x) == x * x - x + BigRational(1, 6));
  for (int r = 0; r <= 20; ++r) CHECK(bernoulli_poly(r, BigRational(0)) == bernoulli_number(r));
  for (int r = 2; r <= 20; ++r) CHECK(bernoulli_poly(r, BigRational(1)) == bernoulli_number(r));
  // B_r(x+1) - B_r(x) = r x^{r-1}
  for (int r = 1; r <= 25; ++r) {
    BigRational power = 1;
    for (int i = 0; i < r - 1; ++i) power *= x;
    REQUIRE(bernoulli_poly(r, x + 1) - bernoulli_poly(r, x) == r * power);
  }
  CHECK_THAT(bernoulli_poly(3, 0.25), WithinAbs(0.046875, 1e-15));
}

TEST_CASE("Bernoulli override produces an independent copy") {
  const auto bad = BernoulliTable::standard().with_override(2, BigRational(1, 5));
  CHECK(bad.number(2) == BigRational(1, 5));
  CHECK(BernoulliTable::standard().number(2) == BigRational(1, 6));
}

TEST_CASE("dilogarithm at 1/2") {
  const double ref = std::numbers::pi * std::numbers::pi / 12.0 - kLn2 * kLn2 / 2.0;
  CHECK_THAT(polylog(2, Complex(0.5, 0.0)).real(), WithinAbs(ref, 1e-15));
  CHECK_THAT(dilog_series(Complex(0.5, 0.0), 2000).real(), WithinAbs(ref, 1e-15));
}

TEST_CASE("dilogarithm against the defining series across the disc") {
  for (double r : {0.1, 0.45, 0.6, 0.8, 0.9}) {
    for (int j = 0; j < 24; ++j) {
      const double t = 2.0 * std::numbers::pi * j / 24.0;
      const Complex w = std::polar(r, t);
      const Complex ref = dilog_series(w, 2000);
      INFO("w = " << w);
      REQUIRE(std::abs(polylog(2, w) - ref) < 1e-13);
    }
  }
  // Near w = 1 the reflection branch takes over.
  const Complex w(0.97, 0.0);
  const double ref = std::numbers::pi * std::numbers::pi / 6.0 - std::log(0.97) * std::log(0.03) -
                     dilog_series(Complex(0.03, 0.0), 200).real();
  CHECK_THAT(polylog(2, w).real(), WithinAbs(ref, 1e-14));
}

TEST_CASE("polylog closed forms for s <= 1") {
  const Complex w(0.3, -0.4);
  CHECK(std::abs(polylog(1, w) + std::log(1.0 - w)) < 1e-15);
  CHECK(std::abs(polylog(0, w) - w / (1.0 - w)) < 1e-15);
  CHECK(std::abs(polylog(-1, w) - w / ((1.0 - w) * (1.0 - w))) < 1e-14);
  // Li_{-2}(w) = w (1 + w) / (1 - w)^3
  CHECK(std::abs(polylog(-2, w) - w * (1.0 + w) / std::pow(1.0 - w, 3)) < 1e-14);
  // direct series for s = -3
  Complex sum = 0.0;
  Complex power = w;
  for (int k = 1; k < 400; ++k) {
    sum += std::pow(static_cast<double>(k), 3) * power;
    power *= w;
  }
  CHECK(std::abs(polylog(-3, w) - sum) < 1e-12);
  CHECK_THROWS_AS(polylog(2, Complex(1.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(polylog(3, Complex(0.1, 0.0)), std::invalid_argument);
}

TEST_CASE("Rogers dilogarithm") {
  CHECK_THAT(rogers_L(0.5), WithinAbs(-std::numbers::pi * std::numbers::pi / 12.0, 1e-15));
  // L(w) + L(1-w) = -pi^2/6
  for (double w : {0.1, 0.25, 0.4}) CHECK_THAT(rogers_L(w) + rogers_L(1.0 - w), WithinAbs(-std::numbers::pi * std::numbers::pi / 6.0, 1e-14));
  CHECK_THROWS_AS(rogers_L(0.0), std::domain_error);
  CHECK_THROWS_AS(rogers_L(1.0), std::domain_error);
}

TEST_CASE("Lambda and s(y)") {
  for (int N = 2; N <= 6; ++N) {
    const Complex v = lambda_y(0.0, N);
    CHECK_THAT(v.real(), WithinAbs(N * std::numbers::pi * std::numbers::pi / 12.0, 1e-13));
    CHECK(v.imag() == 0.0);
    CHECK_THAT(s_of_y(0.0, N), WithinAbs(0.0, 1e-14));
    CHECK(s_of_y(1.0, N) < 0.0);
    CHECK_THAT(s_of_y(0.3, N), WithinRel(s_of_y(-0.3, N), 1e-12));
  }
  CHECK_THAT(s_of_y(2.0, 4), WithinRel(2.0 * s_of_y(2.0, 2), 1e-12));
}

TEST_CASE("gamma and its reciprocal") {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.5, 3.7, 7.25, 12.0, -0.5, -1.5, -2.3})
    CHECK_THAT(special::gamma(x), WithinRel(std::tgamma(x), 1e-13));
  CHECK_THROWS_AS(special::gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(special::gamma(-3.0), std::domain_error);
  CHECK(reciprocal_gamma(0.0) == 0.0);
  CHECK(reciprocal_gamma(-2.0) == 0.0);
  CHECK_THAT(reciprocal_gamma(0.5), WithinRel(1.0 / std::sqrt(std::numbers::pi), 1e-14));
}
