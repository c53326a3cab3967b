#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "parity_lab/asymptotics.hpp"
#include "parity_lab/distribution.hpp"

using namespace parity_lab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double rel_gap(const LogScaledValue& a, const LogScaledValue& b) { return std::abs(a.ratio_to(b) - 1.0); }

long long power(long long base, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

TEST_CASE("H matches m.m/2 + b.m with b_j = j/N - 1/2") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> entry(-6, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const int N = 2 + trial % 5;
    std::vector<int> m(static_cast<std::size_t>(N));
    for (auto& v : m) v = entry(rng);
    Rational direct(0);
    for (int j = 1; j <= N; ++j) {
      const auto mj = m[static_cast<std::size_t>(j - 1)];
      direct += Rational(mj * mj, 2) + Rational(j, N) * mj - Rational(mj, 2);
    }
    REQUIRE(H_value(m) == direct);
    REQUIRE(H_value(m) * N == Rational(scaled_h(m)));
  }
  CHECK_THROWS_AS(H_value({}), std::invalid_argument);
}

TEST_CASE("each residue class holds N^{N-1} tuples") {
  for (int N = 2; N <= 6; ++N)
    for (long long n = 0; n < 2 * N; ++n) REQUIRE(static_cast<long long>(residue_tuples(n, N).size()) == power(N, N - 1));
  CHECK_THROWS_AS(residue_tuples(5, 7), std::invalid_argument);
  CHECK_THROWS_AS(residue_tuples(5, 1), std::invalid_argument);
}

TEST_CASE("residue tuples satisfy their defining congruence") {
  for (const auto& l : residue_tuples(11, 4)) REQUIRE(mod_floor(scaled_h(l.entries), 4) == 3);
  CHECK(residue_tuples(-1, 3).size() == residue_tuples(2, 3).size());
}

TEST_CASE("classes with fixed l_alpha, l_beta hold N^{N-3} tuples for N >= 5") {
  for (int N : {5, 6})
    for (int r = 0; r < N; ++r)
      for (int la = 0; la < N; ++la)
        for (int lb = 0; lb < N; ++lb) REQUIRE(l_count_check(N, 2, N, r, la, lb) == power(N, N - 3));
}

TEST_CASE("class counts add up for small N") {
  for (int N = 2; N <= 4; ++N)
    for (int la = 0; la < N; ++la)
      for (int lb = 0; lb < N; ++lb) {
        long long total = 0;
        for (int r = 0; r < N; ++r) total += l_count_check(N, 1, 2, r, la, lb);
        REQUIRE(total == power(N, N - 2));
      }
  CHECK_THROWS_AS(l_count_check(5, 2, 2, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("threshold snaps near-integer values") {
  const Threshold exact = threshold(1.0, 16);
  CHECK(exact.ceil_value == 2);
  CHECK(exact.partial == 0.0);
  CHECK(threshold(1.0, 81).ceil_value == 3);
  CHECK(threshold(0.5, 16).ceil_value == 1);
  const Threshold frac = threshold(1.0, 17);
  CHECK(frac.ceil_value == 3);
  CHECK_THAT(frac.partial, WithinAbs(3.0 - std::pow(17.0, 0.25), 1e-15));
  CHECK(threshold(0.0, 1000).ceil_value == 0);
}

TEST_CASE("boundary data: kappa is the least admissible integer above the threshold") {
  const ParitySpec spec(5, 2, 4);
  for (long long n : {100LL, 101LL, 977LL})
    for (double c0 : {0.0, 0.3, 1.0, 1.7})
      for (const auto& l : residue_tuples(n, 5)) {
        const BoundaryData b = boundary_data(c0, n, l, spec);
        const double c = c0 * quarter_power(static_cast<double>(n));
        REQUIRE(mod_floor(b.kappa - (l.entry(2) - l.entry(4)), 5) == 0);
        REQUIRE(static_cast<double>(b.kappa) >= c - 1e-9);
        REQUIRE(static_cast<double>(b.kappa) - 5.0 < c);
        REQUIRE(b.partial_star >= b.partial);
        REQUIRE(b.partial_star < b.partial + 5.0);
      }
  CHECK_THROWS_AS(boundary_data(1.0, 100, residue_tuples(100, 3).front(), spec), std::invalid_argument);
}

TEST_CASE("closed form equals the tuple sum for N = 2 and N >= 5") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long long> ns(1, 20000);
  std::uniform_real_distribution<double> c0s(0.0, 2.5);
  const std::vector<ParitySpec> specs = {{2, 1, 2}, {2, 2, 1}, {5, 3, 1}, {6, 2, 5}};
  for (int trial = 0; trial < 60; ++trial) {
    const ParitySpec& spec = specs[static_cast<std::size_t>(trial) % specs.size()];
    const long long n = ns(rng);
    const double c0 = c0s(rng);
    const EstimateTerms a = estimate_thm1(n, spec, c0);
    const EstimateTerms b = estimate_thm2(n, spec, c0);
    INFO("N=" << spec.modulus() << " n=" << n << " c0=" << c0);
    REQUIRE(rel_gap(a.total, b.total) < 1e-12);
    REQUIRE(rel_gap(a.main, b.main) < 1e-12);
    if (spec.modulus() >= 5) REQUIRE(rel_gap(estimate_thm1(n, spec, c0, TupleSum::class_counting).total, a.total) < 1e-12);
  }
  CHECK_THROWS_AS(estimate_thm2(100, ParitySpec(3, 1, 2), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_thm2(100, ParitySpec(4, 1, 2), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_thm1(100, ParitySpec(3, 1, 2), 1.0, TupleSum::class_counting), std::invalid_argument);
  CHECK_THROWS_AS(estimate_thm1(100, ParitySpec(7, 1, 2), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_thm1(0, ParitySpec(2, 1, 2), 1.0), std::invalid_argument);
}

TEST_CASE("per-tuple terms sum to the totals") {
  const EstimateTerms e = estimate_thm1(500, ParitySpec(3, 1, 2), 1.0);
  CHECK(e.per_tuple.size() == 9);
  LogScaledValue main, second;
  for (const auto& t : e.per_tuple) {
    main += t.main;
    second += t.second;
  }
  CHECK(rel_gap(main, e.main) < 1e-13);
  CHECK(rel_gap(second, e.second) < 1e-12);
}

TEST_CASE("at c0 = 0 the main term is half of Hua's estimate") {
  for (int N = 2; N <= 6; ++N)
    for (long long n : {10LL, 1000LL, 100000LL}) REQUIRE(rel_gap(estimate_thm1(n, ParitySpec(N, 1, N), 0.0).main,
                                                                estimate_hua(n) * LogScaledValue::from_double(0.5)) < 1e-12);
}

TEST_CASE("N = 3 sigma table") {
  const int expected[3][3] = {{0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) {
      CHECK(sigma_n3(r, s) == expected[r][s]);
      long long acc = 0;
      const auto tuples = residue_tuples(r, 3);
      for (const auto& l : tuples) acc += mod_floor(l.entry(1) - l.entry(2) - s, 3);
      CHECK(acc == 3 * sigma_n3(r, s) * 3);
    }
  for (long long n = 1; n < 400; n += 7)
    for (double c0 : {0.0, 0.9, 1.3}) {
      // totals can nearly cancel (n = 162, c0 = 0.9), so compare the two terms separately
      const auto table_form = estimate_n3_table(n, c0);
      const auto general = estimate_thm1(n, ParitySpec(3, 1, 2), c0);
      REQUIRE(rel_gap(table_form.main, general.main) < 1e-12);
      REQUIRE(rel_gap(table_form.second, general.second) < 1e-12);
    }
}

TEST_CASE("Hua and bias estimates track the exact counts") {
  const PdTable table(1500, ParitySpec(2, 1, 2));
  for (int n : {500, 1000, 1500}) {
    const PdDistribution d = table.distribution(n);
    CHECK_THAT(LogScaledValue::from_exact(d.total()).ratio_to(estimate_hua(n)), WithinAbs(1.0, 0.01));
    const BiasProfile p = build_bias_profile(d);
    CHECK_THAT(LogScaledValue::from_exact(p.normalizer).ratio_to(estimate_bias(n, ParitySpec(2, 1, 2))),
               WithinAbs(1.0, 0.05));
  }
  CHECK(estimate_bias(1000, ParitySpec(2, 2, 1)).sign() < 0);
}

TEST_CASE("saddle-point coefficients") {
  const double B = std::numbers::pi * std::sqrt(2.0 / 12.0);
  CHECK_THAT(nr_coefficient(0.0, B, 0), WithinRel(std::pow(2.0, 0.25) / (2.0 * std::pow(12.0, 0.25)), 1e-14));
  CHECK_THAT(nr_coefficient(0.5, B, 0), WithinRel(std::sqrt(2.0 * std::numbers::pi) / (4.0 * std::sqrt(3.0)), 1e-14));
  CHECK_THAT(nr_coefficient(0.0, B, 1), WithinRel(-3.0 / (32.0 * std::sqrt(std::numbers::pi * B)), 1e-13));
  for (int r = 2; r < 8; ++r) CHECK(nr_coefficient(0.5, B, r) == 0.0);
  CHECK(nr_coefficient(1.5, B, 3) == 0.0);
  CHECK(nr_coefficient(1.5, B, 2) != 0.0);
  CHECK_THROWS_AS(nr_coefficient(-1.0, B, 0), std::invalid_argument);
  CHECK_THROWS_AS(nr_coefficient(0.0, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(nr_coefficient(0.0, B, -1), std::invalid_argument);
}

TEST_CASE("contour integral agrees with the Bessel function") {
  // Full contour: B^{A+1} n^{1/4} e^{-2B sqrt n} I_{-A-1}(2B sqrt n); the arc
  // |y| <= 1 differs by an exponentially small amount.
  const double B = std::numbers::pi * std::sqrt(3.0 / 12.0);
  for (double A : {0.0, 0.5, 1.0})
    for (long long n : {900LL, 2500LL}) {
      const double x = 2.0 * B * std::sqrt(static_cast<double>(n));
      const double ref = std::pow(B, A + 1.0) * std::pow(static_cast<double>(n), 0.25) * std::exp(-x) *
                         boost::math::cyl_bessel_i(-A - 1.0, x);
      const Complex v = nr_contour_integral(A, B, n);
      REQUIRE_THAT(v.real(), WithinRel(ref, 1e-9));
      REQUIRE(std::abs(v.imag()) < 1e-12);
    }
}

TEST_CASE("contour integral: expansion residual shrinks with n") {
  const double B = std::numbers::pi * std::sqrt(2.0 / 12.0);
  auto residual = [&](long long n) {
    return nr_contour_integral(0.0, B, n).real() - nr_coefficient(0.0, B, 0) -
           nr_coefficient(0.0, B, 1) / std::sqrt(static_cast<double>(n));
  };
  CHECK(std::abs(residual(1600)) < std::abs(residual(400)));
}

TEST_CASE("contour integral preconditions and convergence guard") {
  CHECK_THROWS_AS(nr_contour_integral(0.0, 1.0, 100, 1.0, 999), std::invalid_argument);
  CHECK_THROWS_AS(nr_contour_integral(0.0, 1.0, 100, 40.0), std::invalid_argument);
  CHECK_THROWS_AS(nr_contour_integral(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(nr_contour_integral(-0.5, 1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(nr_contour_integral(3.0, 0.01, 1, 300.0, 1000), quadrature_failure);
}

TEST_CASE("Gaussian tail closed forms match quadrature") {
  for (const ParitySpec& spec : {ParitySpec(2, 1, 2), ParitySpec(4, 3, 1), ParitySpec(6, 6, 2)})
    for (double t : {0.0, 0.8, 2.0}) {
      const GaussianTail closed = gaussian_tail_integrals(t, spec);
      const GaussianTail quad = gaussian_tail_quadrature(t, spec);
      CHECK_THAT(quad.c0_integral, WithinRel(closed.c0_integral, 1e-10));
      CHECK_THAT(quad.c1_integral, WithinRel(closed.c1_integral, 1e-9));
    }
  CHECK_THAT(gaussian_tail_integrals(0.0, ParitySpec(2, 1, 2)).c0_integral, WithinRel(std::numbers::pi / 2.0, 1e-15));
}
