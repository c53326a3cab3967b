#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "parity_lab/verify.hpp"

using namespace parity_lab;
using namespace parity_lab::verify;

namespace {
const double kB = std::numbers::pi * std::sqrt(2.0 / 12.0);
}

TEST_CASE("s(y) negativity on the default grid") {
  for (int N = 2; N <= 6; ++N) {
    const CheckResult r = check_sy_negativity(N);
    CHECK(r.passed);
    CHECK(r.observed < 0.0);
    CHECK(r.samples == 400);
  }
  CHECK_THROWS_AS(check_sy_negativity(2, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(check_sy_negativity(2, {}), std::invalid_argument);
}

TEST_CASE("default grid is symmetric and log spaced") {
  const auto& g = default_y_grid();
  REQUIRE(g.size() == 400);
  CHECK_THAT(g.front(), Catch::Matchers::WithinRel(-50.0, 1e-12));
  CHECK_THAT(g[200], Catch::Matchers::WithinRel(1e-3, 1e-12));
  for (std::size_t i = 0; i < 200; ++i) CHECK(g[i] == -g[399 - i]);
}

TEST_CASE("s(y) stays away from zero for |y| >= y0") {
  const CheckResult r = check_sy_gap(2, 0.5);
  CHECK(r.passed);
  CHECK(r.observed > 0.0);
  CHECK_THROWS_AS(check_sy_gap(2, 100.0), std::invalid_argument);
}

TEST_CASE("s(y) Taylor coefficient") {
  CHECK_THAT(sy_taylor_coefficient(2), Catch::Matchers::WithinAbs(-0.6840, 1e-4));
  for (int N = 2; N <= 10; ++N) CHECK(sy_taylor_coefficient(N) < 0.0);
  for (int N = 2; N <= 6; ++N) CHECK(check_sy_taylor(N).passed);
  // Halving y quarters the quadratic-order residual.
  const double c = sy_taylor_coefficient(3);
  const double r1 = special::s_of_y(0.02, 3) / (0.02 * 0.02) - c;
  const double r2 = special::s_of_y(0.01, 3) / (0.01 * 0.01) - c;
  const double q = r2 / r1;
  CHECK(q > 0.25 / 3.0);
  CHECK(q < 0.25 * 3.0);
}

TEST_CASE("saddle-point expansion decay") {
  const CheckResult r1 = check_nr_expansion(0.0, kB, {400, 1600}, 1);
  CHECK(r1.passed);
  CHECK(r1.observed < 1.1);
  CHECK(check_nr_expansion(0.0, kB, {400, 1600}, 2).passed);
  CHECK(check_nr_expansion(0.5, kB, {400, 1600}, 1).passed);
  CHECK(check_nr_expansion(0.0, kB, {400, 900, 1600}, 1).samples == 3);
  const CheckResult r0 = check_nr_expansion(0.0, kB, {400, 1600}, 0);
  CHECK(r0.passed);
  CHECK(r0.observed <= r0.bound);
  CHECK_THROWS_AS(check_nr_expansion(0.0, kB, {50, 400}, 1), std::invalid_argument);
  CHECK_THROWS_AS(check_nr_expansion(0.0, kB, {1600, 400}, 1), std::invalid_argument);
  CHECK_THROWS_AS(check_nr_expansion(0.0, kB, {400}, 1), std::invalid_argument);
}

TEST_CASE("terminating expansion: A = 1/2 at order two decays faster than n^{-1}") {
  // T_{1/2,B,r} = 0 for r >= 2, so the residual is only the arc truncation.
  const CheckResult r = check_nr_expansion(0.5, kB, {400, 1600}, 2);
  CHECK_FALSE(r.passed);
  CHECK(std::abs(nr_residual(0.5, kB, 1600, 2)) < 1e-10);
}

TEST_CASE("Euler-Maclaurin profiles") {
  const CheckResult r = check_emf();
  CHECK(r.passed);
  CHECK(r.observed <= 1e-10);
  CHECK(r.samples == 3);
}

TEST_CASE("identities") {
  CHECK(check_lambda_identity().passed);
  CHECK(check_rogers_half().passed);
  CHECK(check_erfc_symmetry().passed);
  CHECK(check_nr_closed_forms().passed);
  CHECK(check_gaussian_tails().passed);
  CHECK(check_limit_variance().passed);
}

TEST_CASE("Bernoulli recurrence catches a corrupted table") {
  CHECK(check_bernoulli_recurrence().passed);
  const auto bad = special::BernoulliTable::standard().with_override(2, BigRational(1, 5));
  const CheckResult r = check_bernoulli_recurrence(bad);
  CHECK_FALSE(r.passed);
  CHECK(r.observed > 0.0);
  CHECK(r.notes.find("m=2") != std::string::npos);
}

TEST_CASE("combinatorial checks") {
  CHECK(check_oracle_equivalence(15).passed);
  CHECK(check_residue_tuple_counts(5).passed);
  CHECK(check_sigma_table().passed);
  CHECK(check_main_term_halving().passed);
}

TEST_CASE("verdict serialization") {
  const CheckResult r{"check_x", true, 0.25, 1.0, 7, "note"};
  const auto j = nlohmann::json::parse(to_json_line(r));
  CHECK(j["name"] == "check_x");
  CHECK(j["passed"] == true);
  CHECK(j["observed"] == 0.25);
  CHECK(j["bound"] == 1.0);
  CHECK(j["samples"] == 7);
  CHECK(j["notes"] == "note");
  CHECK(to_json_line(r).find('\n') == std::string::npos);
}

TEST_CASE("comparison directions") {
  CHECK(compare(Comparison::at_most, 1.0, 1.0));
  CHECK_FALSE(compare(Comparison::below, 0.0, 0.0));
  CHECK(compare(Comparison::above, 0.1, 0.0));
}

TEST_CASE("default suite: unique names, all pass, deterministic") {
  const auto suite = default_suite();
  std::set<std::string> names;
  std::vector<std::string> first;
  for (const auto& c : suite) {
    CHECK(names.insert(c.name).second);
    const CheckResult r = c.run();
    INFO(to_json_line(r));
    CHECK(r.passed);
    CHECK(r.name == c.name);
    first.push_back(to_json_line(r));
  }
  for (std::size_t i = 0; i < suite.size(); ++i) CHECK(to_json_line(suite[i].run()) == first[i]);
}
