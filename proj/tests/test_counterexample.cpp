#include <doctest.h>

#include <cmath>

#include "gapinfo/counterexample.hpp"
#include "oracles.hpp"

using namespace gapinfo;

TEST_CASE("build_counterexample matches the eight-cell table") {
  const auto d = build_counterexample(0.01);
  CHECK(d.shape() == Shape{2, 2, 4});
  CHECK(d(0, 0, 0) == 0.24);
  CHECK(d(1, 1, 3) == 0.24);
  CHECK((d.probs().array() != 0.0).count() == 8);

  const auto expected = oracle::family_cells(0.01);
  for (Eigen::Index i = 0; i < 16; ++i) CHECK(d.probs()[i] == expected[std::size_t(i)]);
}

TEST_CASE("build_counterexample boundaries") {
  const auto zero = build_counterexample(0.0);
  const auto r = analyze_tripartite(zero);
  CHECK(r.p_b == 0.75);
  CHECK(r.p_e == 0.75);
  CHECK_FALSE(r.premise_holds);
  CHECK((zero.probs().array() != 0.0).count() == 6);

  CHECK_NOTHROW(build_counterexample(0.25));
  CHECK_THROWS_WITH_AS(build_counterexample(0.3), doctest::Contains("EpsilonOutOfRange"), Error);
  CHECK_THROWS_AS(build_counterexample(-1e-3), Error);
}

TEST_CASE("closed_form_report") {
  const auto r = closed_form_report(0.01);
  CHECK(r.p_b == 0.75);
  CHECK(r.p_e == 0.73);
  CHECK(std::abs(r.i_ab - oracle::kIab) < 1e-15);
  CHECK(std::abs(r.i_ae - oracle::kIae001) < 1e-15);
  CHECK(r.premise_holds);
  CHECK(r.implication_violated);

  const auto mid = closed_form_report(0.125);
  CHECK(std::abs(mid.i_ae) < 1e-15);
  CHECK(mid.p_e == 0.5);

  const auto params = CounterexampleParams::from_epsilon(0.01);
  CHECK(std::abs(params.epsilon_prime - 0.121146) < 1e-6);
  CHECK(std::abs((0.5 - params.epsilon_prime) - r.i_ae) < 1e-15);
  CHECK_THROWS_AS(closed_form_report(0.26), Error);
}

TEST_CASE("verify_counterexample") {
  const auto inside = verify_counterexample(0.01, 1e-9);
  CHECK(inside.passed);
  CHECK(inside.analyzed.implication_violated);
  CHECK(inside.max_deviation < 1e-12);
  CHECK_NOTHROW(require_verified(inside));

  const auto outside = verify_counterexample(0.05, 1e-9);
  CHECK(outside.passed);
  CHECK_FALSE(outside.analyzed.implication_violated);

  // Below double precision; either outcome is acceptable, but a failure must throw
  // VerificationFailed from require_verified.
  const auto tight = verify_counterexample(0.01, 1e-18);
  if (!tight.passed) {
    CHECK_THROWS_WITH_AS(require_verified(tight), doctest::Contains("VerificationFailed"), Error);
  }

  CHECK_THROWS_AS(verify_counterexample(0.0, 1e-9), Error);
  CHECK_THROWS_AS(verify_counterexample(0.01, 0.0), Error);
}

TEST_CASE("sweep") {
  const auto ends = sweep(0.0, 0.25, 2);
  REQUIRE(ends.size() == 2);
  CHECK(ends[0].epsilon == 0.0);
  CHECK(ends[1].epsilon == 0.25);

  // The boundary sits at 0.0387851..., so 0.039 is already past it.
  const auto inside = sweep(0.001, 0.039, 20);
  REQUIRE(inside.size() == 20);
  for (std::size_t i = 0; i + 1 < inside.size(); ++i) {
    CHECK(inside[i].gap > 0.0);
    CHECK(inside[i].p_b > inside[i].p_e);
  }
  CHECK(inside.back().gap < 0.0);
  CHECK(std::abs(inside.back().gap - (0.5 - 0.5 * oracle::binary_entropy_bits(0.156) - oracle::kIab)) <
        1e-12);

  for (const auto& row : sweep(0.05, 0.1, 3)) CHECK(row.gap < 0.0);

  CHECK_THROWS_AS(sweep(0.1, 0.05, 3), Error);
  CHECK_THROWS_AS(sweep(0.0, 0.3, 3), Error);
  CHECK_THROWS_AS(sweep(0.0, 0.1, 1), Error);
}

TEST_CASE("violation_boundary") {
  const double eps = violation_boundary();
  CHECK(eps > 0.0385);
  CHECK(eps < 0.0390);
  CHECK(std::abs(eps - oracle::kEpsilonStar) < 1e-10);
  CHECK(closed_form_report(eps - 1e-4).implication_violated);
  CHECK_FALSE(closed_form_report(eps + 1e-4).implication_violated);
}

TEST_CASE("property: family invariants on a 100-point grid") {
  for (int i = 0; i < 100; ++i) {
    const double eps = 0.25 * i / 99.0;
    const auto d = build_counterexample(eps);
    const auto a = analyze_tripartite(d);
    const auto c = closed_form_report(eps);
    CHECK(std::abs(a.p_b - c.p_b) <= 1e-12);
    CHECK(std::abs(a.p_e - c.p_e) <= 1e-12);
    CHECK(std::abs(a.i_ab - c.i_ab) <= 1e-12);
    CHECK(std::abs(a.i_ae - c.i_ae) <= 1e-12);
    CHECK(std::abs(a.h_a - c.h_a) <= 1e-12);
    CHECK(std::abs(a.fano_slack_b - c.fano_slack_b) <= 1e-12);
    CHECK(std::abs(a.fano_slack_e - c.fano_slack_e) <= 1e-12);
    CHECK(std::abs(a.i_ab - oracle::kIab) <= 1e-12);
    if (eps <= 0.125) {
      CHECK(c.p_e == 0.75 - 2.0 * eps);
      if (i > 0) CHECK(c.p_e < closed_form_report(0.25 * (i - 1) / 99.0).p_e);
    }
    for (VarId v : {VarId::Bob, VarId::Alice, VarId::Eve}) {
      const auto m = marginal_single(d, v);
      CHECK((m.array() - 1.0 / double(m.size())).abs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("past epsilon = 1/8 Eve guesses the minority cell") {
  const auto r = closed_form_report(0.2);
  CHECK(std::abs(r.p_e - 0.65) < 1e-15);
  const auto d = build_counterexample(0.2);
  CHECK(std::abs(oracle::guessing_probability(oracle::pair_table(
                     std::vector<double>(d.probs().begin(), d.probs().end()), 2, 2, 4, 1, 2)) -
                 0.65) < 1e-15);
  CHECK_FALSE(closed_form_report(0.25).premise_holds);
}
