#include <doctest.h>

#include <cmath>

#include "gapinfo/counterexample.hpp"
#include "gapinfo/search.hpp"
#include "oracles.hpp"
#include "search_fixtures.hpp"

using namespace gapinfo;

namespace {

SearchConfig config(Shape shape, double delta, double lambda = 10.0) {
  SearchConfig cfg;
  cfg.shape = shape;
  cfg.delta = delta;
  cfg.penalty_weight = lambda;
  return cfg;
}

TripartiteDistribution eve_copies_alice() {
  const Shape s{2, 2, 2};
  Eigen::VectorXd p = Eigen::VectorXd::Zero(s.cells());
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a) p[s.index(b, a, a)] = 0.25;
  return TripartiteDistribution::validate(p, s);
}

TripartiteDistribution product(const Shape& s) {
  Eigen::VectorXd p(s.cells());
  detail::for_each_cell(s, [&](int b, int a, int e, Eigen::Index flat) {
    p[flat] = (1.0 + b) / (s.bob * (s.bob + 1) / 2.0) * (1.0 + a) / (s.alice * (s.alice + 1) / 2.0) *
              (1.0 + e) / (s.eve * (s.eve + 1) / 2.0);
  });
  return TripartiteDistribution::validate(p, s);
}

}  // namespace

TEST_CASE("objective examples") {
  const auto family = build_counterexample(0.01);
  const double f = objective(family, config(Shape{2, 2, 4}, 0.02));
  // p_b - p_e is 0.02 up to round-off, so the hinge contributes at most ~1e-15.
  CHECK(std::abs(f - oracle::kGap001) < 1e-12);
  CHECK(f >= 0.190128);

  const Shape s{2, 3, 2};
  CHECK(std::abs(objective(product(s), config(s, 0.0))) < 1e-12);

  CHECK(std::abs(objective(eve_copies_alice(), config(Shape{2, 2, 2}, 0.1)) - (-5.0)) < 1e-12);

  CHECK_THROWS_WITH_AS(objective(family, config(Shape{2, 2, 2}, 0.0)),
                       doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("objective_gradient matches finite differences at smooth interior points") {
  for (double delta : {0.0, 0.02, 0.2}) {
    const auto cfg = config(Shape{2, 2, 4}, delta);
    for (const auto& d : fixtures::smooth_points(cfg, 30, 1000)) {
      const auto check = fixtures::check_gradient(d, cfg, 1e-6);
      CHECK(check.worst_relative_error <= 1e-4);
    }
  }
}

TEST_CASE("objective_gradient at the uniform distribution") {
  const Shape s{2, 2, 4};
  const auto uniform = TripartiteDistribution::validate(Eigen::VectorXd::Constant(16, 1.0 / 16), s);
  const auto cfg = config(s, 0.0, 3.0);
  const Eigen::VectorXd g = objective_gradient(uniform, cfg);
  CHECK((g.array() - g.mean()).abs().maxCoeff() < 1e-9);
}

TEST_CASE("objective_gradient ignores the all-ones direction") {
  const Shape s{2, 2, 3};
  const auto cfg = config(s, 0.02);
  const auto d = dirichlet_sample(s, 1.0, 77);
  const Eigen::VectorXd g = objective_gradient(d, cfg);
  const Eigen::VectorXd shifted = (g.array() + 5.0).matrix();
  const Eigen::VectorXd a = project_to_simplex(d.probs() + 0.01 * g);
  const Eigen::VectorXd b = project_to_simplex(d.probs() + 0.01 * shifted);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd g_tan = (g.array() - g.mean()).matrix();
  const Eigen::VectorXd s_tan = (shifted.array() - shifted.mean()).matrix();
  CHECK((g_tan - s_tan).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("objective_gradient is finite with empty cells") {
  const auto cfg = config(Shape{2, 2, 4}, 0.02);
  CHECK(objective_gradient(build_counterexample(0.01), cfg).allFinite());
  Eigen::VectorXd point = Eigen::VectorXd::Zero(16);
  point[5] = 1.0;
  const auto mass = TripartiteDistribution::validate(point, cfg.shape);
  CHECK(objective_gradient(mass, cfg).allFinite());
}

TEST_CASE("projected_ascent never degrades the warm start") {
  auto cfg = config(Shape{2, 2, 4}, 0.02);
  const auto start = build_counterexample(0.01);
  const auto result = projected_ascent(start, cfg);
  CHECK(result.objective >= oracle::kGap001 - 1e-9);
  CHECK(result.feasible);
  for (std::size_t i = 1; i < result.trace.size(); ++i) {
    CHECK(result.trace[i].objective >= result.trace[i - 1].objective);
    CHECK(result.trace[i].iteration > result.trace[i - 1].iteration);
  }
}

TEST_CASE("projected_ascent edge cases") {
  auto cfg = config(Shape{2, 2, 4}, 0.0);
  Eigen::VectorXd point = Eigen::VectorXd::Zero(16);
  point[0] = 1.0;
  const auto mass = TripartiteDistribution::validate(point, cfg.shape);
  CHECK_NOTHROW(projected_ascent(mass, cfg));

  cfg.max_iters = 0;
  const auto start = dirichlet_sample(cfg.shape, 1.0, 3);
  const auto idle = projected_ascent(start, cfg);
  CHECK(idle.best_dist == start);
  CHECK(idle.iterations_used == 0);
  CHECK(idle.trace.size() == 1);

  CHECK_THROWS_AS(projected_ascent(start, config(Shape{2, 2, 2}, 0.0)), Error);
}

TEST_CASE("property: every ascent iterate is a valid distribution and the trace is monotone") {
  // Re-run the ascent one iteration at a time so each intermediate point is visible.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto cfg = config(Shape{2, 2, 3}, 0.05);
    cfg.max_iters = 1;
    auto x = dirichlet_sample(cfg.shape, 1.0, seed);
    double last = objective(x, cfg);
    for (int it = 0; it < 40; ++it) {
      const auto step = projected_ascent(x, cfg);
      CHECK_NOTHROW(validate_tripartite<double>(step.best_dist.probs(), cfg.shape));
      CHECK(step.objective >= last);
      last = step.objective;
      x = step.best_dist;
    }
  }
}

TEST_CASE("run_search finds the warm-start floor on (2,2,4)") {
  SearchConfig cfg = config(Shape{2, 2, 4}, 0.02);
  cfg.restarts = 100;
  cfg.seed = 42;
  const auto result = run_search(cfg);
  CHECK(result.feasible);
  CHECK(result.objective >= 0.190128);
  CHECK(result.report.i_ae - result.report.i_ab >= 0.190128);
  CHECK(result.report.implication_violated);

  const auto recomputed = analyze_tripartite(result.best_dist);
  CHECK(std::abs(recomputed.i_ae - result.report.i_ae) <= 1e-12);
  CHECK(std::abs(recomputed.p_b - result.report.p_b) <= 1e-12);
}

TEST_CASE("run_search with a singleton Eve cannot gain") {
  SearchConfig cfg = config(Shape{2, 2, 1}, 0.0);
  cfg.restarts = 20;
  const auto result = run_search(cfg);
  CHECK(result.objective <= 1e-9);
}

TEST_CASE("run_search is deterministic across thread counts") {
  SearchConfig cfg = config(Shape{2, 2, 3}, 0.02);
  cfg.restarts = 24;
  cfg.seed = 9;
  const auto one = run_search(cfg, 1);
  const auto again = run_search(cfg, 1);
  const auto four = run_search(cfg, 4);
  for (const auto* other : {&again, &four}) {
    CHECK(other->best_dist == one.best_dist);
    CHECK(other->objective == one.objective);
    CHECK(other->restart_index == one.restart_index);
    CHECK(other->iterations_used == one.iterations_used);
    CHECK(other->trace == one.trace);
  }
}

TEST_CASE("run_search reports infeasibility") {
  // Bob has a single outcome, so p_b is the largest Alice marginal and can never exceed p_e.
  SearchConfig cfg = config(Shape{1, 2, 2}, 0.5);
  cfg.restarts = 5;
  CHECK_THROWS_WITH_AS(run_search(cfg), doctest::Contains("NoFeasiblePoint"), Error);
}

TEST_CASE("SearchConfig validation") {
  SearchConfig cfg;
  cfg.penalty_weight = 0.5;
  CHECK_THROWS_AS(run_search(cfg), Error);
  cfg = SearchConfig{};
  cfg.delta = 1.0;
  CHECK_THROWS_AS(run_search(cfg), Error);
  cfg = SearchConfig{};
  cfg.restarts = 0;
  CHECK_THROWS_AS(run_search(cfg), Error);
}

TEST_CASE("brute_force_grid") {
  const auto grid = brute_force_grid(Shape{2, 2, 2}, 8, 0.0);
  CHECK(grid.iterations_used == oracle::kGrid222Res8Points);
  CHECK(std::abs(grid.objective - oracle::kGrid222Res8Gap) < 1e-12);
  CHECK(grid.feasible);
  CHECK(grid.report.p_b - grid.report.p_e >= -1e-12);

  const auto degenerate = brute_force_grid(Shape{2, 1, 1}, 7, 0.0);
  CHECK(degenerate.objective == 0.0);

  CHECK_THROWS_WITH_AS(brute_force_grid(Shape{2, 2, 4}, 12, 0.0), doctest::Contains("TooLarge"),
                       Error);
  CHECK_THROWS_AS(brute_force_grid(Shape{2, 2, 2}, 13, 0.0), Error);
  CHECK_THROWS_AS(brute_force_grid(Shape{1, 2, 2}, 4, 0.5), Error);
}
