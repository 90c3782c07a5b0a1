#include "gapinfo/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "gapinfo/counterexample.hpp"
#include "gapinfo/random.hpp"

namespace gapinfo {

namespace {

constexpr double kWarmStartEpsilon = 0.01;
constexpr double kGridSlackTol = 1e-12;
constexpr int kMaxGridCells = 8;
constexpr int kMaxGridResolution = 12;

void require_shape(const TripartiteDistribution& dist, const SearchConfig& cfg) {
  if (dist.shape() != cfg.shape) {
    throw Error(ErrorCode::ShapeMismatch, "distribution shape " + to_string(dist.shape()) +
                                              " differs from search shape " +
                                              to_string(cfg.shape));
  }
}

double penalized(const InfoReport& r, const SearchConfig& cfg) {
  const double violation = std::max(0.0, cfg.delta - (r.p_b - r.p_e));
  return (r.i_ae - r.i_ab) - cfg.penalty_weight * violation;
}

// Lowest-index maximizing row of each column.
Eigen::VectorXi column_argmax(const Eigen::MatrixXd& q) {
  Eigen::VectorXi rows(q.cols());
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < q.rows(); ++r) {
      if (q(r, c) > q(best, c)) best = r;
    }
    rows[c] = int(best);
  }
  return rows;
}

// d I / d q(r,c) up to the constant -1/ln 2, which cancels in I(A;E) - I(A;B).
Eigen::MatrixXd mi_cell_gradient(const Eigen::MatrixXd& q) {
  const Eigen::VectorXd row_m = q.rowwise().sum();
  const Eigen::RowVectorXd col_m = q.colwise().sum();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
      if (q(r, c) < kGradientMassFloor || row_m[r] < kGradientMassFloor ||
          col_m[c] < kGradientMassFloor) {
        continue;
      }
      g(r, c) = std::log2(q(r, c) / (row_m[r] * col_m[c]));
    }
  }
  return g;
}

TracePoint trace_point(int iteration, double value) { return {iteration, value}; }

}  // namespace

void SearchConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (!shape.valid()) fail("shape sizes must be positive");
  if (!(delta >= 0.0 && delta < 1.0)) fail("delta must lie in [0, 1)");
  if (!(penalty_weight >= 1.0) || !std::isfinite(penalty_weight)) fail("lambda must be >= 1");
  if (restarts < 1) fail("restarts must be positive");
  if (max_iters < 0) fail("max_iters must be nonnegative");
  if (!(init_step > 0.0) || !std::isfinite(init_step)) fail("init_step must be positive");
  if (!(converge_tol > 0.0)) fail("converge_tol must be positive");
}

double objective(const TripartiteDistribution& dist, const SearchConfig& cfg) {
  require_shape(dist, cfg);
  return penalized(analyze_tripartite(dist), cfg);
}

Eigen::VectorXd objective_gradient(const TripartiteDistribution& dist, const SearchConfig& cfg) {
  require_shape(dist, cfg);
  const Shape& s = dist.shape();
  const auto ab = marginal_pair(dist, VarId::Alice, VarId::Bob);
  const auto ae = marginal_pair(dist, VarId::Alice, VarId::Eve);

  const Eigen::MatrixXd g_ab = mi_cell_gradient(ab.table());
  const Eigen::MatrixXd g_ae = mi_cell_gradient(ae.table());

  const double slack = guessing_probability(ab) - guessing_probability(ae);
  const bool penalty_active = cfg.delta - slack > 0.0;
  const Eigen::VectorXi best_given_bob = column_argmax(ab.table());
  const Eigen::VectorXi best_given_eve = column_argmax(ae.table());

  Eigen::VectorXd grad(s.cells());
  detail::for_each_cell(s, [&](int b, int a, int e, Eigen::Index flat) {
    double g = g_ae(a, e) - g_ab(a, b);
    if (penalty_active) {
      const double dp_b = best_given_bob[b] == a ? 1.0 : 0.0;
      const double dp_e = best_given_eve[e] == a ? 1.0 : 0.0;
      g += cfg.penalty_weight * (dp_b - dp_e);
    }
    grad[flat] = g;
  });
  return grad;
}

SearchResult projected_ascent(const TripartiteDistribution& start, const SearchConfig& cfg) {
  require_shape(start, cfg);

  TripartiteDistribution x = start;
  double f = objective(x, cfg);
  std::vector<TracePoint> trace{trace_point(0, f)};
  int iterations = 0;
  int stalled = 0;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    iterations = it;
    const Eigen::VectorXd grad = objective_gradient(x, cfg);
    if (!grad.allFinite()) break;

    std::optional<TripartiteDistribution> next;
    double f_next = f;
    for (double step = cfg.init_step; step >= kMinStep; step *= 0.5) {
      auto candidate = TripartiteDistribution::validate(
          project_to_simplex(x.probs() + step * grad), cfg.shape);
      const double value = objective(candidate, cfg);
      if (value > f) {
        next = std::move(candidate);
        f_next = value;
        break;
      }
    }
    if (!next) break;

    const double improvement = f_next - f;
    x = std::move(*next);
    f = f_next;
    trace.push_back(trace_point(it, f));

    stalled = improvement < cfg.converge_tol ? stalled + 1 : 0;
    if (stalled >= kStallWindow) break;
  }

  SearchResult result{x, analyze_tripartite(x), f, false, 0, iterations, std::move(trace)};
  result.feasible = result.report.p_b - result.report.p_e >= cfg.delta - kFeasibilityTol;
  return result;
}

SearchResult run_search(const SearchConfig& cfg, unsigned threads) {
  cfg.validate();

  std::vector<TripartiteDistribution> starts;
  starts.reserve(std::size_t(cfg.restarts) + 1);
  for (int r = 0; r < cfg.restarts; ++r) {
    starts.push_back(dirichlet_sample(cfg.shape, 1.0, derive_seed(cfg.seed, std::uint64_t(r))));
  }
  if (cfg.include_family_warm_start && cfg.shape == Shape{2, 2, 4}) {
    starts.push_back(build_counterexample(kWarmStartEpsilon));
  }

  std::vector<std::optional<SearchResult>> results(starts.size());
  std::vector<std::exception_ptr> errors(starts.size());
  std::atomic<std::size_t> next_job{0};
  auto worker = [&] {
    for (std::size_t j = next_job++; j < starts.size(); j = next_job++) {
      try {
        results[j] = projected_ascent(starts[j], cfg);
        results[j]->restart_index = int(j);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = unsigned(std::min<std::size_t>(threads, starts.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Ordered reduction: highest objective wins, ties go to the lowest index.
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < starts.size(); ++j) {
    if (errors[j]) std::rethrow_exception(errors[j]);
    if (!results[j]->feasible) continue;
    if (!best || results[j]->objective > results[*best]->objective) best = j;
  }
  if (!best) {
    throw Error(ErrorCode::NoFeasiblePoint,
                "no restart reached p_b - p_e >= " + std::to_string(cfg.delta));
  }
  return std::move(*results[*best]);
}

SearchResult brute_force_grid(const Shape& shape, int resolution, double delta) {
  if (!shape.valid()) throw Error(ErrorCode::ShapeMismatch, "invalid shape " + to_string(shape));
  if (shape.cells() > kMaxGridCells || resolution > kMaxGridResolution) {
    throw Error(ErrorCode::TooLarge, "grid limited to 8 cells and resolution 12, got " +
                                         std::to_string(shape.cells()) + " cells at " +
                                         std::to_string(resolution));
  }
  if (resolution < 1) throw Error(ErrorCode::InvalidConfig, "resolution must be positive");

  const Eigen::Index n = shape.cells();
  std::vector<int> counts(std::size_t(n), 0);
  std::optional<SearchResult> best;
  int evaluated = 0;

  auto visit = [&] {
    TripartiteDistribution::Vector p(n);
    for (Eigen::Index i = 0; i < n; ++i) p[i] = double(counts[std::size_t(i)]) / resolution;
    auto dist = TripartiteDistribution::validate(std::move(p), shape);
    const InfoReport r = analyze_tripartite(dist);
    ++evaluated;
    if (r.p_b - r.p_e < delta - kGridSlackTol) return;
    const double gap = r.i_ae - r.i_ab;
    if (!best || gap > best->objective) {
      best = SearchResult{std::move(dist), r, gap, true, 0, 0, {}};
    }
  };

  // Compositions of `resolution` into n parts, lexicographic in the leading cells.
  auto fill = [&](auto&& self, Eigen::Index cell, int remaining) -> void {
    if (cell + 1 == n) {
      counts[std::size_t(cell)] = remaining;
      visit();
      return;
    }
    for (int m = remaining; m >= 0; --m) {
      counts[std::size_t(cell)] = m;
      self(self, cell + 1, remaining - m);
    }
  };
  fill(fill, 0, resolution);

  if (!best) {
    throw Error(ErrorCode::NoFeasiblePoint,
                "no grid point with p_b - p_e >= " + std::to_string(delta));
  }
  best->iterations_used = evaluated;
  return std::move(*best);
}

}  // namespace gapinfo
