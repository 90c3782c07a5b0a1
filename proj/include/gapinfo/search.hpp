#pragma once

#include <cstdint>
#include <vector>

#include "gapinfo/dist_core.hpp"
#include "gapinfo/info_metrics.hpp"

namespace gapinfo {

/// A restart's final point counts as feasible when p_b - p_e >= delta - kFeasibilityTol.
inline constexpr double kFeasibilityTol = 1e-9;
/// Marginal mass below which a cell gets no mutual-information gradient.
inline constexpr double kGradientMassFloor = 1e-12;
/// Smallest step tried by the backtracking line search.
inline constexpr double kMinStep = 1e-12;
/// Accepted steps in a row with improvement below converge_tol before stopping.
inline constexpr int kStallWindow = 10;

/// Settings for maximizing I(A;E) - I(A;B) subject to p_b - p_e >= delta.
struct SearchConfig {
  Shape shape{2, 2, 4};
  double delta = 0.02;          ///< required margin p_b - p_e
  double penalty_weight = 10.0; ///< lambda of the hinge penalty
  int restarts = 100;
  int max_iters = 500;          ///< per restart; 0 makes projected_ascent a no-op
  double init_step = 1.0;
  std::uint64_t seed = 42;
  double converge_tol = 1e-10;
  bool include_family_warm_start = true;

  /// Throws InvalidConfig when a field is out of range.
  void validate() const;
};

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct SearchResult {
  TripartiteDistribution best_dist;
  InfoReport report;
  double objective = 0.0;
  bool feasible = false;
  int restart_index = 0;
  int iterations_used = 0;
  std::vector<TracePoint> trace;  ///< accepted steps only, starting at iteration 0
};

/// (i_ae - i_ab) - lambda * max(0, delta - (p_b - p_e)).
double objective(const TripartiteDistribution& dist, const SearchConfig& cfg);

/// Per-cell (sub)gradient of `objective`, in bits. Guessing-probability terms use the
/// lowest-index maximizing Alice row in each observer column.
Eigen::VectorXd objective_gradient(const TripartiteDistribution& dist, const SearchConfig& cfg);

/// Projected gradient ascent on the simplex with monotone backtracking.
SearchResult projected_ascent(const TripartiteDistribution& start, const SearchConfig& cfg);

/// Best feasible projected_ascent result over cfg.restarts Dirichlet(1) starts, plus the
/// epsilon = 0.01 counterexample as an extra start (index cfg.restarts) when requested
/// and the shape is (2,2,4). `threads` = 0 uses the hardware concurrency; the result
/// does not depend on it.
SearchResult run_search(const SearchConfig& cfg, unsigned threads = 1);

/// Exhaustive search of the grid {m / resolution} on the simplex for the largest raw
/// gap among points with p_b - p_e >= delta. Limited to 8 cells and resolution 12.
SearchResult brute_force_grid(const Shape& shape, int resolution, double delta);

}  // namespace gapinfo
