#pragma once

#include <vector>

#include "gapinfo/dist_core.hpp"
#include "gapinfo/info_metrics.hpp"

namespace gapinfo {

/// Largest epsilon for which every cell of the family is nonnegative.
inline constexpr double kMaxEpsilon = 0.25;

/// Parameters of the (2,2,4) counterexample family. epsilon_prime = H(4 epsilon) / 2.
struct CounterexampleParams {
  double epsilon = 0.0;
  double epsilon_prime = 0.0;

  static CounterexampleParams from_epsilon(double epsilon);
};

/// The eight-cell family with binary Bob and Alice and four Eve outcomes:
///   P(0,0,0) = 1/4 - e   P(1,1,0) = e
///   P(0,0,1) = 1/8       P(0,1,1) = 1/8
///   P(1,0,2) = 1/8       P(1,1,2) = 1/8
///   P(0,0,3) = e         P(1,1,3) = 1/4 - e
/// Indices are (bob, alice, eve); every other cell is zero.
TripartiteDistribution build_counterexample(double epsilon);

/// Report of the family from its closed forms:
/// p_b = 3/4, i_ab = 1 - H(1/4), i_ae = 1/2 - H(4e)/2, and
/// p_e = 1/4 + 2 max(1/4 - e, e), which is 3/4 - 2e for e <= 1/8.
InfoReport closed_form_report(double epsilon);

struct VerificationReport {
  double epsilon = 0.0;
  double tol = 0.0;
  InfoReport analyzed;
  InfoReport closed_form;
  double max_deviation = 0.0;
  bool passed = false;
};

/// Compares analyze_tripartite(build_counterexample(e)) against the closed forms.
/// A failed comparison is reported through `passed == false` together with the
/// largest field deviation; see require_verified for the throwing form.
VerificationReport verify_counterexample(double epsilon, double tol);

/// Throws VerificationFailed (with the largest deviation) unless `report.passed`.
void require_verified(const VerificationReport& report);

struct SweepRow {
  double epsilon = 0.0;
  double p_b = 0.0;
  double p_e = 0.0;
  double i_ab = 0.0;
  double i_ae = 0.0;
  double gap = 0.0;
};

/// `steps` evenly spaced epsilons over [start, end], endpoints included. Each row
/// comes from the closed forms and is cross-checked against the direct analysis.
std::vector<SweepRow> sweep(double eps_start, double eps_end, int steps);

/// Closed-form gap i_ae - i_ab of the family.
double closed_form_gap(double epsilon);

/// The epsilon where the family's gap changes sign, by bisection on [0, 1/8].
/// Below it the family violates the implication, above it it does not.
double violation_boundary();

}  // namespace gapinfo
