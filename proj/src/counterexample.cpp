#include "gapinfo/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gapinfo {

namespace {

constexpr double kSweepCrossCheckTol = 1e-9;
constexpr double kBisectionTol = 1e-10;
constexpr int kBisectionMaxIters = 60;

void require_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= kMaxEpsilon)) {
    throw Error(ErrorCode::EpsilonOutOfRange,
                "epsilon must lie in [0, 0.25], got " + std::to_string(epsilon));
  }
}

double mutual_information_ab() { return 1.0 - binary_entropy(0.25); }

}  // namespace

CounterexampleParams CounterexampleParams::from_epsilon(double epsilon) {
  require_epsilon(epsilon);
  return {epsilon, 0.5 * binary_entropy(4.0 * epsilon)};
}

TripartiteDistribution build_counterexample(double epsilon) {
  require_epsilon(epsilon);
  const Shape shape{2, 2, 4};
  TripartiteDistribution::Vector p = TripartiteDistribution::Vector::Zero(shape.cells());
  p[shape.index(0, 0, 0)] = 0.25 - epsilon;
  p[shape.index(1, 1, 0)] = epsilon;
  p[shape.index(0, 0, 1)] = 0.125;
  p[shape.index(0, 1, 1)] = 0.125;
  p[shape.index(1, 0, 2)] = 0.125;
  p[shape.index(1, 1, 2)] = 0.125;
  p[shape.index(0, 0, 3)] = epsilon;
  p[shape.index(1, 1, 3)] = 0.25 - epsilon;
  return TripartiteDistribution::validate(std::move(p), shape);
}

InfoReport closed_form_report(double epsilon) {
  const auto params = CounterexampleParams::from_epsilon(epsilon);
  InfoReport r;
  r.p_b = 0.75;
  // Eve's best guess on outcomes 0 and 3 flips once epsilon passes 1/8.
  r.p_e = epsilon <= 0.125 ? 0.75 - 2.0 * epsilon : 0.25 + 2.0 * epsilon;
  r.i_ab = mutual_information_ab();
  r.i_ae = 0.5 - params.epsilon_prime;
  r.h_a = 1.0;
  // H(A|B) = H(1/4) meets the binary Fano bound exactly; H(A|E) = 1/2 + eps'.
  r.fano_slack_b = 0.0;
  r.fano_slack_e = binary_entropy(1.0 - r.p_e) - (0.5 + params.epsilon_prime);
  evaluate_implication(r);
  return r;
}

VerificationReport verify_counterexample(double epsilon, double tol) {
  if (!(epsilon > 0.0 && epsilon <= kMaxEpsilon)) {
    throw Error(ErrorCode::EpsilonOutOfRange,
                "epsilon must lie in (0, 0.25], got " + std::to_string(epsilon));
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::OutOfRange, "tolerance must be positive");

  VerificationReport v;
  v.epsilon = epsilon;
  v.tol = tol;
  v.analyzed = analyze_tripartite(build_counterexample(epsilon));
  v.closed_form = closed_form_report(epsilon);

  const InfoReport& a = v.analyzed;
  const InfoReport& c = v.closed_form;
  for (double d : {a.p_b - c.p_b, a.p_e - c.p_e, a.i_ab - c.i_ab, a.i_ae - c.i_ae,
                   a.h_a - c.h_a, a.fano_slack_b - c.fano_slack_b,
                   a.fano_slack_e - c.fano_slack_e}) {
    v.max_deviation = std::max(v.max_deviation, std::abs(d));
  }
  const bool flags_agree = a.premise_holds == c.premise_holds &&
                           a.implication_violated == c.implication_violated;
  v.passed = v.max_deviation <= tol && flags_agree;
  return v;
}

void require_verified(const VerificationReport& report) {
  if (!report.passed) {
    throw Error(ErrorCode::VerificationFailed,
                "largest deviation " + std::to_string(report.max_deviation) + " exceeds tol " +
                    std::to_string(report.tol));
  }
}

std::vector<SweepRow> sweep(double eps_start, double eps_end, int steps) {
  if (!(eps_start >= 0.0 && eps_start < eps_end && eps_end <= kMaxEpsilon) || steps < 2) {
    throw Error(ErrorCode::BadRange, "need 0 <= start < end <= 0.25 and steps >= 2");
  }
  std::vector<SweepRow> rows;
  rows.reserve(std::size_t(steps));
  const double width = eps_end - eps_start;
  for (int i = 0; i < steps; ++i) {
    const double eps =
        i + 1 == steps ? eps_end : eps_start + width * double(i) / double(steps - 1);
    const InfoReport c = closed_form_report(eps);
    const InfoReport a = analyze_tripartite(build_counterexample(eps));
    const double dev = std::max({std::abs(a.p_b - c.p_b), std::abs(a.p_e - c.p_e),
                                 std::abs(a.i_ab - c.i_ab), std::abs(a.i_ae - c.i_ae)});
    if (dev > kSweepCrossCheckTol) {
      throw Error(ErrorCode::VerificationFailed,
                  "sweep row at epsilon " + std::to_string(eps) + " deviates by " +
                      std::to_string(dev));
    }
    rows.push_back({eps, c.p_b, c.p_e, c.i_ab, c.i_ae, c.i_ae - c.i_ab});
  }
  return rows;
}

double closed_form_gap(double epsilon) {
  const InfoReport r = closed_form_report(epsilon);
  return r.i_ae - r.i_ab;
}

double violation_boundary() {
  // gap(0) > 0 and gap(1/8) < 0; gap is decreasing on this interval.
  double lo = 0.0;
  double hi = 0.125;
  for (int it = 0; it < kBisectionMaxIters && hi - lo > kBisectionTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (closed_form_gap(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace gapinfo
