#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

#include "gapinfo/dist_core.hpp"

// All information quantities are in bits.

namespace gapinfo {

namespace detail {

template <typename Scalar>
Scalar plogp(Scalar p) {
  using std::log2;
  return p > Scalar(0) ? p * log2(p) : Scalar(0);
}

template <typename Derived>
void require_distribution(const Eigen::MatrixBase<Derived>& p) {
  if (p.size() == 0) throw Error(ErrorCode::InvalidDistribution, "empty distribution");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = static_cast<double>(p.derived().coeff(i));
    if (!std::isfinite(v) || v < -kNegativeClamp) {
      throw Error(ErrorCode::InvalidDistribution, "bad entry at " + std::to_string(i));
    }
  }
  const double total = static_cast<double>(p.sum());
  if (std::abs(total - 1.0) > kNormalizationTol) {
    throw Error(ErrorCode::InvalidDistribution, "entries sum to " + std::to_string(total));
  }
}

}  // namespace detail

template <typename Derived>
typename Derived::Scalar shannon_entropy(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  detail::require_distribution(p);
  Scalar h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) h -= detail::plogp(p.derived().coeff(i));
  return h;
}

template <typename Scalar>
Scalar binary_entropy(Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1))) {
    throw Error(ErrorCode::OutOfRange,
                "binary entropy argument outside [0,1]: " + std::to_string(double(p)));
  }
  return -detail::plogp(p) - detail::plogp(Scalar(1) - p);
}

/// Sum of q log2(q / (q_row q_col)) over nonzero cells.
template <typename Scalar>
Scalar mutual_information(const BasicPair<Scalar>& pair) {
  using std::log2;
  const auto& q = pair.table();
  const auto row_m = q.rowwise().sum().eval();
  const auto col_m = q.colwise().sum().eval();
  Scalar mi = 0;
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
      const Scalar v = q(r, c);
      if (v > Scalar(0)) mi += v * log2(v / (row_m[r] * col_m[c]));
    }
  }
  return mi;
}

/// Success probability of guessing the row variable from the column variable:
/// sum over columns of the largest entry in that column.
template <typename Scalar>
Scalar guessing_probability(const BasicPair<Scalar>& pair) {
  return pair.table().colwise().maxCoeff().sum();
}

/// H(row | col). Empty columns contribute nothing.
template <typename Scalar>
Scalar conditional_entropy(const BasicPair<Scalar>& pair) {
  const auto& q = pair.table();
  Scalar h = 0;
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    const Scalar mass = q.col(c).sum();
    if (!(mass > Scalar(0))) continue;
    for (Eigen::Index r = 0; r < q.rows(); ++r) h -= detail::plogp(q(r, c));
    h += detail::plogp(mass);
  }
  return h;
}

/// Fano bound H(p_err) + p_err log2(n - 1) on H(X|Y) for an n-ary X.
template <typename Scalar>
Scalar fano_bound(Scalar p_err, int alphabet) {
  using std::log2;
  using std::clamp;
  p_err = clamp(p_err, Scalar(0), Scalar(1));
  Scalar bound = binary_entropy(p_err);
  if (alphabet > 1 && p_err > Scalar(0)) bound += p_err * log2(Scalar(alphabet - 1));
  return bound;
}

template <typename Scalar>
struct BasicInfoReport {
  Scalar p_b = 0;   ///< Bob's guessing probability for Alice's outcome
  Scalar p_e = 0;   ///< Eve's guessing probability for Alice's outcome
  Scalar i_ab = 0;  ///< I(Alice;Bob)
  Scalar i_ae = 0;  ///< I(Alice;Eve)
  Scalar h_a = 0;   ///< H(Alice)
  bool premise_holds = false;         ///< p_b > p_e (and p_b - p_e >= margin)
  bool implication_violated = false;  ///< premise_holds and i_ae > i_ab
  Scalar fano_slack_b = 0;
  Scalar fano_slack_e = 0;

  Scalar gap() const { return i_ae - i_ab; }
  Scalar slack() const { return p_b - p_e; }
};

/// Strict comparisons, no tolerance. With margin > 0 the premise additionally
/// requires p_b - p_e >= margin.
template <typename Scalar>
void evaluate_implication(BasicInfoReport<Scalar>& r, Scalar margin = Scalar(0)) {
  const Scalar slack = r.p_b - r.p_e;
  r.premise_holds = slack > Scalar(0) && slack >= margin;
  r.implication_violated = r.premise_holds && r.i_ae > r.i_ab;
}

/// Evaluates both sides of "P_B > P_E implies I(A,B) > I(A,E)" with Alice as
/// the guessed variable.
template <typename Scalar>
BasicInfoReport<Scalar> analyze_tripartite(const BasicTripartite<Scalar>& dist,
                                           Scalar margin = Scalar(0)) {
  const auto ab = marginal_pair(dist, VarId::Alice, VarId::Bob);
  const auto ae = marginal_pair(dist, VarId::Alice, VarId::Eve);
  const int n_alice = dist.shape().alice;

  BasicInfoReport<Scalar> r;
  r.p_b = guessing_probability(ab);
  r.p_e = guessing_probability(ae);
  r.i_ab = mutual_information(ab);
  r.i_ae = mutual_information(ae);
  r.h_a = shannon_entropy(marginal_single(dist, VarId::Alice));
  r.fano_slack_b = fano_bound(Scalar(1) - r.p_b, n_alice) - conditional_entropy(ab);
  r.fano_slack_e = fano_bound(Scalar(1) - r.p_e, n_alice) - conditional_entropy(ae);
  evaluate_implication(r, margin);
  return r;
}

using InfoReport = BasicInfoReport<double>;

}  // namespace gapinfo
