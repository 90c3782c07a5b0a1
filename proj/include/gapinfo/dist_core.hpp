#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "gapinfo/error.hpp"

namespace gapinfo {

/// Absolute tolerance on |sum - 1| for every distribution in the library.
inline constexpr double kNormalizationTol = 1e-12;
/// Entries in [-kNegativeClamp, 0) are round-off and get clamped to zero.
inline constexpr double kNegativeClamp = 1e-15;

enum class VarId { Bob, Alice, Eve };

constexpr const char* to_string(VarId v) {
  switch (v) {
    case VarId::Bob: return "bob";
    case VarId::Alice: return "alice";
    case VarId::Eve: return "eve";
  }
  return "?";
}

/// Outcome-alphabet sizes of the three parties.
struct Shape {
  int bob = 1;
  int alice = 1;
  int eve = 1;

  constexpr Eigen::Index cells() const {
    return Eigen::Index(bob) * Eigen::Index(alice) * Eigen::Index(eve);
  }
  constexpr int extent(VarId v) const {
    switch (v) {
      case VarId::Bob: return bob;
      case VarId::Alice: return alice;
      case VarId::Eve: return eve;
    }
    return 0;
  }
  constexpr bool valid() const { return bob >= 1 && alice >= 1 && eve >= 1; }

  /// Row-major flat index with Bob outermost, then Alice, then Eve.
  constexpr Eigen::Index index(int b, int a, int e) const {
    return (Eigen::Index(b) * alice + a) * eve + e;
  }

  friend constexpr bool operator==(const Shape&, const Shape&) = default;
};

inline std::string to_string(const Shape& s) {
  return "(" + std::to_string(s.bob) + "," + std::to_string(s.alice) + "," +
         std::to_string(s.eve) + ")";
}

namespace detail {

// Shared entry check: clamps round-off negatives in place, rejects the rest.
template <typename Derived>
void check_and_clamp(Eigen::MatrixBase<Derived>& values, ErrorCode negative_code,
                     ErrorCode sum_code) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    Scalar& v = values.derived().data()[i];
    if (!std::isfinite(static_cast<double>(v))) {
      throw Error(ErrorCode::InvalidDistribution, "non-finite entry at " + std::to_string(i));
    }
    if (v < Scalar(0)) {
      if (v < Scalar(-kNegativeClamp)) {
        throw Error(negative_code, "entry " + std::to_string(i) + " is negative");
      }
      v = Scalar(0);
    }
  }
  const Scalar total = values.sum();
  if (std::abs(static_cast<double>(total) - 1.0) > kNormalizationTol) {
    throw Error(sum_code, "entries sum to " + std::to_string(static_cast<double>(total)));
  }
}

}  // namespace detail

/// Joint law P(bob, alice, eve) stored densely in (bob, alice, eve) row-major order.
/// Instances only exist in validated form.
template <typename Scalar>
class BasicTripartite {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// Checks the invariants without renormalizing. Negatives down to -1e-15 are clamped.
  static BasicTripartite validate(Vector probs, const Shape& shape) {
    if (!shape.valid()) {
      throw Error(ErrorCode::ShapeMismatch, "non-positive size in shape " + to_string(shape));
    }
    if (probs.size() != shape.cells()) {
      throw Error(ErrorCode::ShapeMismatch, std::to_string(probs.size()) +
                                                " entries for shape " + to_string(shape));
    }
    detail::check_and_clamp(probs, ErrorCode::NegativeEntry, ErrorCode::NotNormalized);
    return BasicTripartite(shape, std::move(probs));
  }

  const Shape& shape() const noexcept { return shape_; }
  const Vector& probs() const noexcept { return probs_; }
  Scalar operator()(int b, int a, int e) const { return probs_[shape_.index(b, a, e)]; }

  friend bool operator==(const BasicTripartite&, const BasicTripartite&) = default;

 private:
  BasicTripartite(const Shape& shape, Vector probs) : shape_(shape), probs_(std::move(probs)) {}

  Shape shape_;
  Vector probs_;
};

template <typename Scalar>
BasicTripartite<Scalar> validate_tripartite(
    typename BasicTripartite<Scalar>::Vector probs, const Shape& shape) {
  return BasicTripartite<Scalar>::validate(std::move(probs), shape);
}

/// Bivariate table q(row, col); rows and cols are the two retained variables.
template <typename Scalar>
class BasicPair {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  static BasicPair validate(Matrix table) {
    if (table.rows() < 1 || table.cols() < 1) {
      throw Error(ErrorCode::InvalidDistribution, "empty table");
    }
    detail::check_and_clamp(table, ErrorCode::InvalidDistribution,
                            ErrorCode::InvalidDistribution);
    return BasicPair(std::move(table));
  }

  const Matrix& table() const noexcept { return table_; }
  Eigen::Index rows() const noexcept { return table_.rows(); }
  Eigen::Index cols() const noexcept { return table_.cols(); }
  Scalar operator()(Eigen::Index r, Eigen::Index c) const { return table_(r, c); }

  BasicPair transposed() const { return BasicPair(table_.transpose()); }

 private:
  template <typename S>
  friend BasicPair<S> marginal_pair(const BasicTripartite<S>&, VarId, VarId);

  explicit BasicPair(Matrix table) : table_(std::move(table)) {}

  Matrix table_;
};

namespace detail {

template <typename F>
void for_each_cell(const Shape& s, F&& f) {
  Eigen::Index flat = 0;
  for (int b = 0; b < s.bob; ++b)
    for (int a = 0; a < s.alice; ++a)
      for (int e = 0; e < s.eve; ++e) f(b, a, e, flat++);
}

constexpr int pick(VarId v, int b, int a, int e) {
  return v == VarId::Bob ? b : (v == VarId::Alice ? a : e);
}

}  // namespace detail

/// Sums out the third variable; rows are indexed by x and columns by y.
template <typename Scalar>
BasicPair<Scalar> marginal_pair(const BasicTripartite<Scalar>& dist, VarId x, VarId y) {
  if (x == y) throw Error(ErrorCode::SameVariable, "cannot pair a variable with itself");
  const Shape& s = dist.shape();
  typename BasicPair<Scalar>::Matrix table =
      BasicPair<Scalar>::Matrix::Zero(s.extent(x), s.extent(y));
  detail::for_each_cell(s, [&](int b, int a, int e, Eigen::Index flat) {
    table(detail::pick(x, b, a, e), detail::pick(y, b, a, e)) += dist.probs()[flat];
  });
  return BasicPair<Scalar>(std::move(table));
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> marginal_single(const BasicTripartite<Scalar>& dist,
                                                         VarId x) {
  const Shape& s = dist.shape();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(s.extent(x));
  detail::for_each_cell(s, [&](int b, int a, int e, Eigen::Index flat) {
    out[detail::pick(x, b, a, e)] += dist.probs()[flat];
  });
  return out;
}

/// Euclidean projection onto the probability simplex (sort, then threshold).
/// Invariant under adding a constant to every entry of v.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> project_to_simplex(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (v.size() == 0) throw Error(ErrorCode::EmptyInput, "cannot project an empty vector");
  if (!v.allFinite()) throw Error(ErrorCode::InvalidDistribution, "non-finite input");

  Vector sorted = v.reshaped();
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());

  Scalar running = 0;
  Scalar theta = 0;
  for (Eigen::Index j = 0; j < sorted.size(); ++j) {
    running += sorted[j];
    const Scalar candidate = (running - Scalar(1)) / Scalar(j + 1);
    if (sorted[j] - candidate > Scalar(0)) theta = candidate;
  }
  return (v.reshaped().array() - theta).cwiseMax(Scalar(0)).matrix();
}

using TripartiteDistribution = BasicTripartite<double>;
using PairDistribution = BasicPair<double>;

/// Dirichlet(concentration, ..., concentration) over all cells of the shape.
/// Gamma draws come from a fixed xoshiro256** stream so equal inputs give bit-equal output.
TripartiteDistribution dirichlet_sample(const Shape& shape, double concentration,
                                        std::uint64_t seed);

}  // namespace gapinfo
