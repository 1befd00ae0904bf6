#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beliefsim {

inline constexpr int kMinDimensions = 2;
inline constexpr int kMaxDimensions = 10;

/// A point or direction in belief space. One component per belief dimension.
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using BeliefVector = Vector<double>;

/// Thrown when a direction is requested from a zero-length vector.
class DegenerateDirection : public std::domain_error {
 public:
  DegenerateDirection() : std::domain_error("degenerate direction") {}
};

template <typename Derived>
Vector<typename Derived::Scalar> normalize(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar n = v.norm();
  if (!(n > Scalar(0)) || !std::isfinite(n)) throw DegenerateDirection();
  return v / n;
}

/// Angle in radians between two non-zero vectors.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar angle_between(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, Scalar(-1), Scalar(1)));
}

}  // namespace beliefsim
