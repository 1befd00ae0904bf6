#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "beliefsim/agent.hpp"
#include "beliefsim/rng.hpp"
#include "beliefsim/vector.hpp"

namespace beliefsim {

/// Weighted sums below this magnitude carry no usable direction.
inline constexpr double kDegenerateSum = 1e-12;

/// Advance a position along a unit heading.
template <typename DerivedP, typename DerivedO>
Vector<typename DerivedP::Scalar> update_position(const Eigen::MatrixBase<DerivedP>& position,
                                                  const Eigen::MatrixBase<DerivedO>& orientation,
                                                  typename DerivedP::Scalar speed,
                                                  typename DerivedP::Scalar dt) {
  return position + orientation * (speed * dt);
}

inline BeliefVector update_position(const Agent& agent, double dt) {
  return update_position(agent.position, agent.orientation, agent.speed, dt);
}

/// Combined neighbour signal: where the neighbourhood points and how fast it moves.
struct Influence {
  BeliefVector heading;  // unit length
  double speed = 0.0;    // falloff-weighted mean neighbour speed
};

/// Strength of one neighbour of weight `weight` at `distance`: w * (1 - d / (w * r))
/// inside its reach w * r, zero at and beyond it.
inline double falloff(double distance, double weight, double horizon) {
  const double reach = weight * horizon;
  if (!(reach > 0.0) || !(distance < reach)) return 0.0;
  return weight * (1.0 - distance / reach);
}

/// Falloff-weighted alignment target for `self`.
///
/// A neighbour n at distance d counts when d < w_n * r, where r is the
/// observer's configured horizon, or the neighbour's amplified horizon when
/// a herder is boosting it. Its contribution is w_n * (1 - d / (w_n * r)),
/// so influence falls linearly to zero at the edge of the horizon. The
/// observer itself is skipped, as is anything `visible` rejects.
template <typename Visible>
std::optional<Influence> target_orientation(const Agent& self, std::span<const Agent> others,
                                            Visible&& visible) {
  if (!(self.base_sih > 0.0)) return std::nullopt;

  BeliefVector heading = BeliefVector::Zero(self.dimensions());
  double speed_sum = 0.0;
  double weight_sum = 0.0;
  for (const Agent& other : others) {
    if (other.id == self.id || !visible(other)) continue;
    const double d = (self.position - other.position).norm();
    const double c = falloff(d, other.weight, other.amplified ? other.sih : self.base_sih);
    if (c <= 0.0) continue;
    heading.noalias() += c * other.orientation;
    speed_sum += c * other.speed;
    weight_sum += c;
  }
  const double magnitude = heading.norm();
  if (!(magnitude >= kDegenerateSum) || !(weight_sum > 0.0)) return std::nullopt;
  return Influence{heading / magnitude, speed_sum / weight_sum};
}

inline std::optional<Influence> target_orientation(const Agent& self, std::span<const Agent> others) {
  return target_orientation(self, others, [](const Agent&) { return true; });
}

/// Rotate `current` toward `target` by the fraction min(turn_rate * dt, 1)
/// of the angle between them.
///
/// The rotation happens in the plane spanned by the two vectors, built with
/// a Gram-Schmidt step, so it works unchanged in any dimension. A target
/// pointing exactly away from `current` has no unique plane; the first
/// coordinate axis not parallel to `current` supplies the second basis vector.
template <typename DerivedC, typename DerivedT>
Vector<typename DerivedC::Scalar> slew_orientation(const Eigen::MatrixBase<DerivedC>& current,
                                                   const Eigen::MatrixBase<DerivedT>& target,
                                                   typename DerivedC::Scalar turn_rate,
                                                   typename DerivedC::Scalar dt) {
  using Scalar = typename DerivedC::Scalar;
  using Vec = Vector<Scalar>;

  const Vec goal = normalize(target);
  const Scalar cos_angle = std::clamp(current.dot(goal), Scalar(-1), Scalar(1));
  Vec perpendicular = goal - cos_angle * current;
  // atan2 keeps small angles accurate where acos(cos) would not.
  const Scalar angle = std::atan2(perpendicular.norm(), cos_angle);
  const Scalar fraction = std::clamp(turn_rate * dt, Scalar(0), Scalar(1));
  if (fraction <= Scalar(0)) return current;
  if (angle < Scalar(1e-12)) return current;

  if (std::numbers::pi_v<Scalar> - angle < Scalar(1e-9)) {
    const Eigen::Index n = current.size();
    for (Eigen::Index k = 0; k < n; ++k) {
      Vec axis = Vec::Unit(n, k);
      perpendicular = axis - current.dot(axis) * current;
      if (perpendicular.norm() > Scalar(1e-6)) break;
    }
  }
  perpendicular.normalize();

  const Scalar turned = angle * fraction;
  Vec result = std::cos(turned) * current + std::sin(turned) * perpendicular;
  result.normalize();
  return result;
}

/// Where a respawned agent may land and how fast it may move.
struct SpawnRange {
  double init_half_range = 5.0;
  double speed_min = 0.1;
  double speed_max = 2.0;
};

/// Fresh random state for an agent: position, heading and speed.
inline void randomize_state(Agent& agent, int dimensions, const SpawnRange& range, Stream& stream) {
  agent.position = stream.uniform_box(dimensions, range.init_half_range);
  agent.orientation = stream.unit_vector(dimensions);
  agent.speed = stream.uniform(range.speed_min, range.speed_max);
}

/// Enforce the border policy after the position update. Appends one event per
/// reflected dimension, or a single event for a respawn.
inline void apply_boundary(Agent& agent, BorderPolicy border, double extent, const SpawnRange& range,
                           Stream& stream, std::int64_t step_index, std::vector<BoundaryEvent>& events) {
  if (border == BorderPolicy::kNone) return;
  const int d = agent.dimensions();

  if (border == BorderPolicy::kReflect) {
    bool reflected = false;
    for (int k = 0; k < d; ++k) {
      double& x = agent.position[k];
      if (std::abs(x) <= extent) continue;
      const double wall = x > 0.0 ? extent : -extent;
      x = 2.0 * wall - x;
      // A step longer than the whole environment can overshoot the far wall.
      x = std::clamp(x, -extent, extent);
      agent.orientation[k] = -agent.orientation[k];
      reflected = true;
      events.push_back({step_index, agent.id, BoundaryEventKind::kReflected, k});
    }
    if (reflected) agent.orientation.normalize();
    return;
  }

  for (int k = 0; k < d; ++k) {
    if (std::abs(agent.position[k]) > extent) {
      randomize_state(agent, d, range, stream);
      events.push_back({step_index, agent.id, BoundaryEventKind::kRespawned, k});
      return;
    }
  }
}

/// Horizon that produces equivalent behaviour in `dimensions` dimensions.
inline double effective_sih(double base_sih, int dimensions) {
  return base_sih * std::sqrt(static_cast<double>(dimensions));
}

}  // namespace beliefsim
