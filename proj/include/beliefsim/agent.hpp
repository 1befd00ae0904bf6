#pragma once

#include <cstdint>
#include <string>

#include "beliefsim/vector.hpp"

namespace beliefsim {

using AgentId = std::int32_t;

struct Agent {
  AgentId id = 0;
  int population = 0;
  BeliefVector position;
  BeliefVector orientation;  // unit length
  double speed = 0.0;
  // Influence weight. 1 unless the agent is amplified by a herder.
  double weight = 1.0;
  // Horizon others use when they feel this agent. Equals base_sih unless amplified.
  double sih = 0.0;
  // The configured horizon. An agent's own susceptibility always uses this.
  double base_sih = 0.0;
  double turn_rate = 2.0;
  bool amplified = false;

  int dimensions() const { return static_cast<int>(position.size()); }
};

enum class BorderPolicy { kNone, kReflect, kRespawn };

enum class BoundaryEventKind { kReflected, kRespawned };

struct BoundaryEvent {
  std::int64_t step_index = 0;
  AgentId agent = 0;
  BoundaryEventKind kind = BoundaryEventKind::kReflected;
  int dimension = 0;

  friend bool operator==(const BoundaryEvent&, const BoundaryEvent&) = default;
};

const char* to_string(BorderPolicy border);
const char* to_string(BoundaryEventKind kind);
BorderPolicy parse_border(const std::string& name);

}  // namespace beliefsim
