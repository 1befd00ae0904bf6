#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beliefsim/agent.hpp"
#include "beliefsim/rng.hpp"

namespace beliefsim {

enum class HerdingMode { kOff, kClosestToMean, kFixedLeader, kRandomEachCycle, kOpposing };

const char* to_string(HerdingMode mode);
HerdingMode parse_herding_mode(const std::string& name);

struct HerdingPolicy {
  HerdingMode mode = HerdingMode::kOff;
  double amplified_weight = 10.0;
  // Unset means "the environment extent".
  std::optional<double> amplified_sih;
  int target_population = 0;
  // OPPOSING only: the population whose mean heading the target population is pushed against.
  int opposing_source = 1;
  // FIXED_LEADER only: unset means "pick one uniformly at run start".
  std::optional<AgentId> fixed_leader_id;

  friend bool operator==(const HerdingPolicy&, const HerdingPolicy&) = default;
};

/// Normalized mean of the agents' headings, or nullopt when the headings cancel.
/// Throws std::invalid_argument for an empty list.
std::optional<BeliefVector> mean_heading(std::span<const Agent> agents);

/// Mean heading of the agents belonging to `population`.
std::optional<BeliefVector> mean_heading(std::span<const Agent> agents, int population);

/// Agent in `population` whose heading has the largest dot product with
/// `direction`. Ties go to the lowest id.
std::optional<AgentId> most_aligned(std::span<const Agent> agents, int population,
                                    const BeliefVector& direction);

/// Uniformly random member of `population`.
std::optional<AgentId> random_member(std::span<const Agent> agents, int population, Stream& stream);

struct Selection {
  std::optional<AgentId> agent;
  // True when the mode's heading reference was undefined and a random agent stood in.
  bool fell_back = false;
};

/// Choose the agent to amplify in the policy's target population.
/// `leader` is the run's fixed leader for FIXED_LEADER.
Selection select_amplified(const HerdingPolicy& policy, std::span<const Agent> snapshot,
                           Stream& stream, std::optional<AgentId> leader = std::nullopt);

/// Clear every amplification not listed in `selected`, then amplify the listed agents.
/// `extent` resolves an unset amplified_sih.
void apply_amplification(std::span<Agent> agents, std::span<const AgentId> selected,
                         const HerdingPolicy& policy, double extent);

/// Per-run herding state: the fixed leader and the log of fallbacks.
class HerdingController {
 public:
  struct LogEntry {
    std::int64_t step_index;
    std::string message;
  };

  /// Select and amplify for one step. Runs at the step barrier on the
  /// snapshot every agent is about to read.
  void apply(std::span<Agent> snapshot, const HerdingPolicy& policy, double extent,
             std::uint64_t seed, std::int64_t step_index);

  const std::vector<AgentId>& amplified() const { return amplified_; }
  std::optional<AgentId> leader() const { return leader_; }
  const std::vector<LogEntry>& log() const { return log_; }

 private:
  std::optional<AgentId> leader_;
  std::vector<AgentId> amplified_;
  std::vector<LogEntry> log_;
};

}  // namespace beliefsim
