#include "beliefsim/herding.hpp"

#include <algorithm>
#include <stdexcept>

#include "beliefsim/dynamics.hpp"

namespace beliefsim {

const char* to_string(HerdingMode mode) {
  switch (mode) {
    case HerdingMode::kOff: return "OFF";
    case HerdingMode::kClosestToMean: return "CLOSEST_TO_MEAN";
    case HerdingMode::kFixedLeader: return "FIXED_LEADER";
    case HerdingMode::kRandomEachCycle: return "RANDOM_EACH_CYCLE";
    case HerdingMode::kOpposing: return "OPPOSING";
  }
  return "?";
}

HerdingMode parse_herding_mode(const std::string& name) {
  for (auto mode : {HerdingMode::kOff, HerdingMode::kClosestToMean, HerdingMode::kFixedLeader,
                    HerdingMode::kRandomEachCycle, HerdingMode::kOpposing}) {
    if (name == to_string(mode)) return mode;
  }
  throw std::invalid_argument("unknown herding mode '" + name + "'");
}

std::optional<BeliefVector> mean_heading(std::span<const Agent> agents) {
  if (agents.empty()) throw std::invalid_argument("mean heading of an empty agent list");
  BeliefVector sum = BeliefVector::Zero(agents.front().dimensions());
  for (const Agent& a : agents) sum += a.orientation;
  sum /= static_cast<double>(agents.size());
  if (!(sum.norm() >= kDegenerateSum)) return std::nullopt;
  return normalize(sum);
}

std::optional<BeliefVector> mean_heading(std::span<const Agent> agents, int population) {
  std::vector<Agent> members;
  for (const Agent& a : agents)
    if (a.population == population) members.push_back(a);
  if (members.empty()) return std::nullopt;
  return mean_heading(members);
}

std::optional<AgentId> most_aligned(std::span<const Agent> agents, int population,
                                    const BeliefVector& direction) {
  std::optional<AgentId> best;
  double best_dot = 0.0;
  for (const Agent& a : agents) {
    if (a.population != population) continue;
    const double dot = a.orientation.dot(direction);
    if (!best || dot > best_dot || (dot == best_dot && a.id < *best)) {
      best = a.id;
      best_dot = dot;
    }
  }
  return best;
}

std::optional<AgentId> random_member(std::span<const Agent> agents, int population, Stream& stream) {
  std::vector<AgentId> members;
  for (const Agent& a : agents)
    if (a.population == population) members.push_back(a.id);
  if (members.empty()) return std::nullopt;
  return members[stream.below(members.size())];
}

Selection select_amplified(const HerdingPolicy& policy, std::span<const Agent> snapshot,
                           Stream& stream, std::optional<AgentId> leader) {
  const int pop = policy.target_population;
  switch (policy.mode) {
    case HerdingMode::kOff:
      return {};
    case HerdingMode::kRandomEachCycle:
      return {random_member(snapshot, pop, stream), false};
    case HerdingMode::kFixedLeader:
      if (leader) return {leader, false};
      return {random_member(snapshot, pop, stream), false};
    case HerdingMode::kClosestToMean: {
      const auto mean = mean_heading(snapshot, pop);
      if (!mean) return {random_member(snapshot, pop, stream), true};
      return {most_aligned(snapshot, pop, *mean), false};
    }
    case HerdingMode::kOpposing: {
      const auto mean = mean_heading(snapshot, policy.opposing_source);
      if (!mean) return {random_member(snapshot, pop, stream), true};
      return {most_aligned(snapshot, pop, -*mean), false};
    }
  }
  return {};
}

void apply_amplification(std::span<Agent> agents, std::span<const AgentId> selected,
                         const HerdingPolicy& policy, double extent) {
  const double reach = policy.amplified_sih.value_or(extent);
  for (Agent& a : agents) {
    const bool chosen = std::find(selected.begin(), selected.end(), a.id) != selected.end();
    if (chosen) {
      a.weight = policy.amplified_weight;
      a.sih = reach;
      a.amplified = true;
    } else if (a.amplified || a.weight != 1.0 || a.sih != a.base_sih) {
      a.weight = 1.0;
      a.sih = a.base_sih;
      a.amplified = false;
    }
  }
}

void HerdingController::apply(std::span<Agent> snapshot, const HerdingPolicy& policy, double extent,
                              std::uint64_t seed, std::int64_t step_index) {
  std::vector<AgentId> chosen;

  if (policy.mode == HerdingMode::kFixedLeader) {
    if (policy.fixed_leader_id) {
      leader_ = policy.fixed_leader_id;
    } else if (!leader_) {
      Stream stream(seed, 0, 0, StreamPurpose::kLeader);
      leader_ = random_member(snapshot, policy.target_population, stream);
    }
  }

  Stream stream(seed, static_cast<std::uint64_t>(step_index), 0, StreamPurpose::kHerdSelect);
  const Selection sel = select_amplified(policy, snapshot, stream, leader_);
  if (sel.fell_back) {
    log_.push_back({step_index, std::string(to_string(policy.mode)) +
                                    ": mean heading undefined, random agent amplified"});
  }
  if (sel.agent) chosen.push_back(*sel.agent);

  // The opposed population is herded along its own mean so the two groups pull apart.
  if (policy.mode == HerdingMode::kOpposing && policy.opposing_source != policy.target_population) {
    HerdingPolicy source = policy;
    source.mode = HerdingMode::kClosestToMean;
    source.target_population = policy.opposing_source;
    Stream source_stream(seed, static_cast<std::uint64_t>(step_index), 1, StreamPurpose::kHerdSelect);
    const Selection s = select_amplified(source, snapshot, source_stream);
    if (s.fell_back) {
      log_.push_back({step_index, "OPPOSING: source mean heading undefined, random agent amplified"});
    }
    if (s.agent) chosen.push_back(*s.agent);
  }

  apply_amplification(snapshot, chosen, policy, extent);
  amplified_ = std::move(chosen);
}

}  // namespace beliefsim
