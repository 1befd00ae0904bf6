#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "beliefsim/agent.hpp"
#include "beliefsim/dynamics.hpp"
#include "beliefsim/herding.hpp"

namespace beliefsim {

/// A configuration value failed validation. `field()` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct PopulationConfig {
  int count = 100;
  double sih = 0.0;
  double speed_min = 0.1;
  double speed_max = 2.0;
  double turn_rate = 2.0;
  // Whether members feel agents of the other population.
  bool sees_other = true;

  friend bool operator==(const PopulationConfig&, const PopulationConfig&) = default;
};

struct WorldConfig {
  int dimensions = 2;
  double extent = 10.0;
  BorderPolicy border = BorderPolicy::kReflect;
  double init_half_range = 5.0;
  double cell_size = 0.5;
  std::vector<PopulationConfig> populations;
  HerdingPolicy herding;
  bool speed_adaptation = true;
  // Threads used for the per-agent pass. Never affects results.
  int threads = 1;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
  int agent_count() const;
};

/// Sparse visit counts over quantized belief-space cells.
class Heatmap {
 public:
  using Cell = std::vector<std::int32_t>;

  explicit Heatmap(double cell_size = 0.5) : cell_size_(cell_size) {}

  Cell cell_of(const BeliefVector& position) const;
  void add(const BeliefVector& position);
  std::uint64_t count(const Cell& cell) const;
  std::uint64_t total() const { return total_; }
  const std::map<Cell, std::uint64_t>& cells() const { return cells_; }
  double cell_size() const { return cell_size_; }

  /// Cells touched since the last call to clear_touched().
  const std::set<Cell>& touched() const { return touched_; }
  void clear_touched() { touched_.clear(); }

 private:
  double cell_size_;
  std::map<Cell, std::uint64_t> cells_;
  std::set<Cell> touched_;
  std::uint64_t total_ = 0;
};

/// Double-buffered simulation state.
///
/// step() reads only the front buffer (the previous snapshot) and writes
/// each agent's next state into the back buffer at the agent's own index,
/// then swaps. The per-agent pass may run on several threads; all of its
/// randomness comes from streams keyed by (seed, step, agent id).
class World {
 public:
  World(WorldConfig config, std::uint64_t seed);

  void step(double dt);

  std::span<const Agent> agents() const { return front_; }
  const WorldConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  double sim_time() const { return sim_time_; }
  std::int64_t step_index() const { return step_index_; }
  const Heatmap& heatmap() const { return heatmap_; }
  Heatmap& heatmap() { return heatmap_; }
  /// Boundary events produced by the most recent step, ordered by agent.
  const std::vector<BoundaryEvent>& events() const { return events_; }
  std::uint64_t reflected_count() const { return reflected_total_; }
  std::uint64_t respawned_count() const { return respawned_total_; }
  const HerdingController& herding() const { return herding_; }

  // Runtime controls. Each takes effect at the next step.
  void set_herding(const HerdingPolicy& policy);
  void set_population_sih(int population, double sih);
  void set_border(BorderPolicy border);
  void set_speed_range(int population, double speed_min, double speed_max);
  void set_threads(int threads);
  /// Turn the highest-id fraction of agents into nomads (horizon 0) held in a
  /// second population; the rest form population 0. Agents keep their state.
  void set_population_mix(double nomad_fraction);

  SpawnRange spawn_range(int population) const;

 private:
  Agent advance(const Agent& agent, double dt, std::vector<BoundaryEvent>& events) const;
  bool sees(const Agent& observer, const Agent& other) const;

  WorldConfig config_;
  std::uint64_t seed_;
  std::vector<Agent> front_;
  std::vector<Agent> back_;
  double sim_time_ = 0.0;
  std::int64_t step_index_ = 0;
  Heatmap heatmap_;
  std::vector<BoundaryEvent> events_;
  std::uint64_t reflected_total_ = 0;
  std::uint64_t respawned_total_ = 0;
  HerdingController herding_;
};

World init_world(const WorldConfig& config, std::uint64_t seed);

}  // namespace beliefsim
