#include "beliefsim/world.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace beliefsim {

const char* to_string(BorderPolicy border) {
  switch (border) {
    case BorderPolicy::kNone: return "NONE";
    case BorderPolicy::kReflect: return "REFLECT";
    case BorderPolicy::kRespawn: return "RESPAWN";
  }
  return "?";
}

const char* to_string(BoundaryEventKind kind) {
  return kind == BoundaryEventKind::kReflected ? "REFLECTED" : "RESPAWNED";
}

BorderPolicy parse_border(const std::string& name) {
  for (auto b : {BorderPolicy::kNone, BorderPolicy::kReflect, BorderPolicy::kRespawn})
    if (name == to_string(b)) return b;
  throw std::invalid_argument("unknown border policy '" + name + "'");
}

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }
bool finite_non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

/// Run fn(i) for i in [0, n) on up to `threads` threads in contiguous blocks.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(n, begin + block);
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (std::size_t i = 0; i < std::min(n, block); ++i) fn(i);
}

}  // namespace

void WorldConfig::validate() const {
  if (dimensions < kMinDimensions || dimensions > kMaxDimensions)
    throw ConfigError("dimensions", "dimensions out of range [2,10]");
  if (!finite_positive(extent)) throw ConfigError("extent", "must be > 0");
  if (!finite_positive(init_half_range)) throw ConfigError("init_half_range", "must be > 0");
  if (init_half_range > extent) throw ConfigError("init_half_range", "must not exceed extent");
  if (!finite_positive(cell_size)) throw ConfigError("cell_size", "must be > 0");
  if (populations.empty() || populations.size() > 2)
    throw ConfigError("populations", "one or two populations required");
  for (std::size_t p = 0; p < populations.size(); ++p) {
    const auto& pop = populations[p];
    const std::string prefix = "populations[" + std::to_string(p) + "].";
    if (pop.count < 1) throw ConfigError(prefix + "count", "must be >= 1");
    if (!finite_non_negative(pop.sih)) throw ConfigError(prefix + "sih", "must be >= 0");
    if (!finite_non_negative(pop.speed_min)) throw ConfigError(prefix + "speed_min", "must be >= 0");
    if (!std::isfinite(pop.speed_max) || pop.speed_max < pop.speed_min)
      throw ConfigError(prefix + "speed_max", "must be >= speed_min");
    if (!finite_positive(pop.turn_rate)) throw ConfigError(prefix + "turn_rate", "must be > 0");
  }
  const int npop = static_cast<int>(populations.size());
  if (!(herding.amplified_weight >= 1.0) || !std::isfinite(herding.amplified_weight))
    throw ConfigError("herding.amplified_weight", "must be >= 1");
  if (herding.amplified_sih && !finite_non_negative(*herding.amplified_sih))
    throw ConfigError("herding.amplified_sih", "must be >= 0");
  if (herding.target_population < 0 || herding.target_population >= npop)
    throw ConfigError("herding.target_population", "no such population");
  if (herding.mode == HerdingMode::kOpposing &&
      (herding.opposing_source < 0 || herding.opposing_source >= npop))
    throw ConfigError("herding.opposing_source", "no such population");
  if (herding.fixed_leader_id && (*herding.fixed_leader_id < 0 || *herding.fixed_leader_id >= agent_count()))
    throw ConfigError("herding.fixed_leader_id", "no such agent");
  if (threads < 1) throw ConfigError("threads", "must be >= 1");
}

int WorldConfig::agent_count() const {
  int n = 0;
  for (const auto& p : populations) n += p.count;
  return n;
}

Heatmap::Cell Heatmap::cell_of(const BeliefVector& position) const {
  Cell cell(static_cast<std::size_t>(position.size()));
  for (Eigen::Index k = 0; k < position.size(); ++k)
    cell[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(std::floor(position[k] / cell_size_));
  return cell;
}

void Heatmap::add(const BeliefVector& position) {
  Cell cell = cell_of(position);
  ++cells_[cell];
  touched_.insert(std::move(cell));
  ++total_;
}

std::uint64_t Heatmap::count(const Cell& cell) const {
  const auto it = cells_.find(cell);
  return it == cells_.end() ? 0 : it->second;
}

World::World(WorldConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed), heatmap_(config_.cell_size) {
  config_.validate();
  AgentId id = 0;
  for (int p = 0; p < static_cast<int>(config_.populations.size()); ++p) {
    const PopulationConfig& pop = config_.populations[static_cast<std::size_t>(p)];
    for (int i = 0; i < pop.count; ++i, ++id) {
      Agent a;
      a.id = id;
      a.population = p;
      a.sih = a.base_sih = pop.sih;
      a.turn_rate = pop.turn_rate;
      Stream stream(seed_, 0, static_cast<std::uint64_t>(id), StreamPurpose::kInit);
      randomize_state(a, config_.dimensions, spawn_range(p), stream);
      front_.push_back(std::move(a));
    }
  }
  back_ = front_;
}

World init_world(const WorldConfig& config, std::uint64_t seed) { return World(config, seed); }

SpawnRange World::spawn_range(int population) const {
  const auto& pop = config_.populations[static_cast<std::size_t>(population)];
  return {config_.init_half_range, pop.speed_min, pop.speed_max};
}

bool World::sees(const Agent& observer, const Agent& other) const {
  return observer.population == other.population ||
         config_.populations[static_cast<std::size_t>(observer.population)].sees_other;
}

Agent World::advance(const Agent& agent, double dt, std::vector<BoundaryEvent>& events) const {
  Agent next = agent;
  const auto influence = target_orientation(
      agent, std::span<const Agent>(front_), [&](const Agent& other) { return sees(agent, other); });
  if (influence) {
    next.orientation = slew_orientation(agent.orientation, influence->heading, agent.turn_rate, dt);
    if (config_.speed_adaptation) {
      const double fraction = std::min(agent.turn_rate * dt, 1.0);
      next.speed = agent.speed + fraction * (influence->speed - agent.speed);
    }
  }
  next.position = update_position(agent, dt);

  Stream stream(seed_, static_cast<std::uint64_t>(step_index_ + 1), static_cast<std::uint64_t>(agent.id),
                StreamPurpose::kRespawn);
  apply_boundary(next, config_.border, config_.extent, spawn_range(agent.population), stream,
                 step_index_ + 1, events);
  return next;
}

void World::step(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");

  herding_.apply(front_, config_.herding, config_.extent, seed_, step_index_ + 1);

  const std::size_t n = front_.size();
  std::vector<std::vector<BoundaryEvent>> per_agent(n);
  parallel_for(n, config_.threads, [&](std::size_t i) { back_[i] = advance(front_[i], dt, per_agent[i]); });

  events_.clear();
  for (auto& list : per_agent) {
    for (const auto& e : list) {
      (e.kind == BoundaryEventKind::kReflected ? reflected_total_ : respawned_total_) += 1;
      events_.push_back(e);
    }
  }

  heatmap_.clear_touched();
  for (const Agent& a : back_) heatmap_.add(a.position);

  front_.swap(back_);
  sim_time_ += dt;
  step_index_ += 1;
}

void World::set_herding(const HerdingPolicy& policy) {
  WorldConfig candidate = config_;
  candidate.herding = policy;
  candidate.validate();
  config_.herding = policy;
}

void World::set_population_sih(int population, double sih) {
  WorldConfig candidate = config_;
  if (population < 0 || population >= static_cast<int>(config_.populations.size()))
    throw ConfigError("population", "no such population");
  candidate.populations[static_cast<std::size_t>(population)].sih = sih;
  candidate.validate();
  config_ = std::move(candidate);
  for (Agent& a : front_) {
    if (a.population != population) continue;
    a.base_sih = sih;
    if (!a.amplified) a.sih = sih;
  }
}

void World::set_border(BorderPolicy border) { config_.border = border; }

void World::set_speed_range(int population, double speed_min, double speed_max) {
  WorldConfig candidate = config_;
  if (population < 0 || population >= static_cast<int>(config_.populations.size()))
    throw ConfigError("population", "no such population");
  auto& pop = candidate.populations[static_cast<std::size_t>(population)];
  pop.speed_min = speed_min;
  pop.speed_max = speed_max;
  candidate.validate();
  config_ = std::move(candidate);
}

void World::set_threads(int threads) { config_.threads = std::max(threads, 1); }

void World::set_population_mix(double nomad_fraction) {
  if (!(nomad_fraction >= 0.0 && nomad_fraction <= 1.0))
    throw ConfigError("nomad_fraction", "must be in [0,1]");
  const int n = config_.agent_count();
  const int nomads = std::min(n - 1, static_cast<int>(std::lround(nomad_fraction * n)));

  WorldConfig candidate = config_;
  PopulationConfig main = config_.populations.front();
  main.count = n - nomads;
  candidate.populations = {main};
  if (nomads > 0) {
    PopulationConfig nomad = main;
    nomad.count = nomads;
    nomad.sih = 0.0;
    candidate.populations.push_back(nomad);
  }
  const int npop = static_cast<int>(candidate.populations.size());
  if (candidate.herding.target_population >= npop) candidate.herding.target_population = 0;
  if (candidate.herding.opposing_source >= npop) candidate.herding.opposing_source = 0;
  if (candidate.herding.mode == HerdingMode::kOpposing && npop < 2) candidate.herding.mode = HerdingMode::kOff;
  candidate.validate();
  config_ = std::move(candidate);

  for (Agent& a : front_) {
    a.population = a.id >= n - nomads ? 1 : 0;
    a.base_sih = config_.populations[static_cast<std::size_t>(a.population)].sih;
    if (!a.amplified) a.sih = a.base_sih;
  }
}

}  // namespace beliefsim
