#include "beliefsim/session.hpp"

#include <cmath>

namespace beliefsim {

using nlohmann::json;

const char* to_string(CommandKind kind) {
  switch (kind) {
    case CommandKind::kSetSih: return "SET_SIH";
    case CommandKind::kSetHerding: return "SET_HERDING";
    case CommandKind::kSetBorder: return "SET_BORDER";
    case CommandKind::kSetSpeedRange: return "SET_SPEED_RANGE";
    case CommandKind::kPause: return "PAUSE";
    case CommandKind::kResume: return "RESUME";
    case CommandKind::kReset: return "RESET";
    case CommandKind::kSetPopulationMix: return "SET_POPULATION_MIX";
    case CommandKind::kSetSpeed: return "SET_SPEED";
  }
  return "?";
}

namespace {

CommandKind parse_kind(const std::string& name) {
  for (auto k : {CommandKind::kSetSih, CommandKind::kSetHerding, CommandKind::kSetBorder, CommandKind::kSetSpeedRange,
                 CommandKind::kPause, CommandKind::kResume, CommandKind::kReset, CommandKind::kSetPopulationMix,
                 CommandKind::kSetSpeed}) {
    if (name == to_string(k)) return k;
  }
  throw CommandError("unknown command type '" + name + "'");
}

template <typename T>
T field(const json& message, const char* key) {
  if (!message.contains(key)) throw CommandError(std::string("missing field '") + key + "'");
  try {
    return message.at(key).get<T>();
  } catch (const json::exception&) {
    throw CommandError(std::string("bad value for field '") + key + "'");
  }
}

}  // namespace

ControlCommand parse_command(const json& message) {
  if (!message.is_object()) throw CommandError("command must be a JSON object");
  if (message.contains("v") && message.at("v") != kProtocolVersion)
    throw CommandError("unsupported protocol version");
  ControlCommand c;
  c.kind = parse_kind(field<std::string>(message, "type"));
  switch (c.kind) {
    case CommandKind::kSetSih:
      c.population = field<int>(message, "population");
      c.value = field<double>(message, "value");
      break;
    case CommandKind::kSetHerding:
      try {
        c.herding = herding_from_json(field<json>(message, "policy"));
      } catch (const ConfigError& e) {
        throw CommandError(e.what());
      }
      break;
    case CommandKind::kSetBorder:
      try {
        c.border = parse_border(field<std::string>(message, "border"));
      } catch (const std::invalid_argument& e) {
        throw CommandError(e.what());
      }
      break;
    case CommandKind::kSetSpeedRange:
      c.population = field<int>(message, "population");
      c.speed_min = field<double>(message, "speed_min");
      c.speed_max = field<double>(message, "speed_max");
      break;
    case CommandKind::kReset:
      c.seed = field<std::uint64_t>(message, "seed");
      break;
    case CommandKind::kSetPopulationMix:
      c.value = field<double>(message, "nomad_fraction");
      break;
    case CommandKind::kSetSpeed:
      c.value = field<double>(message, "multiplier");
      if (!(c.value > 0.0 && c.value <= kMaxSpeedMultiplier))
        throw CommandError("multiplier must be in (0, " + std::to_string(static_cast<int>(kMaxSpeedMultiplier)) + "]");
      break;
    case CommandKind::kPause:
    case CommandKind::kResume:
      break;
  }
  return c;
}

ControlCommand parse_command(const std::string& text) {
  json message;
  try {
    message = json::parse(text);
  } catch (const json::parse_error&) {
    throw CommandError("message is not valid JSON");
  }
  return parse_command(message);
}

json to_json(const ControlCommand& c) {
  json out = {{"v", kProtocolVersion}, {"type", to_string(c.kind)}};
  switch (c.kind) {
    case CommandKind::kSetSih:
      out["population"] = c.population;
      out["value"] = c.value;
      break;
    case CommandKind::kSetHerding:
      out["policy"] = to_json(c.herding);
      break;
    case CommandKind::kSetBorder:
      out["border"] = to_string(c.border);
      break;
    case CommandKind::kSetSpeedRange:
      out["population"] = c.population;
      out["speed_min"] = c.speed_min;
      out["speed_max"] = c.speed_max;
      break;
    case CommandKind::kReset:
      out["seed"] = c.seed;
      break;
    case CommandKind::kSetPopulationMix:
      out["nomad_fraction"] = c.value;
      break;
    case CommandKind::kSetSpeed:
      out["multiplier"] = c.value;
      break;
    case CommandKind::kPause:
    case CommandKind::kResume:
      break;
  }
  return out;
}

json to_json(const LoggedCommand& entry) {
  return {{"tick", entry.tick}, {"step", entry.step}, {"command", to_json(entry.command)}};
}

LoggedCommand logged_command_from_json(const json& j) {
  LoggedCommand entry;
  entry.tick = field<std::uint64_t>(j, "tick");
  entry.step = field<std::int64_t>(j, "step");
  entry.command = parse_command(field<json>(j, "command"));
  return entry;
}

json agents_to_json(std::span<const Agent> agents, std::pair<int, int> projection) {
  const auto [px, py] = projection;
  json out = json::array();
  for (const Agent& a : agents) {
    out.push_back({{"id", a.id},
                   {"population", a.population},
                   {"x", a.position[px]},
                   {"y", a.position[py]},
                   {"ox", a.orientation[px]},
                   {"oy", a.orientation[py]},
                   {"speed", a.speed},
                   {"amplified", a.amplified}});
  }
  return out;
}

void PhaseEstimator::observe(const World& world) {
  if (world.step_index() % settings_.sample_every != 0) return;
  std::vector<BeliefVector> positions;
  positions.reserve(world.agents().size());
  for (const Agent& a : world.agents()) positions.push_back(a.position);
  if (!samples_.empty() && samples_.back().size() != positions.size()) samples_.clear();
  samples_.push_back(std::move(positions));
  while (static_cast<int>(samples_.size()) > settings_.window) samples_.pop_front();
}

std::optional<PhaseEstimator::Estimate> PhaseEstimator::estimate(double extent, std::int64_t step) const {
  if (static_cast<int>(samples_.size()) < settings_.window || samples_.front().size() < 2) return std::nullopt;
  const std::size_t agents = samples_.front().size();
  const auto dims = samples_.front().front().size();
  std::vector<Trajectory> trajectories(agents);
  for (std::size_t i = 0; i < agents; ++i) {
    trajectories[i].agent = static_cast<AgentId>(i);
    trajectories[i].positions.resize(dims, static_cast<Eigen::Index>(samples_.size()));
    for (std::size_t s = 0; s < samples_.size(); ++s)
      trajectories[i].positions.col(static_cast<Eigen::Index>(s)) = samples_[s][i];
  }
  const double mean = social_distance(pairwise_matrix(trajectories)).mean();
  Estimate e;
  e.step = step;
  e.spread = mean / (static_cast<double>(agents - 1) * static_cast<double>(samples_.size()) * extent);
  e.label = e.spread < settings_.stampede_below ? PhaseLabel::kStampede
            : e.spread > settings_.nomad_above  ? PhaseLabel::kNomad
                                                : PhaseLabel::kFlock;
  return e;
}

void PhaseEstimator::reset() { samples_.clear(); }

namespace {

WorldConfig session_world(const ExperimentConfig& config) {
  WorldConfig w = config.effective_world();
  return w;
}

}  // namespace

Session::Session(ExperimentConfig config, std::uint64_t seed)
    : config_(std::move(config)), initial_seed_(seed), seed_(seed), world_(session_world(config_), seed) {
  estimator_.observe(world_);
}

ExperimentConfig Session::active_config() const {
  ExperimentConfig c = config_;
  c.world = world_.config();
  c.sqrt_dim_scaling = false;  // the world already holds scaled horizons
  return c;
}

void Session::submit(ControlCommand command, std::uint64_t origin) {
  std::lock_guard lock(queue_mutex_);
  queue_.emplace_back(std::move(command), origin);
}

void Session::rebuild(std::uint64_t seed) {
  seed_ = seed;
  WorldConfig w = session_world(config_);
  w.threads = world_.config().threads;
  world_ = World(w, seed);
  pending_events_.clear();
  pending_cells_.clear();
  estimator_.reset();
  estimator_.observe(world_);
  phase_.reset();
}

void Session::set_population_mix(double nomad_fraction) { world_.set_population_mix(nomad_fraction); }

void Session::apply(const ControlCommand& c) {
  switch (c.kind) {
    case CommandKind::kSetSih:
      world_.set_population_sih(c.population, c.value);
      break;
    case CommandKind::kSetHerding:
      world_.set_herding(c.herding);
      break;
    case CommandKind::kSetBorder:
      world_.set_border(c.border);
      break;
    case CommandKind::kSetSpeedRange:
      world_.set_speed_range(c.population, c.speed_min, c.speed_max);
      break;
    case CommandKind::kPause:
      paused_ = true;
      break;
    case CommandKind::kResume:
      paused_ = false;
      break;
    case CommandKind::kReset:
      rebuild(c.seed);
      break;
    case CommandKind::kSetPopulationMix:
      set_population_mix(c.value);
      break;
    case CommandKind::kSetSpeed:
      speed_multiplier_ = c.value;
      break;
  }
}

std::vector<Session::Rejection> Session::tick() {
  std::vector<std::pair<ControlCommand, std::uint64_t>> pending;
  {
    std::lock_guard lock(queue_mutex_);
    pending.swap(queue_);
  }
  ++ticks_;

  std::vector<Rejection> rejected;
  for (const auto& [c, origin] : pending) {
    try {
      const std::int64_t step = world_.step_index();
      apply(c);
      log_.push_back({ticks_, step, c});
    } catch (const std::exception& e) {
      rejected.push_back({c, origin, e.what()});
    }
  }

  if (!paused_) {
    world_.step(config_.dt);
    pending_events_.insert(pending_events_.end(), world_.events().begin(), world_.events().end());
    pending_cells_.insert(world_.heatmap().touched().begin(), world_.heatmap().touched().end());
    estimator_.observe(world_);
    if (world_.step_index() % (estimator_.settings().sample_every * 4) == 0) {
      if (auto e = estimator_.estimate(world_.config().extent, world_.step_index())) phase_ = e;
    }
  }
  return rejected;
}

json Session::snapshot(std::pair<int, int> projection) {
  const int d = world_.config().dimensions;
  auto [px, py] = projection;
  if (px < 0 || px >= d || py < 0 || py >= d) throw CommandError("projection dimensions out of range");

  json events = json::array();
  for (const auto& e : pending_events_)
    events.push_back({{"step", e.step_index}, {"agent", e.agent}, {"kind", to_string(e.kind)}, {"dimension", e.dimension}});
  json cells = json::array();
  for (const auto& cell : pending_cells_) cells.push_back({{"cell", cell}, {"count", world_.heatmap().count(cell)}});
  pending_events_.clear();
  pending_cells_.clear();

  json sih = json::array();
  for (const auto& p : world_.config().populations) sih.push_back(p.sih);
  json phase = nullptr;
  if (phase_) phase = {{"label", to_string(phase_->label)}, {"spread", phase_->spread}, {"step", phase_->step}};

  return {{"v", kProtocolVersion},
          {"type", "snapshot"},
          {"tick", ticks_},
          {"step", world_.step_index()},
          {"sim_time", world_.sim_time()},
          {"seed", seed_},
          {"paused", paused_},
          {"speed_multiplier", speed_multiplier_},
          {"projection", {px, py}},
          {"cell_size", world_.heatmap().cell_size()},
          {"border", to_string(world_.config().border)},
          {"sih", sih},
          {"herding", to_json(world_.config().herding)},
          {"agents", agents_to_json(world_.agents(), projection)},
          {"events", events},
          {"heatmap_delta", cells},
          {"phase", phase}};
}

void Session::replay(const ExperimentConfig& config, std::uint64_t seed, std::span<const LoggedCommand> log,
                     std::uint64_t ticks, const std::function<void(const Session&)>& observer) {
  Session session(config, seed);
  std::size_t next = 0;
  for (std::uint64_t t = 1; t <= ticks; ++t) {
    while (next < log.size() && log[next].tick == t) session.submit(log[next++].command);
    session.tick();
    if (observer) observer(session);
  }
}

json Session::record() const {
  json commands = json::array();
  for (const auto& entry : log_) commands.push_back(to_json(entry));
  return {{"v", kProtocolVersion},
          {"config", to_json(config_)},
          {"seed", initial_seed_},
          {"ticks", ticks_},
          {"commands", commands}};
}

void Session::replay(const json& record, const std::function<void(const Session&)>& observer) {
  std::vector<LoggedCommand> log;
  for (const auto& entry : record.at("commands")) log.push_back(logged_command_from_json(entry));
  replay(from_json(record.at("config")), record.at("seed").get<std::uint64_t>(), log,
         record.at("ticks").get<std::uint64_t>(), observer);
}

}  // namespace beliefsim
