#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefsim/analytics.hpp"
#include "beliefsim/config.hpp"
#include "beliefsim/world.hpp"

namespace beliefsim {

/// Version tag carried by every wire message as "v".
inline constexpr int kProtocolVersion = 1;
inline constexpr double kMaxSpeedMultiplier = 100.0;

enum class CommandKind {
  kSetSih,
  kSetHerding,
  kSetBorder,
  kSetSpeedRange,
  kPause,
  kResume,
  kReset,
  kSetPopulationMix,
  kSetSpeed,
};

const char* to_string(CommandKind kind);

struct ControlCommand {
  CommandKind kind = CommandKind::kPause;
  int population = 0;
  double value = 0.0;  // SET_SIH horizon, SET_POPULATION_MIX nomad fraction, SET_SPEED multiplier
  HerdingPolicy herding;
  BorderPolicy border = BorderPolicy::kReflect;
  double speed_min = 0.0;
  double speed_max = 0.0;
  std::uint64_t seed = 0;
};

/// A command message was malformed or named invalid values.
class CommandError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ControlCommand parse_command(const nlohmann::json& message);
ControlCommand parse_command(const std::string& text);
nlohmann::json to_json(const ControlCommand& command);

/// A command as applied: the tick it was applied on and the step the world was at.
struct LoggedCommand {
  std::uint64_t tick = 0;
  std::int64_t step = 0;
  ControlCommand command;
};

nlohmann::json to_json(const LoggedCommand& entry);
LoggedCommand logged_command_from_json(const nlohmann::json& json);

/// Wire form of the agents projected onto dimensions `projection`.
nlohmann::json agents_to_json(std::span<const Agent> agents, std::pair<int, int> projection);

/// Rolling phase estimate over the most recent samples of every agent.
///
/// The mean pairwise DTW cost over the window is divided by the number of
/// aligned samples and by the environment extent, giving a dimensionless
/// spread: below `stampede_below` reads as STAMPEDE, above `nomad_above`
/// as NOMAD.
class PhaseEstimator {
 public:
  struct Settings {
    int window = 40;        // samples kept per agent
    int sample_every = 5;   // steps between samples
    double stampede_below = 0.15;
    double nomad_above = 0.45;
  };

  struct Estimate {
    PhaseLabel label = PhaseLabel::kFlock;
    double spread = 0.0;
    std::int64_t step = 0;
  };

  PhaseEstimator() = default;
  explicit PhaseEstimator(Settings settings) : settings_(settings) {}

  /// Record the world if this step is a sampling step.
  void observe(const World& world);
  /// Recompute from the current window; nullopt until the window is full.
  std::optional<Estimate> estimate(double extent, std::int64_t step) const;
  void reset();
  const Settings& settings() const { return settings_; }

 private:
  Settings settings_;
  std::deque<std::vector<BeliefVector>> samples_;
};

/// A steerable simulation: world plus queued controls, applied only at step
/// barriers. Network code feeds it commands; replay feeds it a command log.
class Session {
 public:
  Session(ExperimentConfig config, std::uint64_t seed);

  struct Rejection {
    ControlCommand command;
    std::uint64_t origin = 0;
    std::string message;
  };

  /// Thread-safe. The command is validated when it is applied; `origin` is
  /// handed back if it is rejected.
  void submit(ControlCommand command, std::uint64_t origin = 0);

  /// Apply queued commands, then step once unless paused. Returns the
  /// commands that failed to apply.
  std::vector<Rejection> tick();

  /// Snapshot of the current state; resets the heatmap and event deltas.
  nlohmann::json snapshot(std::pair<int, int> projection = {0, 1});

  const World& world() const { return world_; }
  const ExperimentConfig& config() const { return config_; }
  /// Active configuration, including runtime changes.
  ExperimentConfig active_config() const;
  bool paused() const { return paused_; }
  double speed_multiplier() const { return speed_multiplier_; }
  std::uint64_t ticks() const { return ticks_; }
  const std::vector<LoggedCommand>& log() const { return log_; }
  std::optional<PhaseEstimator::Estimate> phase() const { return phase_; }
  std::uint64_t seed() const { return seed_; }

  /// Launch config, launch seed, tick count and command log: enough to replay.
  nlohmann::json record() const;

  /// Re-run a logged session headlessly for `ticks` ticks, calling `observer`
  /// after every tick.
  static void replay(const ExperimentConfig& config, std::uint64_t seed, std::span<const LoggedCommand> log,
                     std::uint64_t ticks, const std::function<void(const Session&)>& observer);
  static void replay(const nlohmann::json& record, const std::function<void(const Session&)>& observer);

 private:
  void apply(const ControlCommand& command);
  void set_population_mix(double nomad_fraction);
  void rebuild(std::uint64_t seed);

  ExperimentConfig config_;
  std::uint64_t initial_seed_;
  std::uint64_t seed_;
  World world_;
  bool paused_ = false;
  double speed_multiplier_ = 1.0;
  std::uint64_t ticks_ = 0;

  std::mutex queue_mutex_;
  std::vector<std::pair<ControlCommand, std::uint64_t>> queue_;
  std::vector<LoggedCommand> log_;

  std::vector<BoundaryEvent> pending_events_;
  std::set<Heatmap::Cell> pending_cells_;
  PhaseEstimator estimator_;
  std::optional<PhaseEstimator::Estimate> phase_;
};

}  // namespace beliefsim
