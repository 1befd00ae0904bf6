#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beliefsim/analytics.hpp"
#include "beliefsim/config.hpp"
#include "beliefsim/io.hpp"

namespace beliefsim {

struct RunRecord {
  std::string run_id;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::filesystem::path trajectory_csv;
  std::filesystem::path events_csv;
  std::filesystem::path heatmap_csv;
  double wall_seconds = 0.0;
  std::uint64_t reflected = 0;
  std::uint64_t respawned = 0;
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  // Threads for the per-agent pass inside one run.
  int threads = 1;
  // Runs of a sweep executed concurrently.
  int parallel_runs = 1;
  bool write_files = true;
};

/// Read BELIEFSIM_OUT and BELIEFSIM_THREADS over the given defaults.
RunOptions options_from_environment(RunOptions defaults = {});

/// Called on every sampled step (step 0 and every sample_every steps after).
using SampleObserver = std::function<void(const World&)>;

/// Header lines recorded in every CSV of a run.
CsvHeader run_header(const ExperimentConfig& config, std::uint64_t seed);

/// One run. Writes <run_id>.trajectory.csv, .events.csv and .heatmap.csv
/// under options.out_dir when write_files is set.
RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed, const std::string& run_id,
                     const RunOptions& options, const SampleObserver& observer = {});

/// config.repetitions runs with seeds seed, seed+1, ... . `seed` overrides config.seed.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, std::optional<std::uint64_t> seed,
                                      const RunOptions& options);

/// Fields a sweep can vary.
inline constexpr const char* kSweepable[] = {"sih", "herding_weight", "dt", "dimensions"};

/// Copy of `config` with `parameter` set to `value`. "sih" sets every
/// population's horizon. Throws ConfigError for a non-sweepable name.
ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& parameter, double value);

/// One group of config.repetitions runs per value, all groups sharing the
/// same seed offsets. Writes runs.csv listing every run.
std::vector<RunRecord> sweep(const ExperimentConfig& config, const std::string& parameter,
                             std::span<const double> values, const RunOptions& options);

void write_run_manifest(const std::filesystem::path& path, std::span<const RunRecord> records);

/// Collects every sampled agent state of a run into trajectories.
class TrajectoryCollector {
 public:
  void operator()(const World& world);
  std::vector<Trajectory> trajectories() const;

 private:
  std::vector<std::vector<BeliefVector>> positions_;
  std::vector<std::vector<BeliefVector>> headings_;
  std::vector<int> populations_;
  std::vector<double> times_;
};

struct AnalysisOptions {
  int window = -1;
  bool use_headings = false;
  int threads = 1;
};

struct RunSummary {
  std::string run_id;
  double sih = 0.0;
  double mean_distance = 0.0;
  PhaseLabel phase = PhaseLabel::kFlock;
};

struct AnalysisResult {
  std::vector<RunSummary> runs;
  std::optional<PhaseClassification> classification;
};

/// Mean over agents of the DTW social distance of one run.
double mean_social_distance(std::span<const Trajectory> trajectories, const AnalysisOptions& options = {});

/// Analyze every *.trajectory.csv in `dir`: writes <run_id>.distance.csv,
/// <run_id>.social.csv and phases.csv (run_id,sih,mean_distance,phase,separation).
AnalysisResult analyze_directory(const std::filesystem::path& dir, const AnalysisOptions& options);

}  // namespace beliefsim
