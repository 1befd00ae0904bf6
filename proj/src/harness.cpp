#include "beliefsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace beliefsim {

RunOptions options_from_environment(RunOptions defaults) {
  if (const char* out = std::getenv("BELIEFSIM_OUT"); out && *out) defaults.out_dir = out;
  if (const char* threads = std::getenv("BELIEFSIM_THREADS"); threads && *threads) {
    const int n = std::atoi(threads);
    if (n < 1) throw ConfigError("BELIEFSIM_THREADS", "must be a positive integer");
    defaults.threads = n;
  }
  return defaults;
}

CsvHeader run_header(const ExperimentConfig& config, std::uint64_t seed) {
  const WorldConfig world = config.effective_world();
  std::string sih;
  for (const auto& p : world.populations) sih += (sih.empty() ? "" : ";") + format_double(p.sih);
  return {{"format", "beliefsim-v1"},
          {"name", config.name},
          {"config_digest", config_digest(config)},
          {"seed", std::to_string(seed)},
          {"dt", format_double(config.dt)},
          {"steps", std::to_string(config.steps)},
          {"sample_every", std::to_string(config.sample_every)},
          {"dimensions", std::to_string(world.dimensions)},
          {"border", to_string(world.border)},
          {"sih", sih},
          {"herding", to_string(world.herding.mode)}};
}

RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed, const std::string& run_id,
                     const RunOptions& options, const SampleObserver& observer) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  WorldConfig world_config = config.effective_world();
  world_config.threads = options.threads;
  World world(world_config, seed);

  RunRecord record;
  record.run_id = run_id;
  record.config_digest = config_digest(config);
  record.seed = seed;

  std::optional<TrajectoryWriter> trajectory;
  std::optional<EventWriter> events;
  const CsvHeader header = run_header(config, seed);
  if (options.write_files) {
    record.trajectory_csv = options.out_dir / (run_id + ".trajectory.csv");
    record.events_csv = options.out_dir / (run_id + ".events.csv");
    record.heatmap_csv = options.out_dir / (run_id + ".heatmap.csv");
    trajectory.emplace(record.trajectory_csv, run_id, world_config.dimensions, header);
    events.emplace(record.events_csv, header);
  }

  auto sample = [&] {
    if (trajectory) trajectory->write(world);
    if (observer) observer(world);
  };
  sample();
  for (int k = 1; k <= config.steps; ++k) {
    world.step(config.dt);
    if (events) events->write(world.events());
    if (k % config.sample_every == 0) sample();
  }

  if (options.write_files) write_heatmap_csv(record.heatmap_csv, world.heatmap(), world_config.dimensions, header);
  record.reflected = world.reflected_count();
  record.respawned = world.respawned_count();
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

namespace {

std::string run_name(const ExperimentConfig& config, std::uint64_t seed) {
  return config.name + "-s" + std::to_string(seed);
}

/// Runs jobs[i]() on up to `workers` threads, returning results in job order.
std::vector<RunRecord> run_jobs(const std::vector<std::function<RunRecord()>>& jobs, int workers) {
  std::vector<RunRecord> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = jobs[i]();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, std::optional<std::uint64_t> seed,
                                      const RunOptions& options) {
  config.validate();
  const std::uint64_t base = seed.value_or(config.seed);
  std::vector<std::function<RunRecord()>> jobs;
  for (int i = 0; i < config.repetitions; ++i) {
    const std::uint64_t s = base + static_cast<std::uint64_t>(i);
    jobs.emplace_back([&config, s, &options] { return run_single(config, s, run_name(config, s), options); });
  }
  auto records = run_jobs(jobs, options.parallel_runs);
  if (options.write_files) write_run_manifest(options.out_dir / "runs.csv", records);
  return records;
}

ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& parameter, double value) {
  ExperimentConfig c = config;
  const std::string label = format_double(value);
  if (parameter == "sih") {
    for (auto& p : c.world.populations) p.sih = value;
  } else if (parameter == "herding_weight") {
    c.world.herding.amplified_weight = value;
  } else if (parameter == "dt") {
    c.dt = value;
  } else if (parameter == "dimensions") {
    if (value != std::floor(value)) throw ConfigError("dimensions", "must be an integer");
    c.world.dimensions = static_cast<int>(value);
  } else {
    throw ConfigError(parameter, "parameter is not sweepable (expected sih, herding_weight, dt or dimensions)");
  }
  c.name = config.name + "-" + parameter + label;
  c.validate();
  return c;
}

std::vector<RunRecord> sweep(const ExperimentConfig& config, const std::string& parameter,
                             std::span<const double> values, const RunOptions& options) {
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  std::vector<ExperimentConfig> variants;
  for (const double v : values) variants.push_back(with_parameter(config, parameter, v));

  std::vector<std::function<RunRecord()>> jobs;
  for (const auto& variant : variants) {
    for (int i = 0; i < variant.repetitions; ++i) {
      const std::uint64_t s = variant.seed + static_cast<std::uint64_t>(i);
      jobs.emplace_back([&variant, s, &options] { return run_single(variant, s, run_name(variant, s), options); });
    }
  }
  auto records = run_jobs(jobs, options.parallel_runs);
  if (options.write_files) write_run_manifest(options.out_dir / "runs.csv", records);
  return records;
}

void write_run_manifest(const std::filesystem::path& path, std::span<const RunRecord> records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "run_id,config_digest,seed,trajectory_csv,events_csv,heatmap_csv,wall_seconds,reflected,respawned\n";
  for (const auto& r : records) {
    out << r.run_id << ',' << r.config_digest << ',' << r.seed << ',' << r.trajectory_csv.filename().string() << ','
        << r.events_csv.filename().string() << ',' << r.heatmap_csv.filename().string() << ','
        << format_double(r.wall_seconds) << ',' << r.reflected << ',' << r.respawned << '\n';
  }
}

void TrajectoryCollector::operator()(const World& world) {
  const auto agents = world.agents();
  if (positions_.empty()) {
    positions_.resize(agents.size());
    headings_.resize(agents.size());
    for (const Agent& a : agents) populations_.push_back(a.population);
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    positions_[i].push_back(agents[i].position);
    headings_[i].push_back(agents[i].orientation);
  }
  times_.push_back(world.sim_time());
}

std::vector<Trajectory> TrajectoryCollector::trajectories() const {
  std::vector<Trajectory> out;
  const double period = times_.size() > 1 ? times_[1] - times_[0] : 0.0;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    Trajectory t;
    t.agent = static_cast<AgentId>(i);
    t.population = populations_[i];
    t.sample_period = period;
    const auto n = static_cast<Eigen::Index>(positions_[i].size());
    const auto d = positions_[i].front().size();
    t.positions.resize(d, n);
    t.headings.resize(d, n);
    for (Eigen::Index s = 0; s < n; ++s) {
      t.positions.col(s) = positions_[i][static_cast<std::size_t>(s)];
      t.headings.col(s) = headings_[i][static_cast<std::size_t>(s)];
    }
    out.push_back(std::move(t));
  }
  return out;
}

double mean_social_distance(std::span<const Trajectory> trajectories, const AnalysisOptions& options) {
  const DistanceMatrix matrix = pairwise_matrix(trajectories, {options.window, options.use_headings, options.threads});
  return social_distance(matrix).mean();
}

AnalysisResult analyze_directory(const std::filesystem::path& dir, const AnalysisOptions& options) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 15 && name.ends_with(".trajectory.csv")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no *.trajectory.csv files in " + dir.string());

  AnalysisResult result;
  for (const auto& path : files) {
    const TrajectoryFile file = read_trajectory_csv(path);
    const DistanceMatrix matrix =
        pairwise_matrix(file.trajectories, {options.window, options.use_headings, options.threads});
    const Eigen::VectorXd social = social_distance(matrix);
    const std::string stem = path.filename().string().substr(0, path.filename().string().size() - 15);
    write_matrix_csv(dir / (stem + ".distance.csv"), matrix);
    write_social_distance_csv(dir / (stem + ".social.csv"), matrix, social);

    RunSummary summary;
    summary.run_id = file.run_id.empty() ? stem : file.run_id;
    if (const auto it = file.header.find("sih"); it != file.header.end()) {
      summary.sih = std::stod(it->second.substr(0, it->second.find(';')));
    }
    summary.mean_distance = social.mean();
    result.runs.push_back(summary);
  }

  std::vector<double> distances;
  for (const auto& r : result.runs) distances.push_back(r.mean_distance);
  if (distances.size() >= 3) {
    result.classification = classify_phases(distances);
    for (std::size_t i = 0; i < result.runs.size(); ++i) result.runs[i].phase = result.classification->labels[i];
  }

  std::ofstream out(dir / "phases.csv");
  if (!out) throw std::runtime_error("cannot open for writing: " + (dir / "phases.csv").string());
  out << "run_id,sih,mean_distance,phase,separation\n";
  for (const auto& r : result.runs) {
    out << r.run_id << ',' << format_double(r.sih) << ',' << format_double(r.mean_distance) << ','
        << (result.classification ? to_string(r.phase) : "NA") << ','
        << (result.classification ? format_double(result.classification->separation) : "NA") << '\n';
  }
  return result;
}

}  // namespace beliefsim
