// beliefsim command line: batch runs, sweeps, analysis and the live server.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "beliefsim/harness.hpp"
#include "beliefsim/server.hpp"

using namespace beliefsim;

namespace {

std::atomic<bool> interrupted{false};

void on_signal(int) { interrupted = true; }

struct Common {
  std::string out;
  int threads = 0;
  int parallel_runs = 1;
};

RunOptions run_options(const Common& common) {
  RunOptions options = options_from_environment();
  if (!common.out.empty()) options.out_dir = common.out;
  if (common.threads > 0) options.threads = common.threads;
  options.parallel_runs = std::max(common.parallel_runs, 1);
  return options;
}

void print_records(const std::vector<RunRecord>& records, const RunOptions& options) {
  for (const auto& r : records) {
    std::cout << r.run_id << "  seed=" << r.seed << "  reflected=" << r.reflected << "  respawned=" << r.respawned
              << "  " << format_double(r.wall_seconds) << "s\n";
  }
  std::cout << records.size() << " run(s) written to " << options.out_dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief-space flocking simulator"};
  app.require_subcommand(1);

  Common common;
  std::string config_path;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run config.repetitions seeded runs and write CSV output");
  run->add_option("config", config_path, "Config file or preset name")->required();
  run->add_option("--seed", seed, "Base seed (overrides the config)");
  run->add_option("--out", common.out, "Output directory (env BELIEFSIM_OUT)");
  run->add_option("--threads", common.threads, "Threads per run (env BELIEFSIM_THREADS)");
  run->add_option("--parallel-runs", common.parallel_runs, "Runs executed concurrently");

  std::string parameter;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one group of repetitions per parameter value");
  sweep_cmd->add_option("config", config_path, "Config file or preset name")->required();
  sweep_cmd->add_option("--param", parameter, "sih, herding_weight, dt or dimensions")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep_cmd->add_option("--seed", seed, "Base seed (overrides the config)");
  sweep_cmd->add_option("--out", common.out, "Output directory (env BELIEFSIM_OUT)");
  sweep_cmd->add_option("--threads", common.threads, "Threads per run (env BELIEFSIM_THREADS)");
  sweep_cmd->add_option("--parallel-runs", common.parallel_runs, "Runs executed concurrently");

  std::string dir;
  AnalysisOptions analysis;
  auto* analyze = app.add_subcommand("analyze", "DTW distances and phase labels for a directory of runs");
  analyze->add_option("dir", dir, "Directory holding *.trajectory.csv")->required();
  analyze->add_option("--window", analysis.window, "Sakoe-Chiba window in samples (-1: none)");
  analyze->add_flag("--headings", analysis.use_headings, "Compare headings instead of positions");
  analyze->add_option("--threads", common.threads, "Threads (env BELIEFSIM_THREADS)");

  StreamServer::Options serve_options;
  std::vector<int> projection;
  auto* serve = app.add_subcommand("serve", "Stream a live, steerable run over websocket");
  serve->add_option("config", config_path, "Config file or preset name")->required();
  serve->add_option("--port", serve_options.port, "Listen port");
  serve->add_option("--address", serve_options.address, "Listen address");
  serve->add_option("--seed", seed, "Seed (overrides the config)");
  serve->add_option("--hz", serve_options.frame_hz, "Snapshots per second");
  serve->add_option("--steps-per-frame", serve_options.steps_per_frame, "Simulation steps per snapshot");
  serve->add_option("--projection", projection, "Dimension pair shown, e.g. 0,1")->delimiter(',')->expected(2);
  serve->add_option("--static", serve_options.static_dir, "Directory of UI files to serve");
  serve->add_option("--record", serve_options.record_path, "Write the session record here on exit");
  serve->add_option("--threads", common.threads, "Threads per step (env BELIEFSIM_THREADS)");

  std::string preset_name;
  auto* presets = app.add_subcommand("presets", "List bundled presets, or print one");
  presets->add_option("name", preset_name, "Preset to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const RunOptions options = run_options(common);
      print_records(run_experiment(load_config(config_path), seed, options), options);
    } else if (*sweep_cmd) {
      ExperimentConfig config = load_config(config_path);
      if (seed) config.seed = *seed;
      const RunOptions options = run_options(common);
      print_records(sweep(config, parameter, values, options), options);
    } else if (*analyze) {
      analysis.threads = run_options(common).threads;
      const AnalysisResult result = analyze_directory(dir, analysis);
      for (const auto& r : result.runs) {
        std::cout << r.run_id << "  sih=" << format_double(r.sih) << "  mean_distance=" << format_double(r.mean_distance);
        if (result.classification) std::cout << "  " << to_string(r.phase);
        std::cout << '\n';
      }
      if (result.classification) std::cout << "separation " << format_double(result.classification->separation) << '\n';
      std::cout << "wrote " << (std::filesystem::path(dir) / "phases.csv").string() << '\n';
    } else if (*serve) {
      ExperimentConfig config = load_config(config_path);
      config.world.threads = run_options(common).threads;
      if (projection.size() == 2) serve_options.projection = {projection[0], projection[1]};
      StreamServer server(config, seed.value_or(config.seed), serve_options);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.start();
      std::cout << "serving " << config.name << " on http://" << serve_options.address << ':' << server.port()
                << "  (websocket /ws, GET /config /health /record)" << std::endl;
      while (!interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
    } else if (*presets) {
      if (preset_name.empty()) {
        for (const auto& name : preset_names()) std::cout << name << '\n';
      } else {
        load_preset(preset_name);
        std::cout << preset_text(preset_name);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const ServerError& e) {
    std::cerr << "error: server: " << e.what() << '\n';
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
