#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <unistd.h>

#include "beliefsim/agent.hpp"
#include "beliefsim/config.hpp"

namespace testing {

inline beliefsim::BeliefVector vec(std::initializer_list<double> values) {
  beliefsim::BeliefVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v[k++] = x;
  return v;
}

inline beliefsim::Agent agent(beliefsim::AgentId id, beliefsim::BeliefVector position,
                              beliefsim::BeliefVector orientation, double sih = 0.0, double speed = 1.0) {
  beliefsim::Agent a;
  a.id = id;
  a.position = std::move(position);
  a.orientation = std::move(orientation);
  a.speed = speed;
  a.sih = sih;
  a.base_sih = sih;
  return a;
}

inline beliefsim::ExperimentConfig small_config(int agents = 20, int steps = 50, double sih = 1.0) {
  beliefsim::ExperimentConfig c;
  c.world.dimensions = 2;
  c.world.populations = {beliefsim::PopulationConfig{.count = agents, .sih = sih}};
  c.steps = steps;
  c.sample_every = 5;
  return c;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("beliefsim-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace testing
