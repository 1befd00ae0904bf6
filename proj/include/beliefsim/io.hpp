#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "beliefsim/analytics.hpp"
#include "beliefsim/world.hpp"

namespace beliefsim {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Key/value pairs carried in "# key=value" lines at the top of every CSV we write.
using CsvHeader = std::map<std::string, std::string>;

/// Streams trajectory samples as CSV:
/// run_id,step,time,agent_id,population,pos_0..pos_{d-1},ori_0..ori_{d-1},speed,weight
class TrajectoryWriter {
 public:
  TrajectoryWriter(const std::filesystem::path& path, const std::string& run_id, int dimensions,
                   const CsvHeader& header);
  void write(const World& world);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::string run_id_;
};

/// step,agent_id,kind,dimension
class EventWriter {
 public:
  EventWriter(const std::filesystem::path& path, const CsvHeader& header);
  void write(std::span<const BoundaryEvent> events);

 private:
  std::ofstream out_;
};

/// cell_0..cell_{d-1},count in cell order.
void write_heatmap_csv(const std::filesystem::path& path, const Heatmap& heatmap, int dimensions,
                       const CsvHeader& header);

struct TrajectoryFile {
  std::string run_id;
  CsvHeader header;
  std::vector<Trajectory> trajectories;  // ordered by agent id
};

/// Read a trajectory CSV written by TrajectoryWriter. Throws std::runtime_error
/// naming the file on malformed input.
TrajectoryFile read_trajectory_csv(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const DistanceMatrix& matrix);
void write_social_distance_csv(const std::filesystem::path& path, const DistanceMatrix& matrix,
                               const Eigen::VectorXd& distances);

}  // namespace beliefsim
