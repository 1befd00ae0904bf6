#include "beliefsim/io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace beliefsim {

std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void write_header(std::ofstream& out, const CsvHeader& header) {
  for (const auto& [key, value] : header) out << "# " << key << '=' << value << '\n';
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" + text + "'");
  return value;
}

}  // namespace

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path& path, const std::string& run_id, int dimensions,
                                   const CsvHeader& header)
    : path_(path), out_(open_output(path)), run_id_(run_id) {
  write_header(out_, header);
  out_ << "run_id,step,time,agent_id,population";
  for (int k = 0; k < dimensions; ++k) out_ << ",pos_" << k;
  for (int k = 0; k < dimensions; ++k) out_ << ",ori_" << k;
  out_ << ",speed,weight\n";
}

void TrajectoryWriter::write(const World& world) {
  const std::string time = format_double(world.sim_time());
  for (const Agent& a : world.agents()) {
    out_ << run_id_ << ',' << world.step_index() << ',' << time << ',' << a.id << ',' << a.population;
    for (Eigen::Index k = 0; k < a.position.size(); ++k) out_ << ',' << format_double(a.position[k]);
    for (Eigen::Index k = 0; k < a.orientation.size(); ++k) out_ << ',' << format_double(a.orientation[k]);
    out_ << ',' << format_double(a.speed) << ',' << format_double(a.weight) << '\n';
  }
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

EventWriter::EventWriter(const std::filesystem::path& path, const CsvHeader& header) : out_(open_output(path)) {
  write_header(out_, header);
  out_ << "step,agent_id,kind,dimension\n";
}

void EventWriter::write(std::span<const BoundaryEvent> events) {
  for (const auto& e : events)
    out_ << e.step_index << ',' << e.agent << ',' << to_string(e.kind) << ',' << e.dimension << '\n';
}

void write_heatmap_csv(const std::filesystem::path& path, const Heatmap& heatmap, int dimensions,
                       const CsvHeader& header) {
  auto out = open_output(path);
  write_header(out, header);
  for (int k = 0; k < dimensions; ++k) out << "cell_" << k << ',';
  out << "count\n";
  for (const auto& [cell, count] : heatmap.cells()) {
    for (const auto c : cell) out << c << ',';
    out << count << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

TrajectoryFile read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path.string());

  TrajectoryFile file;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> columns;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) file.header[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    columns = split(line, ',');
    break;
  }
  if (columns.size() < 9 || columns[0] != "run_id")
    throw std::runtime_error(path.string() + ": missing trajectory column header");
  const int dims = static_cast<int>(columns.size() - 7) / 2;

  struct Rows {
    int population = 0;
    std::vector<double> times;
    std::vector<double> values;  // position then orientation, per sample
  };
  std::map<AgentId, Rows> by_agent;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != columns.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": wrong field count");
    if (file.run_id.empty()) file.run_id = f[0];
    const auto id = static_cast<AgentId>(parse_double(f[3], path, line_no));
    Rows& rows = by_agent[id];
    rows.population = static_cast<int>(parse_double(f[4], path, line_no));
    rows.times.push_back(parse_double(f[2], path, line_no));
    for (int k = 0; k < 2 * dims; ++k) rows.values.push_back(parse_double(f[5 + k], path, line_no));
  }

  for (auto& [id, rows] : by_agent) {
    Trajectory t;
    t.agent = id;
    t.population = rows.population;
    const auto samples = static_cast<Eigen::Index>(rows.times.size());
    t.sample_period = samples > 1 ? rows.times[1] - rows.times[0] : 0.0;
    t.positions.resize(dims, samples);
    t.headings.resize(dims, samples);
    for (Eigen::Index s = 0; s < samples; ++s) {
      for (int k = 0; k < dims; ++k) {
        t.positions(k, s) = rows.values[static_cast<std::size_t>(s * 2 * dims + k)];
        t.headings(k, s) = rows.values[static_cast<std::size_t>(s * 2 * dims + dims + k)];
      }
    }
    file.trajectories.push_back(std::move(t));
  }
  return file;
}

void write_matrix_csv(const std::filesystem::path& path, const DistanceMatrix& matrix) {
  auto out = open_output(path);
  out << "agent_id";
  for (const auto id : matrix.ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index i = 0; i < matrix.size(); ++i) {
    out << matrix.ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < matrix.size(); ++j) out << ',' << format_double(matrix.values(i, j));
    out << '\n';
  }
}

void write_social_distance_csv(const std::filesystem::path& path, const DistanceMatrix& matrix,
                               const Eigen::VectorXd& distances) {
  auto out = open_output(path);
  out << "agent_id,social_distance\n";
  for (Eigen::Index i = 0; i < distances.size(); ++i)
    out << matrix.ids[static_cast<std::size_t>(i)] << ',' << format_double(distances[i]) << '\n';
}

}  // namespace beliefsim
