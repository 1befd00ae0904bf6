#include "beliefsim/analytics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

namespace beliefsim {

double dtw_distance(const Trajectory& a, const Trajectory& b, int window, bool use_headings) {
  if (use_headings) return dtw_distance(a.headings, b.headings, window);
  return dtw_distance(a.positions, b.positions, window);
}

DistanceMatrix pairwise_matrix(std::span<const Trajectory> trajectories, const PairwiseOptions& options) {
  const auto n = static_cast<Eigen::Index>(trajectories.size());
  if (n < 2) throw std::invalid_argument("pairwise_matrix: need at least 2 trajectories");
  for (const auto& t : trajectories) {
    if (t.dimensions() != trajectories.front().dimensions())
      throw DimensionMismatch("pairwise_matrix: mixed dimensions");
  }

  DistanceMatrix result;
  result.values = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : trajectories) result.ids.push_back(t.agent);

  // Row i owns cells (i, j > i); rows are dealt round-robin so work stays balanced.
  auto fill_row = [&](Eigen::Index i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      result.values(i, j) = dtw_distance(trajectories[static_cast<std::size_t>(i)],
                                         trajectories[static_cast<std::size_t>(j)], options.window,
                                         options.use_headings);
    }
  };
  const int workers = std::max(1, std::min<int>(options.threads, static_cast<int>(n)));
  if (workers == 1) {
    for (Eigen::Index i = 0; i < n; ++i) fill_row(i);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (Eigen::Index i = w; i < n; i += workers) fill_row(i);
      });
    }
  }
  result.values.triangularView<Eigen::StrictlyLower>() = result.values.transpose();
  return result;
}

Eigen::VectorXd social_distance(const Eigen::MatrixXd& matrix) { return matrix.colwise().sum().transpose(); }

Eigen::VectorXd social_distance(const DistanceMatrix& matrix) { return social_distance(matrix.values); }

const char* to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::kNomad: return "NOMAD";
    case PhaseLabel::kFlock: return "FLOCK";
    case PhaseLabel::kStampede: return "STAMPEDE";
  }
  return "?";
}

PhaseLabel PhaseClassification::label_for(double distance) const {
  if (distance < stampede_flock_boundary) return PhaseLabel::kStampede;
  if (distance < flock_nomad_boundary) return PhaseLabel::kFlock;
  return PhaseLabel::kNomad;
}

std::vector<int> partition_1d(std::span<const double> sorted, int groups) {
  const std::size_t n = sorted.size();
  if (groups < 1 || n < static_cast<std::size_t>(groups))
    throw std::invalid_argument("partition_1d: fewer values than groups");

  // Prefix sums give the squared deviation of any contiguous range in O(1).
  std::vector<double> s(n + 1, 0.0), s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    s[i + 1] = s[i] + sorted[i];
    s2[i + 1] = s2[i] + sorted[i] * sorted[i];
  }
  auto cost = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
    const double count = static_cast<double>(hi - lo);
    const double sum = s[hi] - s[lo];
    return std::max(0.0, (s2[hi] - s2[lo]) - sum * sum / count);
  };

  const auto g = static_cast<std::size_t>(groups);
  constexpr double inf = std::numeric_limits<double>::infinity();
  // best[k][i]: minimal cost of splitting the first i values into k groups.
  std::vector<std::vector<double>> best(g + 1, std::vector<double>(n + 1, inf));
  std::vector<std::vector<std::size_t>> split(g + 1, std::vector<std::size_t>(n + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t k = 1; k <= g; ++k) {
    for (std::size_t i = k; i <= n; ++i) {
      for (std::size_t j = k - 1; j < i; ++j) {
        if (best[k - 1][j] == inf) continue;
        const double c = best[k - 1][j] + cost(j, i);
        if (c < best[k][i]) {
          best[k][i] = c;
          split[k][i] = j;
        }
      }
    }
  }

  std::vector<int> assignment(n, 0);
  std::size_t end = n;
  for (std::size_t k = g; k >= 1; --k) {
    const std::size_t begin = split[k][end];
    for (std::size_t i = begin; i < end; ++i) assignment[i] = static_cast<int>(k - 1);
    end = begin;
  }
  return assignment;
}

PhaseClassification classify_phases(std::span<const double> run_distances) {
  const std::size_t n = run_distances.size();
  if (n < 3) throw InsufficientData();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return run_distances[a] < run_distances[b]; });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = run_distances[order[i]];

  PhaseClassification out;
  out.labels.assign(n, PhaseLabel::kFlock);

  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) {
    out.degenerate = true;
    out.stampede = out.flock = out.nomad = {sorted.front(), sorted.back()};
    out.stampede_flock_boundary = sorted.front();
    out.flock_nomad_boundary = sorted.back();
    return out;
  }

  const std::vector<int> group = partition_1d(sorted, 3);
  std::array<Band, 3> bands;
  std::array<bool, 3> seen{};
  for (std::size_t i = 0; i < n; ++i) {
    auto& b = bands[static_cast<std::size_t>(group[i])];
    if (!seen[static_cast<std::size_t>(group[i])]) {
      b = {sorted[i], sorted[i]};
      seen[static_cast<std::size_t>(group[i])] = true;
    }
    b.min = std::min(b.min, sorted[i]);
    b.max = std::max(b.max, sorted[i]);
    constexpr PhaseLabel by_group[] = {PhaseLabel::kStampede, PhaseLabel::kFlock, PhaseLabel::kNomad};
    out.labels[order[i]] = by_group[group[i]];
  }
  out.stampede = bands[0];
  out.flock = bands[1];
  out.nomad = bands[2];
  out.stampede_flock_boundary = 0.5 * (bands[0].max + bands[1].min);
  out.flock_nomad_boundary = 0.5 * (bands[1].max + bands[2].min);

  const double gap = std::min(bands[1].min - bands[0].max, bands[2].min - bands[1].max);
  double spread = 0.0;
  for (const auto& b : bands) spread = std::max(spread, b.max - b.min);
  out.separation = spread > 0.0 ? gap / spread : std::numeric_limits<double>::infinity();
  return out;
}

double separation_score(std::span<const std::vector<double>> groups) {
  std::vector<Band> bands;
  std::vector<double> means;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("separation_score: empty group");
    const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    bands.push_back({*lo, *hi});
    means.push_back(std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size()));
  }
  std::vector<std::size_t> order(bands.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });

  double gap = std::numeric_limits<double>::infinity();
  double spread = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Band& b = bands[order[i]];
    spread = std::max(spread, b.max - b.min);
    if (i > 0) gap = std::min(gap, b.min - bands[order[i - 1]].max);
  }
  if (spread == 0.0) return gap > 0.0 ? std::numeric_limits<double>::infinity() : gap;
  return gap / spread;
}

Timelines run_statistics(std::span<const Trajectory> trajectories) {
  Timelines out;
  if (trajectories.empty()) return out;
  const Eigen::Index samples = trajectories.front().length();
  for (const auto& t : trajectories) {
    if (t.length() != samples) throw std::invalid_argument("run_statistics: trajectories differ in length");
  }
  const bool have_headings = std::all_of(trajectories.begin(), trajectories.end(),
                                         [&](const Trajectory& t) { return t.headings.cols() == samples; });
  const double count = static_cast<double>(trajectories.size());

  out.mean_distance_from_origin.reserve(static_cast<std::size_t>(samples));
  for (Eigen::Index s = 0; s < samples; ++s) {
    double sum = 0.0;
    for (const auto& t : trajectories) sum += t.positions.col(s).norm();
    out.mean_distance_from_origin.push_back(sum / count);

    if (!have_headings) continue;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(trajectories.front().dimensions());
    for (const auto& t : trajectories) mean += t.headings.col(s);
    const double norm = mean.norm();
    if (norm < 1e-12) {
      // Headings cancel: no consensus direction to deviate from.
      out.heading_deviation.push_back(std::numbers::pi / 2.0);
      continue;
    }
    mean /= norm;
    double deviation = 0.0;
    for (const auto& t : trajectories) {
      const double c = std::clamp(t.headings.col(s).dot(mean) / t.headings.col(s).norm(), -1.0, 1.0);
      deviation += std::acos(c);
    }
    out.heading_deviation.push_back(deviation / count);
  }
  return out;
}

}  // namespace beliefsim
