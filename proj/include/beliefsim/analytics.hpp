#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "beliefsim/agent.hpp"

namespace beliefsim {

/// Sampled path of one agent. Each column is one sample.
struct Trajectory {
  AgentId agent = 0;
  int population = 0;
  double sample_period = 0.0;
  Eigen::MatrixXd positions;  // dimensions x samples
  Eigen::MatrixXd headings;   // dimensions x samples, or empty

  Eigen::Index dimensions() const { return positions.rows(); }
  Eigen::Index length() const { return positions.cols(); }
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dynamic time warping cost between two sequences stored column-wise.
///
/// Point cost is Euclidean distance; the path runs from the first pair of
/// samples to the last with match, insert and delete moves. The returned
/// value is the accumulated cost along the cheapest path, unnormalized.
/// A non-negative `window` restricts |i - j| (after rescaling for unequal
/// lengths) to a Sakoe-Chiba band.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dtw_distance(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b, int window = -1) {
  using Scalar = typename DerivedA::Scalar;
  if (a.rows() != b.rows()) throw DimensionMismatch("dtw: dimension mismatch");
  const Eigen::Index n = a.cols();
  const Eigen::Index m = b.cols();
  if (n == 0 || m == 0) throw std::invalid_argument("dtw: empty sequence");

  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  const Eigen::Index band = window < 0 ? std::max(n, m) : std::max<Eigen::Index>(window, std::abs(n - m));

  std::vector<Scalar> prev(static_cast<std::size_t>(m + 1), inf);
  std::vector<Scalar> cur(static_cast<std::size_t>(m + 1), inf);
  prev[0] = Scalar(0);
  for (Eigen::Index i = 1; i <= n; ++i) {
    std::fill(cur.begin(), cur.end(), inf);
    // Centre of the band for row i when the sequences differ in length.
    const Eigen::Index centre = (m == n) ? i : (i * m + n / 2) / n;
    const Eigen::Index lo = std::max<Eigen::Index>(1, centre - band);
    const Eigen::Index hi = std::min<Eigen::Index>(m, centre + band);
    for (Eigen::Index j = lo; j <= hi; ++j) {
      const Scalar cost = (a.col(i - 1) - b.col(j - 1)).norm();
      const Scalar best = std::min({prev[static_cast<std::size_t>(j - 1)], prev[static_cast<std::size_t>(j)],
                                    cur[static_cast<std::size_t>(j - 1)]});
      cur[static_cast<std::size_t>(j)] = cost + best;
    }
    std::swap(prev, cur);
  }
  return prev[static_cast<std::size_t>(m)];
}

/// DTW between two trajectories, on positions or on headings.
double dtw_distance(const Trajectory& a, const Trajectory& b, int window = -1, bool use_headings = false);

/// Symmetric matrix of pairwise DTW costs, indexed like `ids`.
struct DistanceMatrix {
  std::vector<AgentId> ids;
  Eigen::MatrixXd values;

  Eigen::Index size() const { return values.rows(); }
};

struct PairwiseOptions {
  int window = -1;
  bool use_headings = false;
  int threads = 1;
};

/// Computes each unordered pair once. Throws DimensionMismatch on mixed dimensions.
DistanceMatrix pairwise_matrix(std::span<const Trajectory> trajectories, const PairwiseOptions& options = {});

/// Column sums: each agent's total distance to all others.
Eigen::VectorXd social_distance(const DistanceMatrix& matrix);
Eigen::VectorXd social_distance(const Eigen::MatrixXd& matrix);

enum class PhaseLabel { kNomad, kFlock, kStampede };

const char* to_string(PhaseLabel label);

struct Band {
  double min = 0.0;
  double max = 0.0;
};

struct PhaseClassification {
  std::vector<PhaseLabel> labels;  // one per input run, input order
  // Bands in ascending order of distance: stampede, flock, nomad.
  Band stampede;
  Band flock;
  Band nomad;
  // Cut points between adjacent bands (midpoints of the gaps).
  double stampede_flock_boundary = 0.0;
  double flock_nomad_boundary = 0.0;
  // Smallest gap between adjacent bands over the widest band's range.
  double separation = 0.0;
  // Fewer than three distinct values; labels carry no information.
  bool degenerate = false;

  PhaseLabel label_for(double distance) const;
};

class InsufficientData : public std::invalid_argument {
 public:
  InsufficientData() : std::invalid_argument("insufficient data for 3-phase classification") {}
};

/// Optimal 1-D partition of `values` into three contiguous groups that
/// minimizes total within-group squared deviation. Returns, for each
/// sorted position, the group 0..2. Exact dynamic programming.
std::vector<int> partition_1d(std::span<const double> sorted_values, int groups);

/// Label runs by their mean social distance: highest band nomad, lowest stampede.
PhaseClassification classify_phases(std::span<const double> run_distances);

/// Separation of given (not clustered) groups: min gap between adjacent groups
/// ordered by mean, over the widest group's range. Negative when groups overlap.
double separation_score(std::span<const std::vector<double>> groups);

struct Timelines {
  std::vector<double> mean_distance_from_origin;
  // Mean angle (radians) between each heading and the population mean heading.
  std::vector<double> heading_deviation;
};

/// Per-sample summary of a group of equal-length trajectories. Needs headings
/// for the deviation timeline; it stays empty otherwise.
Timelines run_statistics(std::span<const Trajectory> trajectories);

}  // namespace beliefsim
