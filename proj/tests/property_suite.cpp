#include "property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "beliefsim/analytics.hpp"
#include "beliefsim/world.hpp"
#include "oracles.hpp"

namespace properties {

using namespace beliefsim;

namespace {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }
  std::uint64_t u64() { return rng_(); }

  BeliefVector vector(int d, double scale = 1.0) {
    BeliefVector v(d);
    for (int k = 0; k < d; ++k) v[k] = std::normal_distribution<double>(0.0, scale)(rng_);
    return v;
  }
  BeliefVector unit(int d) {
    BeliefVector v = vector(d);
    while (v.norm() < 1e-6) v = vector(d);
    return v.normalized();
  }
  Eigen::MatrixXd sequence(int d, int length, double scale = 5.0) {
    Eigen::MatrixXd m(d, length);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = real(-scale, scale);
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

struct WorldShape {
  bool respawn = true;
  bool herding = true;
  bool fixed_leader = true;
  int max_agents = 16;
};

WorldConfig random_world(Gen& g, const WorldShape& shape = {}) {
  WorldConfig w;
  w.dimensions = g.coin(0.6) ? g.integer(2, 3) : g.integer(2, 10);
  w.extent = g.real(2.0, 10.0);
  w.init_half_range = g.real(0.2, 1.0) * w.extent;
  const int borders = shape.respawn ? 3 : 2;
  w.border = std::array{BorderPolicy::kNone, BorderPolicy::kReflect, BorderPolicy::kRespawn}[g.integer(0, borders - 1)];
  w.cell_size = g.real(0.1, 2.0);
  w.speed_adaptation = g.coin(0.7);
  const int populations = g.integer(1, 2);
  for (int p = 0; p < populations; ++p) {
    PopulationConfig pop;
    pop.count = g.integer(1, std::max(1, shape.max_agents / populations));
    pop.sih = g.coin(0.15) ? 0.0 : g.real(0.0, w.extent);
    pop.speed_min = g.real(0.0, 1.0);
    pop.speed_max = pop.speed_min + g.real(0.0, 2.0);
    pop.turn_rate = g.real(0.1, 20.0);
    pop.sees_other = g.coin(0.7);
    w.populations.push_back(pop);
  }
  if (shape.herding) {
    std::vector<HerdingMode> modes = {HerdingMode::kOff, HerdingMode::kClosestToMean, HerdingMode::kRandomEachCycle};
    if (shape.fixed_leader) modes.push_back(HerdingMode::kFixedLeader);
    if (populations == 2) modes.push_back(HerdingMode::kOpposing);
    w.herding.mode = modes[static_cast<std::size_t>(g.integer(0, static_cast<int>(modes.size()) - 1))];
    w.herding.amplified_weight = g.real(1.0, 20.0);
    if (g.coin()) w.herding.amplified_sih = g.real(0.0, 2.0 * w.extent);
    w.herding.target_population = g.integer(0, populations - 1);
    w.herding.opposing_source = 1 - w.herding.target_population;
    if (populations == 1) w.herding.opposing_source = 0;
  }
  return w;
}

/// Collects pass/fail for one property.
class Tally {
 public:
  Tally(const char* name, int cases) { result_.name = name; result_.cases = cases; }

  void check(bool ok, int case_index, const std::function<std::string()>& describe) {
    if (ok) return;
    if (result_.failures++ == 0) result_.first_failure = "case " + std::to_string(case_index) + ": " + describe();
  }
  Result result() const { return result_; }

 private:
  Result result_;
};

double angle(const BeliefVector& a, const BeliefVector& b) {
  const BeliefVector u = a.normalized();
  const BeliefVector v = b.normalized();
  return 2.0 * std::atan2((u - v).norm(), (u + v).norm());
}

std::string text(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

bool same_agent(const Agent& a, const Agent& b) {
  return a.id == b.id && a.population == b.population && a.position == b.position &&
         a.orientation == b.orientation && a.speed == b.speed && a.weight == b.weight && a.sih == b.sih &&
         a.amplified == b.amplified;
}

}  // namespace

Result orientation_stays_unit(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("orientation stays unit length", cases);
  for (int c = 0; c < cases; ++c) {
    World world(random_world(g), g.u64());
    const double dt = g.real(0.01, 0.5);
    const int steps = g.integer(1, 8);
    for (int s = 0; s < steps; ++s) world.step(dt);
    for (const Agent& a : world.agents()) {
      const bool ok = std::abs(a.orientation.norm() - 1.0) <= 1e-9 && std::isfinite(a.speed) && a.speed >= 0.0 &&
                      std::isfinite(a.sih) && a.sih >= 0.0 && a.turn_rate > 0.0 && a.position.allFinite() &&
                      (a.amplified || a.weight == 1.0);
      t.check(ok, c, [&] { return "agent " + std::to_string(a.id) + " |o|-1 = " + text(a.orientation.norm() - 1.0); });
    }
  }
  return t.result();
}

Result slew_is_monotone(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("slew never turns away from the target", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(2, 10);
    const BeliefVector current = g.unit(d);
    BeliefVector target = g.vector(d, g.real(0.1, 10.0));
    if (c % 10 == 0) target = current * g.real(0.5, 3.0);   // already aligned
    if (c % 10 == 1) target = -current * g.real(0.5, 3.0);  // exactly opposite
    const double fraction = c % 7 == 0 ? 0.0 : g.real(1e-3, 1.5);
    const double dt = g.real(0.01, 1.0);
    const BeliefVector next = slew_orientation(current, target, fraction / dt, dt);

    const double before = angle(current, target);
    const double after = angle(next, target);
    bool ok = after <= before + 1e-12;
    if (fraction == 0.0 || before == 0.0) ok = ok && next == current;
    else if (before > 1e-6) ok = ok && after < before;
    t.check(ok, c, [&] { return "angle " + text(before) + " -> " + text(after) + " at fraction " + text(fraction); });
  }
  return t.result();
}

Result slew_is_planar_rotation(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("slew stays unit and in span(current, target)", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(2, 10);
    const BeliefVector current = g.unit(d);
    const BeliefVector target = g.vector(d, g.real(0.1, 10.0));
    const BeliefVector next = slew_orientation(current, target, g.real(0.0, 20.0), g.real(0.0, 0.5));

    // Orthonormal basis of the plane.
    BeliefVector second = target - target.dot(current) * current;
    double residual = 0.0;
    if (second.norm() > 1e-9) {
      second.normalize();
      residual = (next - next.dot(current) * current - next.dot(second) * second).norm();
    }
    const bool ok = std::abs(next.norm() - 1.0) < 1e-9 && residual < 1e-9;
    t.check(ok, c, [&] { return "|new| = " + text(next.norm()) + ", residual " + text(residual); });
  }
  return t.result();
}

Result nomads_are_socially_blind(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("zero-horizon agent moves as if alone", cases);
  for (int c = 0; c < cases; ++c) {
    WorldConfig crowd = random_world(g, {.herding = true, .fixed_leader = true, .max_agents = 12});
    PopulationConfig nomad = crowd.populations.front();
    nomad.count = 1;
    nomad.sih = 0.0;
    WorldConfig alone = crowd;
    alone.populations = {nomad};
    alone.herding = {};
    crowd.populations = {nomad, crowd.populations.back()};
    crowd.herding.target_population = 1;
    crowd.herding.opposing_source = 0;
    if (crowd.herding.fixed_leader_id) crowd.herding.fixed_leader_id.reset();

    const std::uint64_t s = g.u64();
    World with(crowd, s), without(alone, s);
    const double dt = g.real(0.01, 0.5);
    const int steps = g.integer(1, 20);
    bool ok = true;
    for (int k = 0; k < steps && ok; ++k) {
      with.step(dt);
      without.step(dt);
      const Agent& a = with.agents()[0];
      const Agent& b = without.agents()[0];
      ok = a.position == b.position && a.orientation == b.orientation && a.speed == b.speed;
    }
    t.check(ok, c, [&] { return "nomad diverged from its solo run"; });
  }
  return t.result();
}

Result falloff_decreases_with_distance(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("neighbour influence falls with distance", cases);
  for (int c = 0; c < cases; ++c) {
    const double weight = g.coin(0.5) ? 1.0 : g.real(1.0, 20.0);
    const double horizon = g.real(0.01, 10.0);
    const double reach = weight * horizon;
    double near = g.real(0.0, reach);
    double far = g.real(0.0, reach);
    if (near > far) std::swap(near, far);
    if (near == far) continue;

    // Through the full target computation: one neighbour, aligned with self.
    Agent self;
    self.id = 0;
    self.position = BeliefVector::Zero(2);
    self.orientation = BeliefVector::Unit(2, 0);
    self.sih = self.base_sih = horizon;
    Agent other = self;
    other.id = 1;
    other.weight = weight;
    other.speed = 1.0;
    const bool ok = falloff(near, weight, horizon) > falloff(far, weight, horizon) &&
                    falloff(far, weight, horizon) > 0.0 && falloff(reach, weight, horizon) == 0.0;
    other.position = BeliefVector::Unit(2, 1) * far;
    const bool counted = target_orientation(self, std::span<const Agent>(&other, 1)).has_value();
    t.check(ok && counted, c, [&] { return "d " + text(near) + " vs " + text(far) + " within reach " + text(reach); });
  }
  return t.result();
}

Result reflection_stays_inside(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("reflection keeps every coordinate within the extent", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(2, 10);
    const double extent = g.real(0.5, 10.0);
    Agent a;
    a.id = c;
    a.position = BeliefVector(d);
    for (int k = 0; k < d; ++k) a.position[k] = g.real(-3.0 * extent, 3.0 * extent);
    a.orientation = g.unit(d);
    Stream stream(1, 1, static_cast<std::uint64_t>(c), StreamPurpose::kRespawn);
    std::vector<BoundaryEvent> events;
    const BeliefVector before = a.position;
    apply_boundary(a, BorderPolicy::kReflect, extent, {}, stream, 1, events);
    int crossed = 0;
    for (int k = 0; k < d; ++k) crossed += std::abs(before[k]) > extent;
    const bool ok = (a.position.array().abs() <= extent).all() && std::abs(a.orientation.norm() - 1.0) < 1e-12 &&
                    static_cast<int>(events.size()) == crossed;
    t.check(ok, c, [&] { return "max |x| = " + text(a.position.cwiseAbs().maxCoeff()) + " > " + text(extent); });
  }
  return t.result();
}

Result update_order_is_irrelevant(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("per-agent updates in any order give the same step", cases);
  for (int c = 0; c < cases; ++c) {
    WorldConfig config = random_world(g, {.herding = true, .fixed_leader = false});
    const std::uint64_t s = g.u64();
    World world(config, s);
    const double dt = g.real(0.01, 0.5);
    for (int k = g.integer(0, 5); k > 0; --k) world.step(dt);

    // Reference: herding on a copy of the snapshot, then every agent advanced
    // in a shuffled order from that frozen copy.
    std::vector<Agent> snapshot(world.agents().begin(), world.agents().end());
    HerdingController herding;
    const std::int64_t next_step = world.step_index() + 1;
    herding.apply(snapshot, config.herding, config.extent, s, next_step);
    std::vector<std::size_t> order(snapshot.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), std::mt19937_64(g.u64()));
    std::vector<Agent> expected(snapshot.size());
    for (const std::size_t i : order) {
      const Agent& a = snapshot[i];
      Agent next = a;
      const auto& pops = config.populations;
      const auto influence = target_orientation(a, std::span<const Agent>(snapshot), [&](const Agent& o) {
        return o.population == a.population || pops[static_cast<std::size_t>(a.population)].sees_other;
      });
      if (influence) {
        next.orientation = slew_orientation(a.orientation, influence->heading, a.turn_rate, dt);
        if (config.speed_adaptation) next.speed = a.speed + std::min(a.turn_rate * dt, 1.0) * (influence->speed - a.speed);
      }
      next.position = update_position(a, dt);
      Stream stream(s, static_cast<std::uint64_t>(next_step), static_cast<std::uint64_t>(a.id), StreamPurpose::kRespawn);
      std::vector<BoundaryEvent> events;
      apply_boundary(next, config.border, config.extent, world.spawn_range(a.population), stream, next_step, events);
      expected[i] = next;
    }

    world.set_threads(g.integer(1, 6));
    world.step(dt);
    bool ok = true;
    for (std::size_t i = 0; i < expected.size(); ++i) ok = ok && same_agent(world.agents()[i], expected[i]);
    t.check(ok, c, [&] { return "world step differs from the shuffled reference"; });
  }
  return t.result();
}

Result heatmap_counts_every_visit(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("heatmap total equals steps x agents", cases);
  for (int c = 0; c < cases; ++c) {
    World world(random_world(g, {.respawn = false}), g.u64());
    const int steps = g.integer(1, 10);
    std::uint64_t previous = 0;
    bool monotone = true;
    for (int k = 0; k < steps; ++k) {
      world.step(g.real(0.01, 0.5));
      monotone = monotone && world.heatmap().total() >= previous;
      previous = world.heatmap().total();
    }
    std::uint64_t sum = 0;
    for (const auto& [cell, count] : world.heatmap().cells()) sum += count;
    const auto expected = static_cast<std::uint64_t>(steps) * world.agents().size();
    t.check(monotone && sum == expected && world.heatmap().total() == expected, c,
            [&] { return "total " + std::to_string(sum) + " vs " + std::to_string(expected); });
  }
  return t.result();
}

Result at_most_one_amplified(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("one amplified agent per targeted population", cases);
  for (int c = 0; c < cases; ++c) {
    const WorldConfig config = random_world(g);
    World world(config, g.u64());
    const int steps = g.integer(1, 6);
    bool ok = true;
    std::string why;
    for (int k = 0; k < steps && ok; ++k) {
      world.step(g.real(0.01, 0.3));
      std::vector<int> boosted(config.populations.size(), 0);
      for (const Agent& a : world.agents())
        if (a.weight != 1.0 || a.amplified) ++boosted[static_cast<std::size_t>(a.population)];
      for (std::size_t p = 0; p < boosted.size(); ++p) {
        const int target = config.herding.target_population;
        const bool source = config.herding.mode == HerdingMode::kOpposing && static_cast<int>(p) == config.herding.opposing_source;
        int allowed = 0;
        if (config.herding.mode != HerdingMode::kOff && (static_cast<int>(p) == target || source)) allowed = 1;
        // Fallback steps may leave a population without a pick; never more than one.
        if (boosted[p] > allowed || (allowed == 1 && static_cast<int>(p) == target && boosted[p] != 1)) {
          ok = false;
          why = std::string(to_string(config.herding.mode)) + " population " + std::to_string(p) + " has " +
                std::to_string(boosted[p]) + " amplified";
        }
      }
    }
    t.check(ok, c, [&] { return why; });
  }
  return t.result();
}

Result disabling_herding_restores(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("turning herding off restores every agent within one step", cases);
  for (int c = 0; c < cases; ++c) {
    WorldConfig config = random_world(g);
    if (config.herding.mode == HerdingMode::kOff) config.herding.mode = HerdingMode::kClosestToMean;
    World world(config, g.u64());
    const double dt = g.real(0.01, 0.3);
    for (int k = g.integer(1, 5); k > 0; --k) world.step(dt);
    world.set_herding({});
    world.step(dt);
    bool ok = true;
    for (const Agent& a : world.agents()) {
      const double configured = config.populations[static_cast<std::size_t>(a.population)].sih;
      ok = ok && a.weight == 1.0 && !a.amplified && a.sih == configured;
    }
    t.check(ok, c, [&] { return std::string("residual amplification after disabling ") + to_string(config.herding.mode); });
  }
  return t.result();
}

Result opposing_pick_is_anti_aligned(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("OPPOSING picks a heading against the source mean", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(2, 6);
    std::vector<Agent> agents;
    const int n = g.integer(2, 20);
    for (int i = 0; i < n; ++i) {
      Agent a;
      a.id = i;
      a.population = i == 0 ? 0 : i == 1 ? 1 : g.integer(0, 1);
      a.position = g.vector(d);
      a.orientation = g.unit(d);
      agents.push_back(a);
    }
    HerdingPolicy policy;
    policy.mode = HerdingMode::kOpposing;
    policy.target_population = 0;
    policy.opposing_source = 1;
    Stream stream(g.u64(), 1, 0, StreamPurpose::kHerdSelect);
    const Selection pick = select_amplified(policy, agents, stream);
    const auto source_mean = mean_heading(agents, 1);
    if (!source_mean || pick.fell_back) continue;
    bool any_against = false;
    for (const Agent& a : agents)
      if (a.population == 0 && a.orientation.dot(*source_mean) <= 0.0) any_against = true;
    const double chosen = agents[static_cast<std::size_t>(*pick.agent)].orientation.dot(*source_mean);
    const bool ok = pick.agent && agents[static_cast<std::size_t>(*pick.agent)].population == 0 &&
                    (!any_against || chosen <= 0.0);
    t.check(ok, c, [&] { return "picked heading has dot " + text(chosen) + " with the source mean"; });
  }
  return t.result();
}

Result selection_is_deterministic(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("selection depends only on snapshot and stream key", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(2, 6);
    std::vector<Agent> agents;
    const int n = g.integer(1, 30);
    for (int i = 0; i < n; ++i) {
      Agent a;
      a.id = i;
      a.population = n > 1 && i == n - 1 ? 1 : g.integer(0, 1) * (n > 1);
      a.position = g.vector(d);
      a.orientation = g.unit(d);
      agents.push_back(a);
    }
    HerdingPolicy policy;
    policy.target_population = 0;
    policy.opposing_source = 1;
    bool ok = true;
    const std::uint64_t key = g.u64();
    for (const HerdingMode mode : {HerdingMode::kClosestToMean, HerdingMode::kOpposing}) {
      policy.mode = mode;
      Stream a(g.u64(), 1, 0, StreamPurpose::kHerdSelect), b(g.u64(), 2, 0, StreamPurpose::kHerdSelect);
      const Selection first = select_amplified(policy, agents, a);
      const Selection second = select_amplified(policy, agents, b);
      if (!first.fell_back && !second.fell_back) ok = ok && first.agent == second.agent;
    }
    policy.mode = HerdingMode::kRandomEachCycle;
    Stream a(key, 7, 0, StreamPurpose::kHerdSelect), b(key, 7, 0, StreamPurpose::kHerdSelect);
    ok = ok && select_amplified(policy, agents, a).agent == select_amplified(policy, agents, b).agent;
    t.check(ok, c, [&] { return "selection changed between identical calls"; });
  }
  return t.result();
}

Result dtw_is_pseudo_metric(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("DTW is non-negative, symmetric and zero on identical input", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(1, 4);
    const Eigen::MatrixXd a = g.sequence(d, g.integer(1, 40));
    const Eigen::MatrixXd b = g.sequence(d, g.integer(1, 40));
    const double ab = dtw_distance(a, b);
    const double ba = dtw_distance(b, a);
    const bool ok = ab >= 0.0 && std::abs(ab - ba) <= 1e-9 * std::max(1.0, ab) && dtw_distance(a, a) == 0.0;
    t.check(ok, c, [&] { return "dtw(a,b) " + text(ab) + " dtw(b,a) " + text(ba); });
  }
  return t.result();
}

Result dtw_bounded_by_lock_step(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("DTW never exceeds the lock-step cost", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(1, 4);
    const int n = g.integer(1, 40);
    const Eigen::MatrixXd a = g.sequence(d, n);
    const Eigen::MatrixXd b = g.sequence(d, n);
    const double lock_step = (a - b).colwise().norm().sum();
    const double warped = dtw_distance(a, b);
    t.check(warped <= lock_step + 1e-9, c, [&] { return "dtw " + text(warped) + " > lock-step " + text(lock_step); });
  }
  return t.result();
}

Result dtw_matches_path_enumeration(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("DTW equals brute-force path enumeration", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(1, 3);
    const Eigen::MatrixXd a = g.sequence(d, g.integer(1, 6));
    const Eigen::MatrixXd b = g.sequence(d, g.integer(1, 6));
    const double fast = dtw_distance(a, b);
    const double slow = oracle::brute_force_dtw(a, b);
    t.check(std::abs(fast - slow) <= 1e-9, c, [&] { return "dp " + text(fast) + " vs enumeration " + text(slow); });
  }
  return t.result();
}

Result distance_matrix_is_symmetric(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("distance matrix is symmetric, non-negative, zero on the diagonal", cases);
  for (int c = 0; c < cases; ++c) {
    const int d = g.integer(1, 3);
    std::vector<Trajectory> trajectories(static_cast<std::size_t>(g.integer(2, 8)));
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      trajectories[i].agent = static_cast<AgentId>(i);
      trajectories[i].positions = g.sequence(d, g.integer(1, 12));
    }
    const DistanceMatrix m = pairwise_matrix(trajectories, {.threads = g.integer(1, 3)});
    const bool ok = m.values == m.values.transpose() && (m.values.array() >= 0.0).all() &&
                    (m.values.diagonal().array() == 0.0).all();
    t.check(ok, c, [&] { return "matrix violates symmetry or sign"; });
  }
  return t.result();
}

Result classification_ignores_scale(int cases, std::uint64_t seed) {
  Gen g(seed);
  Tally t("phase labels are invariant under positive scaling", cases);
  for (int c = 0; c < cases; ++c) {
    std::vector<double> values(static_cast<std::size_t>(g.integer(3, 30)));
    // Values on a coarse grid so ties occur.
    for (double& v : values) v = g.coin(0.3) ? g.integer(0, 5) * 1000.0 : g.real(0.0, 50000.0);
    const double factor = std::pow(10.0, g.real(-3.0, 3.0));
    std::vector<double> scaled = values;
    for (double& v : scaled) v *= factor;
    const PhaseClassification a = classify_phases(values);
    const PhaseClassification b = classify_phases(scaled);
    t.check(a.labels == b.labels && a.degenerate == b.degenerate, c,
            [&] { return "labels changed under scaling by " + text(factor); });
  }
  return t.result();
}

const std::vector<Entry>& all() {
  static const std::vector<Entry> entries = {
      {"orientation_stays_unit", orientation_stays_unit},
      {"slew_is_monotone", slew_is_monotone},
      {"slew_is_planar_rotation", slew_is_planar_rotation},
      {"nomads_are_socially_blind", nomads_are_socially_blind},
      {"falloff_decreases_with_distance", falloff_decreases_with_distance},
      {"reflection_stays_inside", reflection_stays_inside},
      {"update_order_is_irrelevant", update_order_is_irrelevant},
      {"heatmap_counts_every_visit", heatmap_counts_every_visit},
      {"at_most_one_amplified", at_most_one_amplified},
      {"disabling_herding_restores", disabling_herding_restores},
      {"opposing_pick_is_anti_aligned", opposing_pick_is_anti_aligned},
      {"selection_is_deterministic", selection_is_deterministic},
      {"dtw_is_pseudo_metric", dtw_is_pseudo_metric},
      {"dtw_bounded_by_lock_step", dtw_bounded_by_lock_step},
      {"dtw_matches_path_enumeration", dtw_matches_path_enumeration},
      {"distance_matrix_is_symmetric", distance_matrix_is_symmetric},
      {"classification_ignores_scale", classification_ignores_scale},
  };
  return entries;
}

std::vector<Result> run_all(int cases, std::uint64_t seed) {
  std::vector<Result> out;
  std::uint64_t offset = 0;
  for (const auto& e : all()) out.push_back(e.run(cases, seed + 1000003 * ++offset));
  return out;
}

}  // namespace properties
