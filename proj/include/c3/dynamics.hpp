#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "c3/game.hpp"
#include "c3/rng.hpp"

namespace c3 {

struct DynamicsConfig {
  std::uint64_t horizon = 0;       // T
  double step = 0.1;               // eta
  std::uint64_t seed = 0;
  std::uint64_t record_every = 1;  // trajectory thinning
  /// Evaluate the acceptance test at the unprojected candidate s_i + eta*g
  /// (the literal pseudocode order) instead of at the projected point.
  bool literal_pseudocode_order = false;

  void validate() const;
};

struct TrajectoryPoint {
  std::uint64_t t = 0;
  StrategyProfile profile;
  double welfare = 0.0;
  std::optional<double> potential;  // backward mechanisms only
  std::vector<double> creator_utilities;
  std::uint64_t accepted_moves = 0;  // cumulative at time t
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::uint64_t accepted_moves = 0;

  /// Columns: t, welfare, potential, accepted, u_0..u_{n-1}. Potential is
  /// "nan" for mechanisms without one; accepted is the cumulative count.
  std::string to_csv() const;
};

struct DynamicsResult {
  StrategyProfile final_profile;
  Trajectory trajectory;
};

/// Better-response dynamics: per step draw a creator uniformly and a uniform
/// sphere direction (in that order, one stream), project the perturbed point
/// into the action space, and accept the move iff the creator's utility does
/// not drop. Rejected steps leave the profile bitwise unchanged. Snapshots
/// cover t = 0, every record_every-th step, and the final step.
DynamicsResult sim_stra(const GameInstance& g, StrategyProfile init,
                        const DynamicsConfig& cfg);

namespace detail {

/// One stream, `steps` iterations, no recording; advances `s` in place and
/// returns the number of accepted moves. Shared by sim_stra and the
/// mechanism optimizer (which threads its own stream through inner runs).
std::uint64_t sim_stra_steps(const GameInstance& g, StrategyProfile& s,
                             std::uint64_t steps, double eta, SplitMix64& rng,
                             bool literal_order);

}  // namespace detail

}  // namespace c3
