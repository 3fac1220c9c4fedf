#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c3/dynamics.hpp"
#include "c3/game.hpp"

namespace c3 {

struct OptimizerConfig {
  std::uint64_t epochs = 0;       // L1
  std::uint64_t inner_steps = 0;  // L2 dynamics steps per epoch
  double mechanism_step = 0.1;    // eta_1, coordinate perturbation of f
  double creator_step = 0.1;      // eta_2, inner dynamics step
  std::uint64_t seed = 0;
  std::vector<double> initial_f;  // feasible: nonincreasing, nonnegative

  void validate() const;
};

struct EpochRecord {
  std::uint64_t epoch = 0;
  std::size_t coordinate = 0;
  int sign = 1;
  bool accepted = false;
  double welfare = 0.0;     // W(s) at the epoch boundary
  std::vector<double> f;    // mechanism vector in force after the decision
};

struct OptimizeResult {
  std::vector<double> best_f;  // vector in force when best_welfare was seen
  double best_welfare = 0.0;
  std::vector<double> final_f;
  StrategyProfile final_profile;
  std::vector<EpochRecord> log;

  /// Columns: epoch, coordinate, sign, accepted, welfare, f_0..f_{n-1}.
  std::string log_to_csv() const;
};

/// Exact Euclidean projection onto {f_1 >= f_2 >= ... >= f_n >= 0}:
/// nonincreasing isotonic regression (pool adjacent violators), then
/// truncation at zero. Output feasibility holds exactly.
std::vector<double> project_to_polytope(std::vector<double> f);

/// Coordinate-search over constant backward rules. Each epoch perturbs one
/// coordinate of f by +-eta_1, projects, runs L2 better-response steps under
/// the perturbed rule (the profile always advances), and keeps the new f only
/// if realized welfare strictly increased. One stream drives the epoch draws
/// and the inner dynamics, in program order.
OptimizeResult optimize_brcm(const GameInstance& g, StrategyProfile init,
                             const OptimizerConfig& cfg);

}  // namespace c3
