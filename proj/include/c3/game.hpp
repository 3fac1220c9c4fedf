#pragma once

#include <optional>
#include <vector>

#include "c3/mechanism.hpp"
#include "c3/types.hpp"

namespace c3 {

/// A content-creator competition instance: a discrete user population, one
/// action space and cost per creator, a matching score, attention weights of
/// length n, and (optionally, attached by the caller) the platform mechanism.
struct GameInstance {
  UserPopulation population;
  std::vector<ActionSpace> action_spaces;
  std::vector<CostSpec> costs;
  ScoreFunctionSpec score_fn;
  AttentionWeights attention;
  std::optional<MechanismSpec> mechanism;

  std::size_t creator_count() const { return action_spaces.size(); }
  std::size_t dim() const { return population.dim(); }
  const MechanismSpec& mech() const;

  void validate() const;
};

/// Resolves an action to its embedding (finite: indexed member; continuous:
/// the stored vector).
const Vec& action_vector(const GameInstance& g, std::size_t creator,
                         const Action& a);

void validate_profile(const GameInstance& g, const StrategyProfile& s);

/// Scores of every creator for one user embedding, ranked.
ScoreProfile score_profile(const StrategyProfile& s, const Vec& user,
                           const GameInstance& g);

double creator_cost(const GameInstance& g, std::size_t creator,
                    const Action& a);

/// Euclidean projection of a raw point into creator i's action space:
/// normalization for the sphere, nearest member (ties to the lowest index)
/// for finite sets.
Action project_action(const GameInstance& g, std::size_t creator,
                      const Vec& raw);

}  // namespace c3
