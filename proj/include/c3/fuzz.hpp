#pragma once

#include "c3/game.hpp"
#include "c3/mechanism.hpp"
#include "c3/rng.hpp"

namespace c3::fuzz {

// Seeded generators for property tests. Everything is a pure function of the
// RNG state, so a failing seed reproduces exactly.

/// Nonincreasing weights in [0, 1] with r_1 > 0; occasional exact ties and
/// zeroed tails.
AttentionWeights random_attention(SplitMix64& rng, std::size_t n);

/// Scores in [0, 1] sorted descending; exact ties with probability ~0.2 per
/// step, occasionally an exactly-zero tail.
Vec random_descending_scores(SplitMix64& rng, std::size_t n);

/// Constant backward rule: nonincreasing f >= 0 (f_1 may be 0).
MechanismSpec random_brcm_spec(SplitMix64& rng, std::size_t n);

/// Backward rule with piecewise-constant rank functions on a shared random
/// grid, pointwise ordered with f_1 bounded away from 0; flips a coin between
/// the general form and a constant rule.
MechanismSpec random_backward_spec(SplitMix64& rng, std::size_t n);

/// Any of the five mechanism kinds, sized for n creators.
MechanismSpec random_mechanism(SplitMix64& rng, std::size_t n);

/// Small game with finite action sets (unit-vector members), random costs,
/// score function and attention. No mechanism attached.
GameInstance random_finite_game(SplitMix64& rng, std::size_t max_creators = 5,
                                std::size_t max_actions = 6,
                                std::size_t max_users = 8);

StrategyProfile random_profile(SplitMix64& rng, const GameInstance& g);

}  // namespace c3::fuzz
