#pragma once

#include <vector>

#include "c3/game.hpp"
#include "c3/oracle.hpp"

namespace c3::ref {

// Single-threaded reference kernels, written as plain loops with no thread
// toggles or precomputed tables. The parallel versions fix the same reduction
// order, so every function here must agree with its counterpart bitwise; the
// tests and the benchmark both lean on that.

std::vector<double> expected_rewards(const StrategyProfile& s,
                                     const GameInstance& g);

double creator_utility(std::size_t creator, const StrategyProfile& s,
                       const GameInstance& g);

double social_welfare_total(const StrategyProfile& s, const GameInstance& g);

double potential(const StrategyProfile& s, const GameInstance& g);

EquilibriumReport enumerate_pne(const GameInstance& g,
                                const OracleOptions& opt = {});

}  // namespace c3::ref
