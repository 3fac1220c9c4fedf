#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c3/environments.hpp"
#include "c3/game.hpp"

namespace c3 {

struct OracleOptions {
  /// Deviations must improve utility by more than this to disqualify a PNE.
  double tolerance = 1e-12;
  /// Ceiling on profile-deviation checks (profiles x unilateral deviations).
  std::uint64_t budget = 10'000'000;
};

struct EquilibriumReport {
  std::vector<StrategyProfile> pnes;       // lexicographic profile order
  std::vector<double> ne_welfares;
  double max_welfare = 0.0;
  std::vector<StrategyProfile> argmax_profiles;
  double ratio = 0.0;  // min PNE welfare / max welfare; NaN without PNEs
};

/// Exhaustive pure-equilibrium search over finite action spaces: every
/// profile is checked against every unilateral deviation. Profiles enumerate
/// in lexicographic order (creator 0 most significant) and the result is
/// deterministic regardless of thread count.
EquilibriumReport enumerate_pne(const GameInstance& g,
                                const OracleOptions& opt = {});

struct TvnClosedForms {
  double ne_welfare = 0.0;
  double max_welfare = 0.0;
  double ratio = 0.0;
};

/// Closed-form equilibrium and optimum welfare for the basis-vector game
/// under a top-K attention scheme: the all-majority equilibrium earns
/// (n+1) sum_{i<=K} r_i / (2n), and the optimum maximizes
/// [(n+1) sum_{i<=q} r_i + (n-q) r_1] / (2n) over q in 1..K.
TvnClosedForms tvn_closed_forms(std::size_t n, const AttentionWeights& r);

struct Theorem1Report {
  bool pass = false;
  bool unique_pne = false;
  bool pne_is_all_majority = false;
  bool ne_welfare_match = false;
  bool max_welfare_match = false;
  bool ratio_below_one = false;
  double ne_welfare = 0.0;
  double max_welfare = 0.0;
  double ratio = 0.0;
  TvnClosedForms expected;
  std::string detail;
};

/// Checks that a merit-based monotone mechanism on the basis-vector game has
/// exactly one PNE (everyone on the majority vector) whose welfare and the
/// brute-force optimum both match the closed forms (1e-9), with ratio < 1.
/// The deviation tolerance is 1e-9 for softmax mechanisms, 1e-12 otherwise.
Theorem1Report verify_theorem1(std::size_t n, const AttentionWeights& r,
                               const MechanismSpec& mech,
                               std::uint64_t budget = 10'000'000);

struct Corollary1Report {
  bool pass = false;
  bool has_pne = false;
  bool all_pne_attain_max = false;
  std::size_t pne_count = 0;
  double max_welfare = 0.0;
  std::string detail;
};

/// Checks that under the constant backward rule f = r every PNE of the
/// basis-vector game attains the brute-force maximum welfare (1e-12).
Corollary1Report verify_corollary1(std::size_t n, const AttentionWeights& r,
                                   std::uint64_t budget = 10'000'000);

}  // namespace c3
