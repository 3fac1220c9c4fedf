#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "c3/types.hpp"

namespace c3 {

/// Nonnegative step function on [0, 1]: breakpoints 0 = b_0 < ... < b_m = 1
/// with one value per interval [b_j, b_{j+1}).
struct PiecewiseConstantFn {
  std::vector<double> breakpoints;
  std::vector<double> values;

  static PiecewiseConstantFn constant(double v);

  double value_at(double t) const;
  /// Exact interval-overlap integral over [lo, hi]; returns exactly 0.0 when
  /// lo == hi so zero-width spans cannot perturb suffix sums.
  double integral(double lo, double hi) const;
  void validate() const;
};

enum class MechanismKind { M3Zero, M3Exposure, M3Engagement, Brm, Brcm };

/// Platform reward rule, evaluated pointwise per user on a ScoreProfile.
///
///   m3-zero        reward_i = sigma_i
///   m3-exposure    top-K softmax share of a unit budget (temperature beta)
///   m3-engagement  exposure share scaled by beta*log sum_{topK} exp(sigma/beta)
///   brm            backward rule: rank-k reward sums integral_{sigma_(j+1)}^{sigma_(j)} f_j
///                  over j >= k with sigma_(n+1) = 0; f_1 >= ... >= f_n >= 0
///                  pointwise and f_1 > 0 everywhere
///   brcm           brm with constant f_j, any point of {f_1 >= ... >= f_n >= 0}
struct MechanismSpec {
  MechanismKind kind = MechanismKind::M3Zero;
  std::size_t top_k = 1;  // exposure/engagement
  double beta = 0.05;     // exposure/engagement
  std::vector<PiecewiseConstantFn> brm_f;
  std::vector<double> brcm_f;

  static MechanismSpec m3_zero();
  static MechanismSpec m3_exposure(std::size_t k, double beta);
  static MechanismSpec m3_engagement(std::size_t k, double beta);
  static MechanismSpec brm(std::vector<PiecewiseConstantFn> f);
  static MechanismSpec brcm(std::vector<double> f);
  /// Construction without the f-ordering/positivity constraints, for checker
  /// tests that need a deliberately invalid rule.
  static MechanismSpec brm_unchecked(std::vector<PiecewiseConstantFn> f);
  static MechanismSpec brcm_unchecked(std::vector<double> f);

  bool is_backward() const {
    return kind == MechanismKind::Brm || kind == MechanismKind::Brcm;
  }
  bool is_softmax() const {
    return kind == MechanismKind::M3Exposure ||
           kind == MechanismKind::M3Engagement;
  }
  /// Creator count fixed by the parameters (brm/brcm), or 0 when the rule
  /// applies to any profile size.
  std::size_t fixed_creator_count() const;
  std::string name() const;
};

/// The Shapley mediator: the backward rule with f = (1, 1/2, ..., 1/n).
MechanismSpec shapley_mediator(std::size_t n);

/// Per-creator rewards for one user's ScoreProfile. Creators in a tie group
/// all receive the arithmetic mean of the rank-position rewards the group
/// spans (the expected reward under a uniformly random ordering of the tie).
std::vector<double> rewards(const MechanismSpec& spec, const ScoreProfile& sp);

struct Counterexample {
  std::vector<double> scores_before;
  std::vector<double> scores_after;  // empty for single-profile violations
  std::size_t creator = 0;
  double value_before = 0.0;
  double value_after = 0.0;
  std::string detail;
};

struct CheckResult {
  bool pass = true;
  std::optional<Counterexample> counterexample;
};

struct MeritReport {
  CheckResult normality;
  CheckResult fairness;
  CheckResult negative_externality;
  bool pass() const {
    return normality.pass && fairness.pass && negative_externality.pass;
  }
};

/// Randomized audit of the three merit-based properties on descending score
/// sequences: normality (zero score earns zero, a lone perfect score earns a
/// positive reward), fairness (rewards nonincreasing down the ranking), and
/// negative externality (a competitor raising its score never raises yours;
/// probed by same-order raises and order-crossing raises).
MeritReport check_merit_based(const MechanismSpec& spec, std::size_t samples,
                              std::uint64_t seed);

/// Randomized audit of total-reward monotonicity under single-coordinate
/// score increases. Deterministic canary probes (a lone leader joined by an
/// equal rival) run before the random samples so known counterexamples are
/// reported in canonical form.
CheckResult check_monotone(const MechanismSpec& spec, std::size_t samples,
                           std::uint64_t seed);

}  // namespace c3
