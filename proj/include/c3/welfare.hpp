#pragma once

#include <map>
#include <string>
#include <vector>

#include "c3/game.hpp"

namespace c3 {

/// Full welfare accounting for one profile. `total_welfare` is the weighted
/// mean user welfare minus total production cost; mechanism transfers cancel
/// and never enter it.
struct WelfareReport {
  double total_welfare = 0.0;
  double user_side = 0.0;
  double total_cost = 0.0;
  std::vector<double> per_creator_utility;
  std::map<int, double> per_group_mean_user_utility;

  static std::string csv_header(std::size_t creators,
                                const std::vector<int>& groups);
  std::string csv_row() const;
};

/// One user's welfare: sum_k r_k * sigma_(k) down the descending ranking.
double user_welfare(const StrategyProfile& s, const Vec& user,
                    const GameInstance& g);

/// Same, from an already-ranked score profile.
double user_welfare(const ScoreProfile& sp, const AttentionWeights& r);

/// Expected mechanism reward per creator, E_x[M_i]. Per-user terms may be
/// computed in parallel; the reduction always runs in user-index order, so
/// results are bitwise identical to the serial reference.
std::vector<double> expected_rewards(const StrategyProfile& s,
                                     const GameInstance& g);

/// u_i(s) = E_x[M_i] - c_i(s_i).
double creator_utility(std::size_t creator, const StrategyProfile& s,
                       const GameInstance& g);

/// u_i when creator i publishes the embedding `vec` (not necessarily a member
/// of its action space) while everyone else keeps s. The better-response
/// dynamics use this to evaluate candidates on either side of projection.
double creator_utility_at(std::size_t creator, const Vec& vec,
                          const StrategyProfile& s, const GameInstance& g);

/// Mechanism-independent total welfare (weighted mean user welfare minus
/// total cost). Does not require an attached mechanism.
double social_welfare_total(const StrategyProfile& s, const GameInstance& g);

/// Full report: totals, per-creator utilities (requires a mechanism), and
/// weighted mean user welfare per population group.
WelfareReport social_welfare(const StrategyProfile& s, const GameInstance& g);

/// Exact potential of a backward mechanism:
///   P(s) = E_x[ sum_i integral_0^{sigma_(i)} f_i ] - sum_i c_i(s_i).
/// Unilateral utility changes equal potential changes exactly; with f equal
/// to the attention weights the potential coincides with social welfare.
double potential(const StrategyProfile& s, const GameInstance& g);

}  // namespace c3
