#include "c3/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "c3/mechanism.hpp"
#include "c3/welfare.hpp"

namespace c3::ref {
namespace {

double ranked_attention_sum(const ScoreProfile& sp,
                            const std::vector<double>& r) {
  double acc = 0.0;
  for (std::size_t p = 0; p < sp.size(); ++p)
    acc += r[p] * sp.scores[sp.order[p]];
  return acc;
}

double total_production_cost(const StrategyProfile& s, const GameInstance& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    acc += creator_cost(g, i, s.actions[i]);
  return acc;
}

}  // namespace

std::vector<double> expected_rewards(const StrategyProfile& s,
                                     const GameInstance& g) {
  const std::size_t n = g.creator_count();
  const std::size_t m = g.population.size();
  const MechanismSpec& mech = g.mech();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto rew = rewards(mech, score_profile(s, g.population.users[j], g));
    for (std::size_t i = 0; i < n; ++i)
      out[i] += g.population.weights[j] * rew[i];
  }
  return out;
}

double creator_utility(std::size_t creator, const StrategyProfile& s,
                       const GameInstance& g) {
  if (creator >= g.creator_count())
    throw std::invalid_argument("utility: creator index out of range");
  return ref::expected_rewards(s, g)[creator] -
         creator_cost(g, creator, s.actions[creator]);
}

double social_welfare_total(const StrategyProfile& s, const GameInstance& g) {
  const std::size_t m = g.population.size();
  double user_side = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    user_side +=
        g.population.weights[j] *
        ranked_attention_sum(score_profile(s, g.population.users[j], g),
                             g.attention.r);
  return user_side - total_production_cost(s, g);
}

double potential(const StrategyProfile& s, const GameInstance& g) {
  const MechanismSpec& mech = g.mech();
  if (!mech.is_backward())
    throw std::invalid_argument("potential: mechanism is not a backward rule");
  if (mech.fixed_creator_count() != g.creator_count())
    throw std::invalid_argument("potential: mechanism f length mismatch");
  const std::size_t m = g.population.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const ScoreProfile sp = score_profile(s, g.population.users[j], g);
    double term = 0.0;
    for (std::size_t p = 0; p < sp.size(); ++p) {
      double sc = sp.scores[sp.order[p]];
      if (mech.kind == MechanismKind::Brm)
        term += mech.brm_f[p].integral(0.0, sc);
      else
        term += mech.brcm_f[p] * sc;
    }
    acc += g.population.weights[j] * term;
  }
  return acc - total_production_cost(s, g);
}

EquilibriumReport enumerate_pne(const GameInstance& g,
                                const OracleOptions& opt) {
  g.validate();
  const MechanismSpec& mech = g.mech();
  const std::size_t n = g.creator_count();
  const std::size_t m = g.population.size();

  std::vector<std::size_t> sizes(n);
  std::vector<std::uint64_t> strides(n, 1);
  std::uint64_t total = 1;
  std::uint64_t deviations = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.action_spaces[i].kind != ActionSpaceKind::FiniteSet)
      throw std::invalid_argument(
          "enumerate_pne: creator " + std::to_string(i) +
          " has a continuous action space; exhaustive search needs finite "
          "sets");
    sizes[i] = g.action_spaces[i].members.size();
    if (sizes[i] == 0)
      throw std::invalid_argument("enumerate_pne: empty action set");
    deviations += sizes[i] - 1;
  }
  for (std::size_t i = n; i-- > 0;) {
    strides[i] = total;
    if (total > opt.budget / sizes[i])
      throw std::invalid_argument(
          "enumerate_pne: profile count alone exceeds the check budget");
    total *= sizes[i];
  }
  if (static_cast<unsigned __int128>(total) *
          std::max<std::uint64_t>(deviations, 1) >
      opt.budget)
    throw std::invalid_argument("enumerate_pne: check budget exceeded");

  std::vector<double> utilities(total * n);
  std::vector<double> welfares(total);
  std::vector<std::size_t> a(n);
  Vec scores(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    for (std::size_t i = 0; i < n; ++i) a[i] = (idx / strides[i]) % sizes[i];
    double* u = utilities.data() + idx * n;
    std::fill(u, u + n, 0.0);
    double user_side = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i)
        scores[i] = score(g.action_spaces[i].members[a[i]],
                          g.population.users[j], g.score_fn);
      const ScoreProfile sp = make_score_profile(scores);
      const Vec rew = rewards(mech, sp);
      const double wj = g.population.weights[j];
      for (std::size_t i = 0; i < n; ++i) u[i] += wj * rew[i];
      user_side += wj * user_welfare(sp, g.attention);
    }
    double total_cost = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      total_cost += g.costs[i](g.action_spaces[i].members[a[i]]);
    for (std::size_t i = 0; i < n; ++i)
      u[i] -= g.costs[i](g.action_spaces[i].members[a[i]]);
    welfares[idx] = user_side - total_cost;
  }

  EquilibriumReport rep;
  rep.max_welfare = -std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < total; ++idx)
    rep.max_welfare = std::max(rep.max_welfare, welfares[idx]);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    for (std::size_t i = 0; i < n; ++i) a[i] = (idx / strides[i]) % sizes[i];
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const std::uint64_t base = idx - a[i] * strides[i];
      for (std::size_t alt = 0; alt < sizes[i]; ++alt) {
        if (alt == a[i]) continue;
        if (utilities[(base + alt * strides[i]) * n + i] >
            utilities[idx * n + i] + opt.tolerance) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      StrategyProfile prof;
      prof.actions.resize(n);
      for (std::size_t i = 0; i < n; ++i) prof.actions[i] = a[i];
      rep.pnes.push_back(std::move(prof));
      rep.ne_welfares.push_back(welfares[idx]);
    }
    if (welfares[idx] == rep.max_welfare) {
      StrategyProfile prof;
      prof.actions.resize(n);
      for (std::size_t i = 0; i < n; ++i) prof.actions[i] = a[i];
      rep.argmax_profiles.push_back(std::move(prof));
    }
  }
  if (rep.ne_welfares.empty()) {
    rep.ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    rep.ratio =
        *std::min_element(rep.ne_welfares.begin(), rep.ne_welfares.end()) /
        rep.max_welfare;
  }
  return rep;
}

}  // namespace c3::ref
