#include "c3/welfare.hpp"

#include <cstdint>
#include <stdexcept>

#include "c3/csv.hpp"

namespace c3 {

namespace {

// Below this population size the per-user loops run serially; the reduction
// order is fixed either way, so the toggle never changes results.
constexpr std::size_t kParallelUsers = 512;

double ranked_attention_sum(const ScoreProfile& sp,
                            const std::vector<double>& r) {
  double acc = 0.0;
  for (std::size_t p = 0; p < sp.size(); ++p)
    acc += r[p] * sp.scores[sp.order[p]];
  return acc;
}

double backward_user_term(const ScoreProfile& sp, const MechanismSpec& mech) {
  double acc = 0.0;
  for (std::size_t p = 0; p < sp.size(); ++p) {
    double s = sp.scores[sp.order[p]];
    if (mech.kind == MechanismKind::Brm)
      acc += mech.brm_f[p].integral(0.0, s);
    else
      acc += mech.brcm_f[p] * s;
  }
  return acc;
}

double total_production_cost(const StrategyProfile& s, const GameInstance& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    acc += creator_cost(g, i, s.actions[i]);
  return acc;
}

}  // namespace

double user_welfare(const StrategyProfile& s, const Vec& user,
                    const GameInstance& g) {
  return ranked_attention_sum(score_profile(s, user, g), g.attention.r);
}

double user_welfare(const ScoreProfile& sp, const AttentionWeights& r) {
  return ranked_attention_sum(sp, r.r);
}

std::vector<double> expected_rewards(const StrategyProfile& s,
                                     const GameInstance& g) {
  const std::size_t n = g.creator_count();
  const std::size_t m = g.population.size();
  const MechanismSpec& mech = g.mech();
  std::vector<double> buf(m * n);
#pragma omp parallel for schedule(static) if (m >= kParallelUsers)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(m); ++j) {
    auto rew = rewards(mech, score_profile(s, g.population.users[j], g));
    std::copy(rew.begin(), rew.end(), buf.begin() + j * n);
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i)
      out[i] += g.population.weights[j] * buf[j * n + i];
  return out;
}

double creator_utility(std::size_t creator, const StrategyProfile& s,
                       const GameInstance& g) {
  if (creator >= g.creator_count())
    throw std::invalid_argument("utility: creator index out of range");
  return expected_rewards(s, g)[creator] -
         creator_cost(g, creator, s.actions[creator]);
}

double creator_utility_at(std::size_t creator, const Vec& vec,
                          const StrategyProfile& s, const GameInstance& g) {
  const std::size_t n = g.creator_count();
  const std::size_t m = g.population.size();
  if (creator >= n)
    throw std::invalid_argument("utility: creator index out of range");
  if (vec.size() != g.dim())
    throw std::invalid_argument("utility: embedding dimension mismatch");
  const MechanismSpec& mech = g.mech();
  std::vector<double> terms(m);
#pragma omp parallel for schedule(static) if (m >= kParallelUsers)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(m); ++j) {
    const Vec& x = g.population.users[j];
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i)
      scores[i] = score(i == creator ? vec : action_vector(g, i, s.actions[i]),
                        x, g.score_fn);
    terms[j] = rewards(mech, make_score_profile(std::move(scores)))[creator];
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    acc += g.population.weights[j] * terms[j];
  return acc - g.costs.at(creator)(vec);
}

double social_welfare_total(const StrategyProfile& s, const GameInstance& g) {
  const std::size_t m = g.population.size();
  std::vector<double> terms(m);
#pragma omp parallel for schedule(static) if (m >= kParallelUsers)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(m); ++j)
    terms[j] = user_welfare(s, g.population.users[j], g);
  double user_side = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    user_side += g.population.weights[j] * terms[j];
  return user_side - total_production_cost(s, g);
}

WelfareReport social_welfare(const StrategyProfile& s, const GameInstance& g) {
  const std::size_t n = g.creator_count();
  const std::size_t m = g.population.size();
  const MechanismSpec& mech = g.mech();

  std::vector<double> uw(m);
  std::vector<double> rew_buf(m * n);
#pragma omp parallel for schedule(static) if (m >= kParallelUsers)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(m); ++j) {
    ScoreProfile sp = score_profile(s, g.population.users[j], g);
    uw[j] = ranked_attention_sum(sp, g.attention.r);
    auto rew = rewards(mech, sp);
    std::copy(rew.begin(), rew.end(), rew_buf.begin() + j * n);
  }

  WelfareReport rep;
  std::vector<double> exp_rew(n, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    rep.user_side += g.population.weights[j] * uw[j];
    for (std::size_t i = 0; i < n; ++i)
      exp_rew[i] += g.population.weights[j] * rew_buf[j * n + i];
  }
  rep.per_creator_utility.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ci = creator_cost(g, i, s.actions[i]);
    rep.per_creator_utility[i] = exp_rew[i] - ci;
    rep.total_cost += ci;
  }
  rep.total_welfare = rep.user_side - rep.total_cost;

  if (!g.population.group_labels.empty()) {
    std::map<int, double> wsum, vsum;
    for (std::size_t j = 0; j < m; ++j) {
      int gl = g.population.group_labels[j];
      wsum[gl] += g.population.weights[j];
      vsum[gl] += g.population.weights[j] * uw[j];
    }
    for (const auto& [gl, w] : wsum)
      rep.per_group_mean_user_utility[gl] = w > 0.0 ? vsum[gl] / w : 0.0;
  }
  return rep;
}

double potential(const StrategyProfile& s, const GameInstance& g) {
  const MechanismSpec& mech = g.mech();
  if (!mech.is_backward())
    throw std::invalid_argument("potential: mechanism is not a backward rule");
  if (mech.fixed_creator_count() != g.creator_count())
    throw std::invalid_argument("potential: mechanism f length mismatch");
  const std::size_t m = g.population.size();
  std::vector<double> terms(m);
#pragma omp parallel for schedule(static) if (m >= kParallelUsers)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(m); ++j)
    terms[j] =
        backward_user_term(score_profile(s, g.population.users[j], g), mech);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    acc += g.population.weights[j] * terms[j];
  return acc - total_production_cost(s, g);
}

std::string WelfareReport::csv_header(std::size_t creators,
                                      const std::vector<int>& groups) {
  std::vector<std::string> h = {"total_welfare", "user_side", "total_cost"};
  for (std::size_t i = 0; i < creators; ++i)
    h.push_back("u_" + std::to_string(i));
  for (int gl : groups) h.push_back("group_" + std::to_string(gl));
  std::string out = csv::join_row(h);
  out.pop_back();
  return out;
}

std::string WelfareReport::csv_row() const {
  std::vector<std::string> f = {csv::fmt(total_welfare), csv::fmt(user_side),
                                csv::fmt(total_cost)};
  for (double u : per_creator_utility) f.push_back(csv::fmt(u));
  for (const auto& [gl, v] : per_group_mean_user_utility)
    f.push_back(csv::fmt(v));
  std::string out = csv::join_row(f);
  out.pop_back();
  return out;
}

}  // namespace c3
