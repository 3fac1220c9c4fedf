#include "c3/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "c3/csv.hpp"
#include "c3/welfare.hpp"

namespace c3 {

void DynamicsConfig::validate() const {
  if (!(step >= 0.0) || !std::isfinite(step))
    throw std::invalid_argument("dynamics: step must be finite and >= 0");
  if (record_every == 0)
    throw std::invalid_argument("dynamics: record_every must be >= 1");
}

namespace detail {

std::uint64_t sim_stra_steps(const GameInstance& g, StrategyProfile& s,
                             std::uint64_t steps, double eta, SplitMix64& rng,
                             bool literal_order) {
  const std::size_t n = g.creator_count();
  const std::size_t d = g.dim();
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 0; t < steps; ++t) {
    std::size_t i = rng.uniform_index(n);
    Vec dir = rng.unit_vector(d);
    const Vec& cur = action_vector(g, i, s.actions[i]);
    Vec raw(d);
    for (std::size_t k = 0; k < d; ++k) raw[k] = cur[k] + eta * dir[k];

    double u_cur = creator_utility(i, s, g);
    Action candidate = project_action(g, i, raw);
    double u_cand =
        literal_order ? creator_utility_at(i, raw, s, g)
                      : creator_utility_at(i, action_vector(g, i, candidate), s, g);
    if (u_cand >= u_cur) {
      s.actions[i] = std::move(candidate);
      ++accepted;
    }
  }
  return accepted;
}

}  // namespace detail

namespace {

TrajectoryPoint snapshot(std::uint64_t t, const StrategyProfile& s,
                         const GameInstance& g, std::uint64_t accepted) {
  TrajectoryPoint p;
  p.t = t;
  p.profile = s;
  p.welfare = social_welfare_total(s, g);
  if (g.mech().is_backward()) p.potential = potential(s, g);
  auto rew = expected_rewards(s, g);
  p.creator_utilities.resize(rew.size());
  for (std::size_t i = 0; i < rew.size(); ++i)
    p.creator_utilities[i] = rew[i] - creator_cost(g, i, s.actions[i]);
  p.accepted_moves = accepted;
  return p;
}

}  // namespace

DynamicsResult sim_stra(const GameInstance& g, StrategyProfile init,
                        const DynamicsConfig& cfg) {
  cfg.validate();
  g.validate();
  validate_profile(g, init);
  g.mech();  // required

  DynamicsResult res;
  res.trajectory.points.push_back(snapshot(0, init, g, 0));

  SplitMix64 rng(cfg.seed);
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
    accepted += detail::sim_stra_steps(g, init, 1, cfg.step, rng,
                                       cfg.literal_pseudocode_order);
    if (t % cfg.record_every == 0 || t == cfg.horizon)
      res.trajectory.points.push_back(snapshot(t, init, g, accepted));
  }
  res.trajectory.accepted_moves = accepted;
  res.final_profile = std::move(init);
  return res;
}

std::string Trajectory::to_csv() const {
  std::string out;
  std::size_t n = points.empty() ? 0 : points.front().creator_utilities.size();
  std::vector<std::string> header = {"t", "welfare", "potential", "accepted"};
  for (std::size_t i = 0; i < n; ++i) header.push_back("u_" + std::to_string(i));
  out += csv::join_row(header);
  for (const TrajectoryPoint& p : points) {
    std::vector<std::string> row = {
        std::to_string(p.t), csv::fmt(p.welfare),
        p.potential ? csv::fmt(*p.potential) : "nan",
        std::to_string(p.accepted_moves)};
    for (double u : p.creator_utilities) row.push_back(csv::fmt(u));
    out += csv::join_row(row);
  }
  return out;
}

}  // namespace c3
