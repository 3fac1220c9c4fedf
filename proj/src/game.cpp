#include "c3/game.hpp"

#include <cmath>
#include <stdexcept>

namespace c3 {

const MechanismSpec& GameInstance::mech() const {
  if (!mechanism)
    throw std::logic_error("game: no mechanism attached");
  return *mechanism;
}

void GameInstance::validate() const {
  population.validate();
  std::size_t n = action_spaces.size();
  if (n == 0) throw std::invalid_argument("game: no creators");
  std::size_t d = population.dim();
  for (const ActionSpace& sp : action_spaces) {
    sp.validate();
    if (sp.dimension() != d)
      throw std::invalid_argument("game: action space dimension mismatch");
  }
  if (costs.size() != n)
    throw std::invalid_argument("game: cost count mismatch");
  for (const CostSpec& c : costs) c.validate(d);
  if (attention.size() != n)
    throw std::invalid_argument("game: attention weights must have length n");
  if (mechanism) {
    std::size_t fixed = mechanism->fixed_creator_count();
    if (fixed > 0 && fixed != n)
      throw std::invalid_argument("game: mechanism f length mismatch");
    if (mechanism->is_softmax() && mechanism->top_k > n)
      throw std::invalid_argument("game: mechanism top_k exceeds n");
  }
}

const Vec& action_vector(const GameInstance& g, std::size_t creator,
                         const Action& a) {
  const ActionSpace& sp = g.action_spaces.at(creator);
  if (const auto* idx = std::get_if<std::size_t>(&a)) {
    if (sp.kind != ActionSpaceKind::FiniteSet)
      throw std::invalid_argument("action: index into a continuous space");
    if (*idx >= sp.members.size())
      throw std::invalid_argument("action: index out of range");
    return sp.members[*idx];
  }
  const Vec& v = std::get<Vec>(a);
  if (sp.kind != ActionSpaceKind::ContinuousUnitSphere)
    throw std::invalid_argument("action: raw vector in a finite space");
  if (v.size() != sp.dimension())
    throw std::invalid_argument("action: dimension mismatch");
  return v;
}

void validate_profile(const GameInstance& g, const StrategyProfile& s) {
  if (s.size() != g.creator_count())
    throw std::invalid_argument("profile: creator count mismatch");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec& v = action_vector(g, i, s.actions[i]);
    if (g.action_spaces[i].kind == ActionSpaceKind::ContinuousUnitSphere) {
      double nrm = norm(v);
      if (std::abs(nrm - 1.0) > 1e-9)
        throw std::invalid_argument("profile: sphere action must be unit norm");
    }
  }
}

ScoreProfile score_profile(const StrategyProfile& s, const Vec& user,
                           const GameInstance& g) {
  std::size_t n = g.creator_count();
  if (s.size() != n)
    throw std::invalid_argument("score profile: creator count mismatch");
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i)
    scores[i] = score(action_vector(g, i, s.actions[i]), user, g.score_fn);
  return make_score_profile(std::move(scores));
}

double creator_cost(const GameInstance& g, std::size_t creator,
                    const Action& a) {
  return g.costs.at(creator)(action_vector(g, creator, a));
}

Action project_action(const GameInstance& g, std::size_t creator,
                      const Vec& raw) {
  const ActionSpace& sp = g.action_spaces.at(creator);
  if (raw.size() != sp.dimension())
    throw std::invalid_argument("projection: dimension mismatch");
  if (sp.kind == ActionSpaceKind::ContinuousUnitSphere)
    return Action{normalized(raw)};
  std::size_t best = 0;
  double best_d2 = squared_distance(raw, sp.members[0]);
  for (std::size_t j = 1; j < sp.members.size(); ++j) {
    double d2 = squared_distance(raw, sp.members[j]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return Action{best};
}

}  // namespace c3
