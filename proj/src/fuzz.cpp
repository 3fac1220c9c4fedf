#include "c3/fuzz.hpp"

#include <algorithm>
#include <stdexcept>

namespace c3::fuzz {
namespace {

std::vector<double> random_grid(SplitMix64& rng) {
  const std::size_t interior = rng.uniform_index(4);  // 0..3
  std::vector<double> b;
  b.reserve(interior + 2);
  b.push_back(0.0);
  for (std::size_t i = 0; i < interior; ++i) {
    const double x = 0.05 + 0.9 * rng.uniform();
    b.push_back(x);
  }
  b.push_back(1.0);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

}  // namespace

AttentionWeights random_attention(SplitMix64& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("random_attention: n == 0");
  std::vector<double> r(n);
  r[0] = 0.2 + 0.8 * rng.uniform();
  for (std::size_t i = 1; i < n; ++i) {
    const double roll = rng.uniform();
    if (roll < 0.25) {
      r[i] = r[i - 1];  // exact tie
    } else if (roll < 0.4) {
      for (std::size_t j = i; j < n; ++j) r[j] = 0.0;
      break;
    } else {
      r[i] = r[i - 1] * rng.uniform();
    }
  }
  return AttentionWeights::validated(std::move(r));
}

Vec random_descending_scores(SplitMix64& rng, std::size_t n) {
  Vec s(n);
  if (n == 0) return s;
  s[0] = rng.uniform();
  for (std::size_t i = 1; i < n; ++i) {
    const double roll = rng.uniform();
    if (roll < 0.2) {
      s[i] = s[i - 1];
    } else if (roll < 0.3) {
      for (std::size_t j = i; j < n; ++j) s[j] = 0.0;
      break;
    } else {
      s[i] = s[i - 1] * rng.uniform();
    }
  }
  return s;
}

MechanismSpec random_brcm_spec(SplitMix64& rng, std::size_t n) {
  std::vector<double> f(n);
  double cur = rng.uniform() < 0.1 ? 0.0 : 0.1 + 1.2 * rng.uniform();
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = cur;
    const double roll = rng.uniform();
    if (roll < 0.25) {
      // keep the tie
    } else if (roll < 0.35) {
      cur = 0.0;
    } else {
      cur *= rng.uniform();
    }
  }
  return MechanismSpec::brcm(std::move(f));
}

MechanismSpec random_backward_spec(SplitMix64& rng, std::size_t n) {
  if (rng.coin()) {
    // constant rules with f_1 = 0 live in the optimizer's polytope but are
    // not merit-based (a lone perfect score earns nothing); resample them
    MechanismSpec m = random_brcm_spec(rng, n);
    while (!(m.brcm_f[0] > 0.0)) m = random_brcm_spec(rng, n);
    return m;
  }
  const std::vector<double> grid = random_grid(rng);
  const std::size_t segs = grid.size() - 1;
  // Build from the bottom rank up so the pointwise ordering holds segment by
  // segment; the top function keeps a positive floor everywhere.
  std::vector<std::vector<double>> vals(n, std::vector<double>(segs));
  for (std::size_t seg = 0; seg < segs; ++seg) {
    double cur = 0.3 * rng.uniform();
    for (std::size_t i = n; i-- > 0;) {
      if (i + 1 < n) cur += (rng.uniform() < 0.3 ? 0.0 : 0.4 * rng.uniform());
      if (i == 0) cur += 0.05;
      vals[i][seg] = cur;
    }
  }
  std::vector<PiecewiseConstantFn> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i].breakpoints = grid;
    f[i].values = std::move(vals[i]);
  }
  return MechanismSpec::brm(std::move(f));
}

MechanismSpec random_mechanism(SplitMix64& rng, std::size_t n) {
  switch (rng.uniform_index(5)) {
    case 0:
      return MechanismSpec::m3_zero();
    case 1:
      return MechanismSpec::m3_exposure(1 + rng.uniform_index(n),
                                        0.01 + 0.2 * rng.uniform());
    case 2:
      return MechanismSpec::m3_engagement(1 + rng.uniform_index(n),
                                          0.01 + 0.2 * rng.uniform());
    case 3:
      return random_brcm_spec(rng, n);
    default:
      return random_backward_spec(rng, n);
  }
}

GameInstance random_finite_game(SplitMix64& rng, std::size_t max_creators,
                                std::size_t max_actions,
                                std::size_t max_users) {
  if (max_creators < 2 || max_actions < 1 || max_users < 1)
    throw std::invalid_argument("random_finite_game: degenerate bounds");
  const std::size_t n = 2 + rng.uniform_index(max_creators - 1);
  const std::size_t d = 2 + rng.uniform_index(3);
  const std::size_t m = 1 + rng.uniform_index(max_users);

  GameInstance g;
  std::vector<Vec> users(m);
  for (auto& x : users) x = rng.unit_vector(d);
  std::vector<int> labels;
  if (rng.coin()) {
    labels.resize(m);
    for (auto& gl : labels) gl = static_cast<int>(rng.uniform_index(2));
  }
  g.population = UserPopulation::uniform(std::move(users), std::move(labels));

  g.action_spaces.reserve(n);
  g.costs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec> members(1 + rng.uniform_index(max_actions));
    for (auto& v : members) v = rng.unit_vector(d);
    g.action_spaces.push_back(ActionSpace::finite_set(std::move(members)));
    if (rng.coin())
      g.costs.push_back(CostSpec::zero());
    else
      g.costs.push_back(
          CostSpec::quadratic(0.1 + 0.4 * rng.uniform(), rng.unit_vector(d)));
  }

  const double roll = rng.uniform();
  if (roll < 0.6)
    g.score_fn = ScoreFunctionSpec::shifted_inner_product();
  else if (roll < 0.8)
    g.score_fn = ScoreFunctionSpec::clipped_affine(0.2 + 0.6 * rng.uniform(),
                                                   rng.uniform());
  else
    g.score_fn = ScoreFunctionSpec::raw_inner_product();

  g.attention = random_attention(rng, n);
  return g;
}

StrategyProfile random_profile(SplitMix64& rng, const GameInstance& g) {
  StrategyProfile s;
  s.actions.reserve(g.creator_count());
  for (const ActionSpace& sp : g.action_spaces) {
    if (sp.kind == ActionSpaceKind::FiniteSet)
      s.actions.emplace_back(rng.uniform_index(sp.members.size()));
    else
      s.actions.emplace_back(rng.unit_vector(sp.dim));
  }
  return s;
}

}  // namespace c3::fuzz
