#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <variant>

#include "c3/fuzz.hpp"
#include "c3/oracle.hpp"
#include "c3/reference.hpp"
#include "c3/welfare.hpp"

using namespace c3;

namespace {

std::vector<std::size_t> indices(const StrategyProfile& s) {
  std::vector<std::size_t> out;
  for (const Action& a : s.actions) out.push_back(std::get<std::size_t>(a));
  return out;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("closed forms for the basis-vector game") {
  SUBCASE("winner-takes-all, n=2") {
    auto cf = tvn_closed_forms(2, AttentionWeights::validated({1.0, 0.0}));
    CHECK(cf.ne_welfare == 0.75);
    CHECK(cf.max_welfare == 1.0);
    CHECK(cf.ratio == 0.75);
  }
  SUBCASE("two attention slots, n=3") {
    auto cf =
        tvn_closed_forms(3, AttentionWeights::validated({1.0, 1.0, 0.0}));
    CHECK(cf.ne_welfare == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(cf.max_welfare == 1.5);
    CHECK(cf.ratio == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  }
  SUBCASE("single slot, n=3: pooling wastes a third of the attention") {
    auto cf =
        tvn_closed_forms(3, AttentionWeights::validated({1.0, 0.0, 0.0}));
    CHECK(cf.ne_welfare == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(cf.max_welfare == 1.0);
    CHECK(cf.ratio == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("rejects degenerate attention") {
    CHECK_THROWS_AS(tvn_closed_forms(3, AttentionWeights::validated({1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        tvn_closed_forms(2, AttentionWeights{{0.0, 0.0}}),
        std::invalid_argument);
  }
}

TEST_CASE("exhaustive equilibrium search on the winner-collapse game") {
  auto g = make_tvn(2, AttentionWeights::validated({1.0, 0.0}));
  g.mechanism = MechanismSpec::brcm({1.0, 0.0});
  auto rep = enumerate_pne(g);

  // pooling is ruled out (ties pay zero, a niche deviation pays 1/4), so the
  // only equilibria are the two splits, both welfare-optimal
  REQUIRE(rep.pnes.size() == 2);
  CHECK(indices(rep.pnes[0]) == std::vector<std::size_t>{0, 1});
  CHECK(indices(rep.pnes[1]) == std::vector<std::size_t>{1, 0});
  CHECK(rep.ne_welfares == std::vector<double>{1.0, 1.0});
  CHECK(rep.max_welfare == 1.0);
  REQUIRE(rep.argmax_profiles.size() == 2);
  CHECK(indices(rep.argmax_profiles[0]) == std::vector<std::size_t>{0, 1});
  CHECK(rep.ratio == 1.0);
}

TEST_CASE("equilibrium search edge cases") {
  auto g = make_tvn(3, AttentionWeights::dcg(3, 2));
  g.mechanism = shapley_mediator(3);

  SUBCASE("budget ceiling") {
    OracleOptions opt;
    opt.budget = 10;  // 27 profiles x 6 deviations >> 10
    CHECK_THROWS_AS(enumerate_pne(g, opt), std::invalid_argument);
  }
  SUBCASE("continuous spaces cannot be enumerated") {
    GameInstance cont = g;
    cont.action_spaces.assign(3, ActionSpace::continuous_sphere(3));
    CHECK_THROWS_AS(enumerate_pne(cont), std::invalid_argument);
  }
  SUBCASE("a game without equilibria reports an undefined ratio") {
    // rock-paper-scissors via a Condorcet cycle: three users whose
    // preferences over three items cycle, two creators, winner-take-all
    // exposure. Whatever the loser plays, switching to the item that beats
    // the winner raises its payoff from 1/3 to 2/3, so no profile is stable.
    GameInstance rps;
    rps.population = UserPopulation::uniform({normalized({3.0, 2.0, 1.0}),
                                              normalized({1.0, 3.0, 2.0}),
                                              normalized({2.0, 1.0, 3.0})});
    auto items = ActionSpace::finite_set(
        {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    rps.action_spaces.assign(2, items);
    rps.costs.assign(2, CostSpec::zero());
    rps.score_fn = ScoreFunctionSpec::shifted_inner_product();
    rps.attention = AttentionWeights::validated({1.0, 0.0});
    rps.mechanism = MechanismSpec::m3_exposure(1, 0.05);
    auto rep2 = enumerate_pne(rps);
    CHECK(rep2.pnes.empty());
    CHECK(rep2.ne_welfares.empty());
    CHECK(std::isnan(rep2.ratio));
    CHECK_FALSE(rep2.argmax_profiles.empty());
  }
}

TEST_CASE("parallel search matches the serial reference bitwise") {
  SplitMix64 rng(401);
  for (int it = 0; it < 12; ++it) {
    auto g = fuzz::random_finite_game(rng, 4, 4, 6);
    g.mechanism = fuzz::random_mechanism(rng, g.creator_count());
    auto a = enumerate_pne(g);
    auto b = ref::enumerate_pne(g);
    REQUIRE(a.pnes.size() == b.pnes.size());
    for (std::size_t p = 0; p < a.pnes.size(); ++p)
      CHECK(indices(a.pnes[p]) == indices(b.pnes[p]));
    CHECK(a.ne_welfares == b.ne_welfares);
    CHECK(a.max_welfare == b.max_welfare);
    if (a.pnes.empty()) {
      CHECK(std::isnan(a.ratio));
      CHECK(std::isnan(b.ratio));
    } else {
      CHECK(a.ratio == b.ratio);
    }
  }
}

TEST_CASE("every equilibrium utility is deviation-proof") {
  // cross-check the oracle's PNE set against direct utility comparisons
  SplitMix64 rng(409);
  for (int it = 0; it < 6; ++it) {
    auto g = fuzz::random_finite_game(rng, 3, 3, 5);
    g.mechanism = fuzz::random_mechanism(rng, g.creator_count());
    auto rep = enumerate_pne(g);
    for (const auto& pne : rep.pnes) {
      for (std::size_t i = 0; i < g.creator_count(); ++i) {
        double base = creator_utility(i, pne, g);
        for (std::size_t alt = 0;
             alt < g.action_spaces[i].members.size(); ++alt) {
          auto dev = pne;
          dev.actions[i] = Action{alt};
          CHECK(creator_utility(i, dev, g) <= base + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("equilibrium-structure verification on merit-based monotone mechanisms") {
  auto r = AttentionWeights::validated({1.0, 0.5, 0.0});

  SUBCASE("m3-zero") {
    auto rep = verify_theorem1(3, r, MechanismSpec::m3_zero());
    CHECK(rep.pass);
    CHECK(rep.unique_pne);
    CHECK(rep.pne_is_all_majority);
    CHECK(rep.ne_welfare == doctest::Approx(rep.expected.ne_welfare)
                                .epsilon(1e-9));
    CHECK(rep.ratio < 1.0);
  }
  SUBCASE("softmax mechanisms") {
    CHECK(verify_theorem1(3, r, MechanismSpec::m3_exposure(2, 0.05)).pass);
    CHECK(verify_theorem1(3, r, MechanismSpec::m3_engagement(2, 0.05)).pass);
  }
  SUBCASE("the winner-collapse rule is not monotone and fails uniqueness") {
    auto rep = verify_theorem1(
        2, AttentionWeights::validated({1.0, 0.0}),
        MechanismSpec::brcm({1.0, 0.0}));
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.pne_is_all_majority);
  }
}

TEST_CASE("matching f to attention makes every equilibrium optimal") {
  auto rep =
      verify_corollary1(3, AttentionWeights::validated({1.0, 0.5, 0.0}));
  CHECK(rep.pass);
  CHECK(rep.has_pne);
  CHECK(rep.all_pne_attain_max);

  auto rep2 = verify_corollary1(4, AttentionWeights::dcg(4, 2));
  CHECK(rep2.pass);
}

}  // TEST_SUITE("oracle")
