#include <doctest.h>

#include <stdexcept>
#include <variant>

#include "c3/game.hpp"
#include "c3/mechanism.hpp"

using namespace c3;

namespace {

GameInstance two_creator_game() {
  GameInstance g;
  g.population = UserPopulation::uniform({{1.0, 0.0}, {0.0, 1.0}});
  g.action_spaces.assign(2, ActionSpace::continuous_sphere(2));
  g.costs.assign(2, CostSpec::zero());
  g.score_fn = ScoreFunctionSpec::shifted_inner_product();
  g.attention = AttentionWeights::validated({1.0, 0.5});
  return g;
}

}  // namespace

TEST_SUITE("game") {

TEST_CASE("projection into action spaces") {
  auto g = two_creator_game();

  SUBCASE("sphere projection normalizes") {
    Action a = project_action(g, 0, {3.0, 4.0});
    REQUIRE(std::holds_alternative<Vec>(a));
    CHECK(std::get<Vec>(a) == Vec{0.6, 0.8});
  }

  SUBCASE("finite projection snaps to the nearest member") {
    g.action_spaces[0] =
        ActionSpace::finite_set({{1.0, 0.0}, {0.0, 1.0}});
    Action a = project_action(g, 0, {0.2, 0.9});
    REQUIRE(std::holds_alternative<std::size_t>(a));
    CHECK(std::get<std::size_t>(a) == 1);
    // equidistant raw point resolves to the lowest index
    Action tie = project_action(g, 0, {0.5, 0.5});
    CHECK(std::get<std::size_t>(tie) == 0);
  }
}

TEST_CASE("action resolution and profile validation") {
  auto g = two_creator_game();

  SUBCASE("continuous actions pass through") {
    Action a = Vec{0.0, 1.0};
    CHECK(action_vector(g, 0, a) == Vec{0.0, 1.0});
    // an index action is meaningless on the sphere
    CHECK_THROWS_AS(action_vector(g, 0, Action{std::size_t{0}}),
                    std::invalid_argument);
  }

  SUBCASE("finite actions index the member list") {
    g.action_spaces[1] = ActionSpace::finite_set({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(action_vector(g, 1, Action{std::size_t{1}}) == Vec{0.0, 1.0});
    CHECK_THROWS_AS(action_vector(g, 1, Action{std::size_t{2}}),
                    std::invalid_argument);
  }

  SUBCASE("profile validation") {
    StrategyProfile s;
    s.actions = {Action{Vec{1.0, 0.0}}, Action{Vec{0.0, 1.0}}};
    CHECK_NOTHROW(validate_profile(g, s));
    s.actions[0] = Vec{2.0, 0.0};  // not on the unit sphere
    CHECK_THROWS_AS(validate_profile(g, s), std::invalid_argument);
    s.actions = {Action{Vec{1.0, 0.0}}};
    CHECK_THROWS_AS(validate_profile(g, s), std::invalid_argument);
  }
}

TEST_CASE("per-user score profile") {
  auto g = two_creator_game();
  StrategyProfile s;
  s.actions = {Action{Vec{1.0, 0.0}}, Action{Vec{0.0, 1.0}}};

  auto sp = score_profile(s, g.population.users[0], g);
  CHECK(sp.scores == std::vector<double>{1.0, 0.5});
  CHECK(sp.order == std::vector<std::size_t>{0, 1});

  auto sp2 = score_profile(s, g.population.users[1], g);
  CHECK(sp2.scores == std::vector<double>{0.5, 1.0});
  CHECK(sp2.order == std::vector<std::size_t>{1, 0});
}

TEST_CASE("quadratic production cost") {
  auto g = two_creator_game();
  g.costs[0] = CostSpec::quadratic(0.5, {1.0, 0.0});
  CHECK(creator_cost(g, 0, Action{Vec{1.0, 0.0}}) == 0.0);
  CHECK(creator_cost(g, 0, Action{Vec{0.0, 1.0}}) == 1.0);  // 0.5 * 2
  CHECK(creator_cost(g, 1, Action{Vec{0.0, 1.0}}) == 0.0);
}

TEST_CASE("game instance validation") {
  auto g = two_creator_game();
  CHECK_NOTHROW(g.validate());

  SUBCASE("attention length must equal creator count") {
    g.attention = AttentionWeights::validated({1.0});
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("backward mechanism length must match") {
    g.mechanism = MechanismSpec::brcm({1.0, 0.5, 0.25});
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.mechanism = MechanismSpec::brcm({1.0, 0.5});
    CHECK_NOTHROW(g.validate());
  }
  SUBCASE("cost center dimension must match") {
    g.costs[1] = CostSpec::quadratic(1.0, {1.0, 0.0, 0.0});
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("mech() requires an attached mechanism") {
    CHECK_THROWS_AS(g.mech(), std::logic_error);
    g.mechanism = MechanismSpec::m3_zero();
    CHECK(g.mech().kind == MechanismKind::M3Zero);
  }
}

}  // TEST_SUITE("game")
