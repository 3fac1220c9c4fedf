#include <doctest.h>

#include <stdexcept>
#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "c3/csv.hpp"
#include "c3/environments.hpp"

using namespace c3;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("c3test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    std::string p = (path / name).string();
    csv::write_file_atomic(p, content);
    return p;
  }
};

}  // namespace

TEST_SUITE("environments") {

TEST_CASE("basis-vector game structure") {
  auto g = make_tvn(3, AttentionWeights::dcg(3, 2));
  CHECK(g.creator_count() == 3);
  REQUIRE(g.population.size() == 6);
  CHECK(g.dim() == 3);
  // n+1 majority users on e1, then one on each remaining basis vector
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(g.population.users[j] == basis_vector(3, 0));
  CHECK(g.population.users[4] == basis_vector(3, 1));
  CHECK(g.population.users[5] == basis_vector(3, 2));
  for (double w : g.population.weights) CHECK(w == 1.0 / 6.0);

  for (const auto& sp : g.action_spaces) {
    REQUIRE(sp.kind == ActionSpaceKind::FiniteSet);
    REQUIRE(sp.members.size() == 3);
  }
  CHECK(g.score_fn.kind == ScoreKind::RawInnerProduct);
  for (const auto& c : g.costs) CHECK(c.kind == CostKind::Zero);

  CHECK_THROWS_AS(make_tvn(1, AttentionWeights::validated({1.0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_tvn(3, AttentionWeights::dcg(2, 1)),
                  std::invalid_argument);
  // all-zero attention has no top-K prefix
  CHECK_THROWS_AS(make_tvn(3, AttentionWeights{{0.0, 0.0, 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("synthetic population") {
  SyntheticSpec spec;
  spec.d = 6;
  spec.noise = 0.25;
  spec.cluster_sizes = {8, 5, 2};
  spec.creators = 4;
  spec.seed = 99;
  auto attention = AttentionWeights::dcg(4, 3);

  SUBCASE("shape, labels, and unit norms") {
    auto sc = make_synthetic(spec, ScenarioVariant::g1(), attention);
    REQUIRE(sc.game.population.size() == 15);
    CHECK(sc.game.population.group_labels ==
          std::vector<int>{0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2});
    for (const Vec& u : sc.game.population.users)
      CHECK(norm(u) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sc.game.score_fn.kind == ScoreKind::ShiftedInnerProduct);
  }

  SUBCASE("g1 starts every creator on the largest cluster's center") {
    auto sc = make_synthetic(spec, ScenarioVariant::g1(), attention);
    REQUIRE(sc.initial_profile.size() == 4);
    const Vec& first = std::get<Vec>(sc.initial_profile.actions[0]);
    CHECK(norm(first) == doctest::Approx(1.0).epsilon(1e-12));
    for (const Action& a : sc.initial_profile.actions)
      CHECK(std::get<Vec>(a) == first);
    for (const auto& c : sc.game.costs) CHECK(c.kind == CostKind::Zero);
  }

  SUBCASE("g2 starts every creator at its own cost center") {
    auto sc = make_synthetic(spec, ScenarioVariant::g2(0.5), attention);
    for (std::size_t i = 0; i < 4; ++i) {
      REQUIRE(sc.game.costs[i].kind == CostKind::Quadratic);
      CHECK(sc.game.costs[i].lambda == 0.5);
      CHECK(std::get<Vec>(sc.initial_profile.actions[i]) ==
            sc.game.costs[i].center);
    }
    // centers differ across creators
    CHECK(sc.game.costs[0].center != sc.game.costs[1].center);
  }

  SUBCASE("same seed reproduces the population bitwise") {
    auto a = make_synthetic(spec, ScenarioVariant::g1(), attention);
    auto b = make_synthetic(spec, ScenarioVariant::g1(), attention);
    CHECK(a.game.population.users == b.game.population.users);
    spec.seed = 100;
    auto c = make_synthetic(spec, ScenarioVariant::g1(), attention);
    CHECK(a.game.population.users != c.game.population.users);
  }

  SUBCASE("validation") {
    spec.cluster_sizes = {3, 0};
    CHECK_THROWS_AS(make_synthetic(spec, ScenarioVariant::g1(), attention),
                    std::invalid_argument);
    spec.cluster_sizes = {3};
    spec.creators = 3;
    CHECK_THROWS_AS(make_synthetic(spec, ScenarioVariant::g1(), attention),
                    std::invalid_argument);  // attention length 4 != 3
  }
}

TEST_CASE("population csv round trip") {
  UserPopulation p;
  p.users = {{0.6, 0.8}, {1.0, 0.0}, {0.0, -1.0}};
  p.weights = {0.25, 0.5, 0.25};
  p.group_labels = {2, 0, 2};

  TempDir tmp;
  auto path = tmp.file("pop.csv", population_to_csv(p));
  auto q = read_population_csv(path);
  CHECK(q.users == p.users);
  CHECK(q.weights == p.weights);
  CHECK(q.group_labels == p.group_labels);

  SUBCASE("ragged rows are rejected with a line number") {
    auto bad = tmp.file("bad.csv", "user,group,weight,x_0,x_1\n0,0,1.0,0.5\n");
    CHECK_THROWS_WITH_AS(read_population_csv(bad),
                         doctest::Contains("ragged row 2"),
                         std::runtime_error);
  }
  SUBCASE("non-numeric fields are rejected") {
    auto bad = tmp.file("bad2.csv",
                        "user,group,weight,x_0\n0,0,oops,0.5\n");
    CHECK_THROWS_AS(read_population_csv(bad), std::runtime_error);
  }
  SUBCASE("missing data rows") {
    auto bad = tmp.file("bad3.csv", "user,group,weight,x_0\n");
    CHECK_THROWS_AS(read_population_csv(bad), std::runtime_error);
  }
}

TEST_CASE("embedding ingest") {
  TempDir tmp;
  // raw inner products against the items below:
  //   u1 . A = 6, u2 . B = 6 (the only ratings above the cutoff of 4)
  auto users = tmp.file("users.csv",
                        "u1,3.0,0.0\n"
                        "u2,0.0,3.0\n"
                        "u3,1.0,1.0\n");
  auto items = tmp.file("items.csv",
                        "A,2.0,0.0\n"
                        "B,0.0,2.0\n"
                        "C,1.0,1.0\n"
                        "D,0.1,0.1\n");
  EmbeddingIngestSpec spec;
  spec.user_file = users;
  spec.item_file = items;
  spec.d = 2;
  spec.scale = 0.4;
  spec.offset = -1.0;
  spec.rating_cutoff = 4.0;
  spec.max_high_ratings = 1;
  auto attention = AttentionWeights::dcg(2, 2);

  SUBCASE("everyone survives a permissive filter") {
    auto sc = ingest_embeddings(spec, ScenarioVariant::g1(), 2, 0, attention);
    CHECK(sc.game.population.size() == 3);
    REQUIRE(sc.game.action_spaces[0].members.size() == 4);
    CHECK(sc.game.score_fn.kind == ScoreKind::ClippedAffine);
    // item A has the best mean clipped score (1/3); ties keep the first
    for (const Action& a : sc.initial_profile.actions)
      CHECK(std::get<std::size_t>(a) == 0);
  }

  SUBCASE("heavy raters and blockbuster items are dropped") {
    spec.max_high_ratings = 0;
    auto sc = ingest_embeddings(spec, ScenarioVariant::g1(), 2, 0, attention);
    REQUIRE(sc.game.population.size() == 1);  // only u3
    CHECK(sc.game.population.users[0] == Vec{1.0, 1.0});
    REQUIRE(sc.game.action_spaces[0].members.size() == 2);  // C and D
    CHECK(sc.game.action_spaces[0].members[0] == Vec{1.0, 1.0});
  }

  SUBCASE("an overzealous filter is an error") {
    spec.max_high_ratings = 0;
    spec.rating_cutoff = 0.05;
    CHECK_THROWS_WITH_AS(
        ingest_embeddings(spec, ScenarioVariant::g1(), 2, 0, attention),
        doctest::Contains("no users survive"), std::runtime_error);
  }

  SUBCASE("g2 samples cost centers from the surviving items") {
    auto sc =
        ingest_embeddings(spec, ScenarioVariant::g2(10.0), 3, 123,
                          AttentionWeights::dcg(3, 2));
    for (std::size_t i = 0; i < 3; ++i) {
      REQUIRE(sc.game.costs[i].kind == CostKind::Quadratic);
      CHECK(sc.game.costs[i].lambda == 10.0);
      CHECK(action_vector(sc.game, i, sc.initial_profile.actions[i]) ==
            sc.game.costs[i].center);
    }
  }

  SUBCASE("malformed embedding rows carry file and row context") {
    auto bad = tmp.file("short.csv", "v1,0.5\n");
    spec.user_file = bad;
    CHECK_THROWS_WITH_AS(
        ingest_embeddings(spec, ScenarioVariant::g1(), 2, 0, attention),
        doctest::Contains("row 1"), std::runtime_error);
  }
}

}  // TEST_SUITE("environments")
