#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c3/game.hpp"

namespace c3 {

/// Game plus the variant's canonical initial profile.
struct Scenario {
  GameInstance game;
  StrategyProfile initial_profile;
};

/// Cost/init variant. G1: zero costs, all creators start at the most popular
/// strategy. G2: quadratic costs around per-creator centers, creators start
/// at their centers.
struct ScenarioVariant {
  bool quadratic = false;
  double lambda = 0.0;

  static ScenarioVariant g1() { return {false, 0.0}; }
  static ScenarioVariant g2(double lambda) { return {true, lambda}; }
};

/// The basis-vector majority/niche game: 2n users (n+1 on e_1, one on each of
/// e_2..e_n), shared finite action set {e_1..e_n}, zero costs, raw
/// inner-product scores. The mechanism is left unset for the caller.
GameInstance make_tvn(std::size_t n, AttentionWeights attention);

struct SyntheticSpec {
  std::size_t d = 10;
  double noise = 0.3;                    // v, cluster std around the center
  std::vector<std::size_t> cluster_sizes;  // z, one entry per cluster
  std::size_t creators = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Clustered sphere population: cluster centers uniform on S^{d-1}, users
/// N(center, v^2 I) then normalized, group labels by cluster. Creators act on
/// the continuous sphere with shifted inner-product scores. Draw order:
/// centers, then users cluster by cluster, then (G2 only) cost centers.
Scenario make_synthetic(const SyntheticSpec& spec, const ScenarioVariant& var,
                        AttentionWeights attention);

struct EmbeddingIngestSpec {
  std::string user_file;  // CSV rows: id, then d floats
  std::string item_file;
  std::size_t d = 32;
  double scale = 1.0 / 2.5;  // clipped-affine score parameters
  double offset = -1.0;
  double rating_cutoff = 4.0;       // raw inner product threshold
  std::size_t max_high_ratings = 500;  // drop entities strictly above this
};

/// Recommender embeddings environment: loads user/item embeddings, drops
/// users and items with more than max_high_ratings raw scores strictly above
/// rating_cutoff (counted against the unfiltered other side), and builds a
/// finite-action game over the surviving items with clipped-affine scores.
/// G1 starts every creator on the item with the highest mean clipped score;
/// G2 samples per-creator cost centers uniformly from the surviving items.
Scenario ingest_embeddings(const EmbeddingIngestSpec& spec,
                           const ScenarioVariant& var, std::size_t n,
                           std::uint64_t seed, AttentionWeights attention);

/// Writes "user,group,weight,x_0..x_{d-1}" rows; the exact inverse of
/// read_population_csv.
std::string population_to_csv(const UserPopulation& p);
UserPopulation read_population_csv(const std::string& path);

}  // namespace c3
