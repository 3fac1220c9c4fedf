#include "c3/environments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "c3/csv.hpp"
#include "c3/rng.hpp"

namespace c3 {

GameInstance make_tvn(std::size_t n, AttentionWeights attention) {
  if (n < 2) throw std::invalid_argument("tvn: n must be >= 2");
  if (attention.size() != n)
    throw std::invalid_argument("tvn: attention must have length n");
  std::size_t k = attention.top_k();
  if (k < 1 || k > n)
    throw std::invalid_argument("tvn: attention must be top-K with K in [1,n]");

  std::vector<Vec> users;
  users.reserve(2 * n);
  for (std::size_t j = 0; j < n + 1; ++j) users.push_back(basis_vector(n, 0));
  for (std::size_t j = 1; j < n; ++j) users.push_back(basis_vector(n, j));

  std::vector<Vec> actions;
  actions.reserve(n);
  for (std::size_t j = 0; j < n; ++j) actions.push_back(basis_vector(n, j));

  GameInstance g;
  g.population = UserPopulation::uniform(std::move(users));
  g.action_spaces.assign(n, ActionSpace::finite_set(actions));
  g.costs.assign(n, CostSpec::zero());
  g.score_fn = ScoreFunctionSpec::raw_inner_product();
  g.attention = std::move(attention);
  return g;
}

void SyntheticSpec::validate() const {
  if (d < 2) throw std::invalid_argument("synthetic: d must be >= 2");
  if (!(noise >= 0.0) || !std::isfinite(noise))
    throw std::invalid_argument("synthetic: noise must be finite and >= 0");
  if (cluster_sizes.empty())
    throw std::invalid_argument("synthetic: cluster sizes required");
  for (std::size_t z : cluster_sizes)
    if (z == 0) throw std::invalid_argument("synthetic: empty cluster");
  if (creators < 1)
    throw std::invalid_argument("synthetic: creators must be >= 1");
}

Scenario make_synthetic(const SyntheticSpec& spec, const ScenarioVariant& var,
                        AttentionWeights attention) {
  spec.validate();
  const std::size_t n = spec.creators;
  if (attention.size() != n)
    throw std::invalid_argument("synthetic: attention must have length n");

  SplitMix64 rng(spec.seed);
  std::vector<Vec> centers;
  centers.reserve(spec.cluster_sizes.size());
  for (std::size_t y = 0; y < spec.cluster_sizes.size(); ++y)
    centers.push_back(rng.unit_vector(spec.d));

  std::vector<Vec> users;
  std::vector<int> labels;
  for (std::size_t y = 0; y < spec.cluster_sizes.size(); ++y) {
    for (std::size_t j = 0; j < spec.cluster_sizes[y]; ++j) {
      Vec x = centers[y];
      for (std::size_t k = 0; k < spec.d; ++k) x[k] += spec.noise * rng.normal();
      users.push_back(normalized(std::move(x)));
      labels.push_back(static_cast<int>(y));
    }
  }

  Scenario sc;
  sc.game.population = UserPopulation::uniform(std::move(users), std::move(labels));
  sc.game.action_spaces.assign(n, ActionSpace::continuous_sphere(spec.d));
  sc.game.score_fn = ScoreFunctionSpec::shifted_inner_product();
  sc.game.attention = std::move(attention);

  if (!var.quadratic) {
    sc.game.costs.assign(n, CostSpec::zero());
    std::size_t largest = static_cast<std::size_t>(
        std::max_element(spec.cluster_sizes.begin(), spec.cluster_sizes.end()) -
        spec.cluster_sizes.begin());
    sc.initial_profile.actions.assign(n, Action{centers[largest]});
  } else {
    sc.game.costs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Vec c = rng.unit_vector(spec.d);
      sc.game.costs.push_back(CostSpec::quadratic(var.lambda, c));
      sc.initial_profile.actions.push_back(Action{std::move(c)});
    }
  }
  sc.game.validate();
  return sc;
}

namespace {

struct EmbeddingTable {
  std::vector<std::string> ids;
  std::vector<Vec> vecs;
};

EmbeddingTable read_embeddings(const std::string& path, std::size_t d) {
  EmbeddingTable t;
  auto rows = csv::read_rows(path);
  if (rows.empty())
    throw std::runtime_error("embeddings: '" + path + "' is empty");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != d + 1)
      throw std::runtime_error("embeddings: '" + path + "' row " +
                               std::to_string(r + 1) + " has " +
                               std::to_string(row.size()) +
                               " fields, expected " + std::to_string(d + 1));
    t.ids.push_back(row[0]);
    Vec v(d);
    for (std::size_t k = 0; k < d; ++k)
      v[k] = csv::parse_double(row[k + 1],
                               path + ":" + std::to_string(r + 1));
    t.vecs.push_back(std::move(v));
  }
  return t;
}

}  // namespace

Scenario ingest_embeddings(const EmbeddingIngestSpec& spec,
                           const ScenarioVariant& var, std::size_t n,
                           std::uint64_t seed, AttentionWeights attention) {
  if (n < 1) throw std::invalid_argument("ingest: creators must be >= 1");
  if (attention.size() != n)
    throw std::invalid_argument("ingest: attention must have length n");
  EmbeddingTable users = read_embeddings(spec.user_file, spec.d);
  EmbeddingTable items = read_embeddings(spec.item_file, spec.d);

  const std::size_t mu = users.vecs.size();
  const std::size_t mi = items.vecs.size();
  std::vector<std::size_t> user_high(mu, 0), item_high(mi, 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t u = 0; u < static_cast<std::int64_t>(mu); ++u)
    for (std::size_t i = 0; i < mi; ++i)
      if (dot(users.vecs[u], items.vecs[i]) > spec.rating_cutoff)
        ++user_high[u];
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(mi); ++i)
    for (std::size_t u = 0; u < mu; ++u)
      if (dot(users.vecs[u], items.vecs[i]) > spec.rating_cutoff)
        ++item_high[i];

  std::vector<Vec> kept_users;
  for (std::size_t u = 0; u < mu; ++u)
    if (user_high[u] <= spec.max_high_ratings)
      kept_users.push_back(users.vecs[u]);
  std::vector<Vec> kept_items;
  for (std::size_t i = 0; i < mi; ++i)
    if (item_high[i] <= spec.max_high_ratings)
      kept_items.push_back(items.vecs[i]);
  if (kept_users.empty())
    throw std::runtime_error("ingest: no users survive the rating filter");
  if (kept_items.empty())
    throw std::runtime_error("ingest: no items survive the rating filter");

  Scenario sc;
  sc.game.population = UserPopulation::uniform(kept_users);
  sc.game.action_spaces.assign(n, ActionSpace::finite_set(kept_items));
  sc.game.score_fn = ScoreFunctionSpec::clipped_affine(spec.scale, spec.offset);
  sc.game.attention = std::move(attention);

  if (!var.quadratic) {
    sc.game.costs.assign(n, CostSpec::zero());
    // start everyone on the item with the best mean clipped score
    std::size_t best = 0;
    double best_mean = -1.0;
    for (std::size_t i = 0; i < kept_items.size(); ++i) {
      double acc = 0.0;
      for (const Vec& u : kept_users)
        acc += score(kept_items[i], u, sc.game.score_fn);
      double mean = acc / static_cast<double>(kept_users.size());
      if (mean > best_mean) {
        best_mean = mean;
        best = i;
      }
    }
    sc.initial_profile.actions.assign(n, Action{best});
  } else {
    SplitMix64 rng(seed);
    sc.game.costs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t pick = rng.uniform_index(kept_items.size());
      sc.game.costs.push_back(
          CostSpec::quadratic(var.lambda, kept_items[pick]));
      sc.initial_profile.actions.push_back(Action{pick});
    }
  }
  sc.game.validate();
  return sc;
}

std::string population_to_csv(const UserPopulation& p) {
  std::size_t d = p.dim();
  std::vector<std::string> header = {"user", "group", "weight"};
  for (std::size_t k = 0; k < d; ++k) header.push_back("x_" + std::to_string(k));
  std::string out = csv::join_row(header);
  for (std::size_t j = 0; j < p.size(); ++j) {
    std::vector<std::string> row = {
        std::to_string(j),
        std::to_string(p.group_labels.empty() ? 0 : p.group_labels[j]),
        csv::fmt(p.weights[j])};
    for (double x : p.users[j]) row.push_back(csv::fmt(x));
    out += csv::join_row(row);
  }
  return out;
}

UserPopulation read_population_csv(const std::string& path) {
  auto rows = csv::read_rows(path);
  if (rows.size() < 2)
    throw std::runtime_error("population: '" + path + "' has no data rows");
  std::size_t cols = rows.front().size();
  if (cols < 4)
    throw std::runtime_error("population: '" + path + "' has too few columns");
  std::size_t d = cols - 3;
  UserPopulation p;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != cols)
      throw std::runtime_error("population: ragged row " + std::to_string(r + 1) +
                               " in '" + path + "'");
    std::string ctx = path + ":" + std::to_string(r + 1);
    p.group_labels.push_back(
        static_cast<int>(csv::parse_double(row[1], ctx)));
    p.weights.push_back(csv::parse_double(row[2], ctx));
    Vec x(d);
    for (std::size_t k = 0; k < d; ++k)
      x[k] = csv::parse_double(row[3 + k], ctx);
    p.users.push_back(std::move(x));
  }
  p.validate();
  return p;
}

}  // namespace c3
