#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace c3 {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);
double squared_distance(const Vec& a, const Vec& b);

/// Returns v / ||v||. A zero vector is nudged by machine epsilon first
/// (probability-zero input under every sampler in this library).
Vec normalized(Vec v);

/// k-th standard basis vector of R^d.
Vec basis_vector(std::size_t d, std::size_t k);

/// Discrete user population: embeddings with sampling weights and optional
/// cluster labels used for group-level welfare reporting.
struct UserPopulation {
  std::vector<Vec> users;
  std::vector<double> weights;    // nonnegative, sums to 1 (tol 1e-12)
  std::vector<int> group_labels;  // empty, or one label per user

  std::size_t size() const { return users.size(); }
  std::size_t dim() const { return users.empty() ? 0 : users.front().size(); }

  static UserPopulation uniform(std::vector<Vec> users,
                                std::vector<int> group_labels = {});
  void validate() const;
};

enum class ActionSpaceKind { ContinuousUnitSphere, FiniteSet };

struct ActionSpace {
  ActionSpaceKind kind = ActionSpaceKind::ContinuousUnitSphere;
  std::size_t dim = 0;      // sphere dimension (continuous)
  std::vector<Vec> members; // finite set, all same dimension

  static ActionSpace continuous_sphere(std::size_t d);
  static ActionSpace finite_set(std::vector<Vec> members);

  std::size_t dimension() const;
  void validate() const;
};

enum class CostKind { Zero, Quadratic };

/// Production cost c_i. Zero, or lambda * ||s - center||^2.
struct CostSpec {
  CostKind kind = CostKind::Zero;
  double lambda = 0.0;
  Vec center;

  static CostSpec zero();
  static CostSpec quadratic(double lambda, Vec center);

  double operator()(const Vec& s) const;
  void validate(std::size_t d) const;
};

enum class ScoreKind { RawInnerProduct, ShiftedInnerProduct, ClippedAffine };

/// Matching score between a creator embedding and a user embedding. Output is
/// clamped to [0, 1] for every kind; RawInnerProduct additionally expects the
/// caller to guarantee a nonnegative product (0/1-valued in the basis-vector
/// games).
struct ScoreFunctionSpec {
  ScoreKind kind = ScoreKind::ShiftedInnerProduct;
  double scale = 1.0;   // ClippedAffine only
  double offset = 0.0;  // ClippedAffine only

  static ScoreFunctionSpec raw_inner_product();
  static ScoreFunctionSpec shifted_inner_product();
  static ScoreFunctionSpec clipped_affine(double scale, double offset);
};

double score(const Vec& action, const Vec& user, const ScoreFunctionSpec& fn);

/// Attention weights r_1 >= r_2 >= ... >= r_n >= 0, each in [0, 1].
struct AttentionWeights {
  std::vector<double> r;

  static AttentionWeights validated(std::vector<double> r);
  /// DCG-style prefix 1/log2(i+1) for ranks i = 1..min(k, n), zeros after.
  static AttentionWeights dcg(std::size_t n, std::size_t k = 5);

  std::size_t size() const { return r.size(); }
  /// Number of leading nonzero weights (the K of a top-K scheme).
  std::size_t top_k() const;
};

/// A creator action: index into a finite ActionSpace, or an explicit unit
/// vector for the continuous sphere.
using Action = std::variant<std::size_t, Vec>;

struct StrategyProfile {
  std::vector<Action> actions;
  std::size_t size() const { return actions.size(); }
};

/// Scores of all creators for one user, with the descending ranking attached.
/// `order[p]` is the creator at rank position p (ties broken by creator
/// index); `tie_groups` lists maximal [begin, end) runs of rank positions
/// whose scores are bitwise equal.
struct ScoreProfile {
  std::vector<double> scores;
  std::vector<std::size_t> order;
  std::vector<std::pair<std::size_t, std::size_t>> tie_groups;

  std::size_t size() const { return scores.size(); }
};

ScoreProfile make_score_profile(std::vector<double> scores);

struct PerturbedWeights {
  std::vector<double> weights;
  bool nonincreasing = true;  // false: not a valid AttentionWeights as-is
};

/// Expected attention per relevance rank under a mixture of rank->position
/// permutations (e.g. ranking interventions that sometimes promote an item).
/// Each permutation maps rank k to the display position whose attention the
/// rank-k item then receives. The total attention mass is conserved; the
/// result may be non-monotone and is returned unvalidated with a flag.
PerturbedWeights perturbed_attention_weights(
    const AttentionWeights& r,
    const std::vector<std::pair<std::vector<std::size_t>, double>>& mixture);

}  // namespace c3
