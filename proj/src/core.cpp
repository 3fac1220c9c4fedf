#include "c3/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace c3 {

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

double squared_distance(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("squared_distance: dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double dlt = a[k] - b[k];
    acc += dlt * dlt;
  }
  return acc;
}

Vec normalized(Vec v) {
  if (v.empty()) throw std::invalid_argument("normalized: empty vector");
  double nrm = norm(v);
  if (nrm == 0.0) {
    v[0] = std::numeric_limits<double>::epsilon();
    nrm = norm(v);
  }
  for (double& x : v) x /= nrm;
  return v;
}

Vec basis_vector(std::size_t d, std::size_t k) {
  if (k >= d) throw std::invalid_argument("basis_vector: k out of range");
  Vec v(d, 0.0);
  v[k] = 1.0;
  return v;
}

UserPopulation UserPopulation::uniform(std::vector<Vec> users,
                                       std::vector<int> group_labels) {
  UserPopulation p;
  std::size_t m = users.size();
  p.users = std::move(users);
  p.weights.assign(m, m > 0 ? 1.0 / static_cast<double>(m) : 0.0);
  p.group_labels = std::move(group_labels);
  p.validate();
  return p;
}

void UserPopulation::validate() const {
  if (users.empty()) throw std::invalid_argument("population: no users");
  std::size_t d = users.front().size();
  if (d == 0) throw std::invalid_argument("population: zero-dimensional user");
  for (const Vec& u : users) {
    if (u.size() != d)
      throw std::invalid_argument("population: inconsistent user dimensions");
    for (double x : u)
      if (!std::isfinite(x))
        throw std::invalid_argument("population: non-finite user coordinate");
  }
  if (weights.size() != users.size())
    throw std::invalid_argument("population: weights/users size mismatch");
  // Kahan summation: the 1e-12 gate must not trip on accumulation error for
  // large populations of tiny equal weights.
  double total = 0.0, comp = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw std::invalid_argument("population: negative weight");
    double y = w - comp;
    double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("population: weights must sum to 1");
  if (!group_labels.empty() && group_labels.size() != users.size())
    throw std::invalid_argument("population: group label count mismatch");
}

ActionSpace ActionSpace::continuous_sphere(std::size_t d) {
  ActionSpace s;
  s.kind = ActionSpaceKind::ContinuousUnitSphere;
  s.dim = d;
  s.validate();
  return s;
}

ActionSpace ActionSpace::finite_set(std::vector<Vec> members) {
  ActionSpace s;
  s.kind = ActionSpaceKind::FiniteSet;
  s.members = std::move(members);
  s.dim = s.members.empty() ? 0 : s.members.front().size();
  s.validate();
  return s;
}

std::size_t ActionSpace::dimension() const { return dim; }

void ActionSpace::validate() const {
  if (kind == ActionSpaceKind::ContinuousUnitSphere) {
    if (dim < 1)
      throw std::invalid_argument("action space: sphere dimension must be >= 1");
    return;
  }
  if (members.empty())
    throw std::invalid_argument("action space: empty finite set");
  for (const Vec& m : members) {
    if (m.size() != dim)
      throw std::invalid_argument("action space: inconsistent member dimensions");
    for (double x : m)
      if (!std::isfinite(x))
        throw std::invalid_argument("action space: non-finite member coordinate");
  }
}

CostSpec CostSpec::zero() { return CostSpec{}; }

CostSpec CostSpec::quadratic(double lambda, Vec center) {
  CostSpec c;
  c.kind = CostKind::Quadratic;
  c.lambda = lambda;
  c.center = std::move(center);
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("cost: lambda must be finite and >= 0");
  return c;
}

double CostSpec::operator()(const Vec& s) const {
  if (kind == CostKind::Zero) return 0.0;
  return lambda * squared_distance(s, center);
}

void CostSpec::validate(std::size_t d) const {
  if (kind == CostKind::Zero) return;
  if (center.size() != d)
    throw std::invalid_argument("cost: center dimension mismatch");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("cost: lambda must be finite and >= 0");
}

ScoreFunctionSpec ScoreFunctionSpec::raw_inner_product() {
  return ScoreFunctionSpec{ScoreKind::RawInnerProduct, 1.0, 0.0};
}

ScoreFunctionSpec ScoreFunctionSpec::shifted_inner_product() {
  return ScoreFunctionSpec{ScoreKind::ShiftedInnerProduct, 1.0, 0.0};
}

ScoreFunctionSpec ScoreFunctionSpec::clipped_affine(double scale,
                                                    double offset) {
  if (!std::isfinite(scale) || !std::isfinite(offset))
    throw std::invalid_argument("score: non-finite affine parameters");
  return ScoreFunctionSpec{ScoreKind::ClippedAffine, scale, offset};
}

double score(const Vec& action, const Vec& user, const ScoreFunctionSpec& fn) {
  double ip = dot(action, user);
  double s = 0.0;
  switch (fn.kind) {
    case ScoreKind::RawInnerProduct:
      s = ip;
      break;
    case ScoreKind::ShiftedInnerProduct:
      s = 0.5 * (ip + 1.0);
      break;
    case ScoreKind::ClippedAffine:
      s = ip * fn.scale + fn.offset;
      break;
  }
  if (!std::isfinite(s)) throw std::invalid_argument("score: non-finite value");
  return std::clamp(s, 0.0, 1.0);
}

AttentionWeights AttentionWeights::validated(std::vector<double> r) {
  if (r.empty()) throw std::invalid_argument("attention: empty weights");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || r[i] < 0.0 || r[i] > 1.0)
      throw std::invalid_argument("attention: weights must lie in [0,1]");
    if (i > 0 && r[i] > r[i - 1])
      throw std::invalid_argument("attention: weights must be nonincreasing");
  }
  AttentionWeights a;
  a.r = std::move(r);
  return a;
}

AttentionWeights AttentionWeights::dcg(std::size_t n, std::size_t k) {
  if (n == 0) throw std::invalid_argument("attention: n must be >= 1");
  std::vector<double> r(n, 0.0);
  for (std::size_t i = 0; i < std::min(n, k); ++i)
    r[i] = 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return validated(std::move(r));
}

std::size_t AttentionWeights::top_k() const {
  std::size_t k = 0;
  while (k < r.size() && r[k] > 0.0) ++k;
  return k;
}

ScoreProfile make_score_profile(std::vector<double> scores) {
  ScoreProfile sp;
  std::size_t n = scores.size();
  if (n == 0) throw std::invalid_argument("score profile: no creators");
  for (double s : scores)
    if (!std::isfinite(s))
      throw std::invalid_argument("score profile: non-finite score");
  sp.scores = std::move(scores);
  sp.order.resize(n);
  std::iota(sp.order.begin(), sp.order.end(), std::size_t{0});
  std::stable_sort(sp.order.begin(), sp.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return sp.scores[a] > sp.scores[b];
                   });
  std::size_t begin = 0;
  for (std::size_t p = 1; p <= n; ++p) {
    if (p == n || sp.scores[sp.order[p]] != sp.scores[sp.order[begin]]) {
      sp.tie_groups.emplace_back(begin, p);
      begin = p;
    }
  }
  return sp;
}

PerturbedWeights perturbed_attention_weights(
    const AttentionWeights& r,
    const std::vector<std::pair<std::vector<std::size_t>, double>>& mixture) {
  std::size_t n = r.size();
  if (mixture.empty())
    throw std::invalid_argument("perturbed weights: empty mixture");
  double ptotal = 0.0;
  for (const auto& [perm, p] : mixture) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("perturbed weights: probabilities must be >= 0");
    ptotal += p;
    if (perm.size() != n)
      throw std::invalid_argument("perturbed weights: permutation size mismatch");
    std::vector<bool> seen(n, false);
    for (std::size_t pos : perm) {
      if (pos >= n || seen[pos])
        throw std::invalid_argument("perturbed weights: not a permutation");
      seen[pos] = true;
    }
  }
  if (std::abs(ptotal - 1.0) > 1e-12)
    throw std::invalid_argument("perturbed weights: probabilities must sum to 1");

  PerturbedWeights out;
  out.weights.assign(n, 0.0);
  for (const auto& [perm, p] : mixture)
    for (std::size_t rank = 0; rank < n; ++rank)
      out.weights[rank] += p * r.r[perm[rank]];
  for (std::size_t rank = 1; rank < n; ++rank)
    if (out.weights[rank] > out.weights[rank - 1]) out.nonincreasing = false;
  return out;
}

}  // namespace c3
