#include "c3/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "c3/rng.hpp"

namespace c3 {

PiecewiseConstantFn PiecewiseConstantFn::constant(double v) {
  PiecewiseConstantFn f;
  f.breakpoints = {0.0, 1.0};
  f.values = {v};
  f.validate();
  return f;
}

double PiecewiseConstantFn::value_at(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("piecewise fn: argument outside [0,1]");
  std::size_t j = static_cast<std::size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), t) -
      breakpoints.begin());
  if (j > values.size()) j = values.size();  // t == 1 falls in the last cell
  return values[j - 1];
}

double PiecewiseConstantFn::integral(double lo, double hi) const {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
    throw std::invalid_argument("piecewise fn: bad integration bounds");
  if (lo == hi) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    double a = std::max(breakpoints[j], lo);
    double b = std::min(breakpoints[j + 1], hi);
    if (b > a) acc += values[j] * (b - a);
  }
  return acc;
}

void PiecewiseConstantFn::validate() const {
  if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
    throw std::invalid_argument("piecewise fn: breakpoint/value count mismatch");
  if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
    throw std::invalid_argument("piecewise fn: breakpoints must span [0,1]");
  for (std::size_t j = 1; j < breakpoints.size(); ++j)
    if (!(breakpoints[j] > breakpoints[j - 1]))
      throw std::invalid_argument("piecewise fn: breakpoints must increase");
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("piecewise fn: values must be finite and >= 0");
}

MechanismSpec MechanismSpec::m3_zero() { return MechanismSpec{}; }

MechanismSpec MechanismSpec::m3_exposure(std::size_t k, double beta) {
  if (k < 1) throw std::invalid_argument("mechanism: top_k must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("mechanism: beta must be finite and > 0");
  MechanismSpec m;
  m.kind = MechanismKind::M3Exposure;
  m.top_k = k;
  m.beta = beta;
  return m;
}

MechanismSpec MechanismSpec::m3_engagement(std::size_t k, double beta) {
  MechanismSpec m = m3_exposure(k, beta);
  m.kind = MechanismKind::M3Engagement;
  return m;
}

MechanismSpec MechanismSpec::brm_unchecked(std::vector<PiecewiseConstantFn> f) {
  if (f.empty()) throw std::invalid_argument("mechanism: brm needs f");
  for (const auto& fn : f) fn.validate();
  MechanismSpec m;
  m.kind = MechanismKind::Brm;
  m.brm_f = std::move(f);
  return m;
}

MechanismSpec MechanismSpec::brm(std::vector<PiecewiseConstantFn> f) {
  MechanismSpec m = brm_unchecked(std::move(f));
  // f_1 >= ... >= f_n pointwise, checked on the union breakpoint grid
  std::vector<double> grid;
  for (const auto& fn : m.brm_f)
    grid.insert(grid.end(), fn.breakpoints.begin(), fn.breakpoints.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (std::size_t j = 0; j + 1 < grid.size(); ++j)
    for (std::size_t i = 0; i + 1 < m.brm_f.size(); ++i)
      if (m.brm_f[i].value_at(grid[j]) < m.brm_f[i + 1].value_at(grid[j]))
        throw std::invalid_argument(
            "mechanism: brm requires f_1 >= ... >= f_n pointwise");
  for (double v : m.brm_f.front().values)
    if (!(v > 0.0))
      throw std::invalid_argument("mechanism: brm requires f_1 > 0 everywhere");
  return m;
}

MechanismSpec MechanismSpec::brcm_unchecked(std::vector<double> f) {
  if (f.empty()) throw std::invalid_argument("mechanism: brcm needs f");
  for (double v : f)
    if (!std::isfinite(v))
      throw std::invalid_argument("mechanism: non-finite brcm value");
  MechanismSpec m;
  m.kind = MechanismKind::Brcm;
  m.brcm_f = std::move(f);
  return m;
}

MechanismSpec MechanismSpec::brcm(std::vector<double> f) {
  MechanismSpec m = brcm_unchecked(std::move(f));
  for (std::size_t i = 0; i < m.brcm_f.size(); ++i) {
    if (m.brcm_f[i] < 0.0)
      throw std::invalid_argument("mechanism: brcm requires f >= 0");
    if (i > 0 && m.brcm_f[i] > m.brcm_f[i - 1])
      throw std::invalid_argument("mechanism: brcm requires nonincreasing f");
  }
  return m;
}

std::size_t MechanismSpec::fixed_creator_count() const {
  if (kind == MechanismKind::Brm) return brm_f.size();
  if (kind == MechanismKind::Brcm) return brcm_f.size();
  return 0;
}

std::string MechanismSpec::name() const {
  switch (kind) {
    case MechanismKind::M3Zero: return "m3-zero";
    case MechanismKind::M3Exposure: return "m3-exposure";
    case MechanismKind::M3Engagement: return "m3-engagement";
    case MechanismKind::Brm: return "brm";
    case MechanismKind::Brcm: return "brcm";
  }
  return "unknown";
}

MechanismSpec shapley_mediator(std::size_t n) {
  if (n < 1) throw std::invalid_argument("shapley mediator: n must be >= 1");
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = 1.0 / static_cast<double>(i + 1);
  return MechanismSpec::brcm(std::move(f));
}

namespace {

// Moves one creator's share by a few ulp so the creator-index-order total is
// exactly the unit budget. Only a creator alone in its tie group may absorb
// the residual; profiles whose positive shares all sit in non-singleton
// groups are left alone: a nudge there would break bitwise tie equality for
// an error of at most a few ulp.
void settle_unit_total(std::vector<double>& rew, const ScoreProfile& sp,
                       std::size_t k) {
  // Preferred: the highest-index creator with a positive share. Every later
  // index adds exactly 0.0 to the running total, so assigning 1 - prefix
  // lands the sum on 1.0 exactly (the subtraction is exact for prefix in
  // [0.5, 1) and otherwise off by < 2^-54, which rounds back onto 1.0).
  std::size_t last = rew.size();
  for (std::size_t i = rew.size(); i-- > 0;) {
    if (rew[i] > 0.0) {
      last = i;
      break;
    }
  }
  if (last == rew.size()) return;
  for (auto [a, b] : sp.tie_groups) {
    if (b - a != 1 || sp.order[a] != last) continue;
    double prefix = 0.0;
    for (std::size_t i = 0; i < last; ++i) prefix += rew[i];
    const double x = 1.0 - prefix;
    if (x <= 0.0) break;  // prefix over budget; nudge below instead
    rew[last] = x;
    return;
  }
  // Fallback (positive shares end in a tie, or the prefix already exceeds the
  // budget): walk the first singleton share toward a zero residual. The walk
  // can stall one ulp short when rounding in the re-summation steps over 1.0.
  std::size_t target = rew.size();
  for (auto [a, b] : sp.tie_groups) {
    if (a >= k) break;  // positions past the budgeted prefix have zero share
    if (b - a == 1) {
      target = sp.order[a];
      break;
    }
  }
  if (target == rew.size()) return;
  for (int iter = 0; iter < 64; ++iter) {
    double total = 0.0;
    for (double v : rew) total += v;
    if (total == 1.0) return;
    double corrected = rew[target] + (1.0 - total);
    if (corrected == rew[target])
      corrected = std::nextafter(rew[target], total < 1.0 ? 2.0 : -1.0);
    rew[target] = corrected;
  }
}

std::vector<double> softmax_rewards(const MechanismSpec& spec,
                                    const ScoreProfile& sp) {
  const std::size_t n = sp.size();
  const std::size_t k = spec.top_k;
  if (k < 1 || k > n)
    throw std::invalid_argument("mechanism: top_k must lie in [1, n]");
  const double smax = sp.scores[sp.order[0]];
  std::vector<double> shares(n, 0.0);
  double denom = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    shares[p] = std::exp((sp.scores[sp.order[p]] - smax) / spec.beta);
    denom += shares[p];
  }
  for (std::size_t p = 0; p < k; ++p) shares[p] /= denom;

  std::vector<double> rew(n, 0.0);
  for (auto [a, b] : sp.tie_groups) {
    double sum = 0.0;
    for (std::size_t p = a; p < b; ++p) sum += shares[p];
    double mean = sum / static_cast<double>(b - a);
    for (std::size_t p = a; p < b; ++p) rew[sp.order[p]] = mean;
  }
  settle_unit_total(rew, sp, k);
  if (spec.kind == MechanismKind::M3Engagement) {
    double pi = smax + spec.beta * std::log(denom);
    for (double& v : rew) v *= pi;
  }
  return rew;
}

std::vector<double> backward_rewards(const MechanismSpec& spec,
                                     const ScoreProfile& sp) {
  const std::size_t n = sp.size();
  if (spec.fixed_creator_count() != n)
    throw std::invalid_argument("mechanism: f length does not match creators");
  // Rank-position rewards are suffix sums of the per-gap integrals; a
  // zero-width gap contributes exactly 0.0, so tied creators come out
  // bitwise equal with no extra sharing step.
  std::vector<double> rew(n, 0.0);
  double acc = 0.0;
  for (std::size_t p = n; p-- > 0;) {
    double hi = sp.scores[sp.order[p]];
    double lo = (p + 1 < n) ? sp.scores[sp.order[p + 1]] : 0.0;
    if (spec.kind == MechanismKind::Brm)
      acc += spec.brm_f[p].integral(lo, hi);
    else
      acc += spec.brcm_f[p] * (hi - lo);
    rew[sp.order[p]] = acc;
  }
  return rew;
}

}  // namespace

std::vector<double> rewards(const MechanismSpec& spec, const ScoreProfile& sp) {
  const std::size_t n = sp.size();
  if (n == 0) throw std::invalid_argument("rewards: empty score profile");
  for (double s : sp.scores)
    if (!(s >= 0.0 && s <= 1.0))
      throw std::invalid_argument("rewards: scores must lie in [0,1]");
  switch (spec.kind) {
    case MechanismKind::M3Zero:
      return sp.scores;
    case MechanismKind::M3Exposure:
    case MechanismKind::M3Engagement:
      return softmax_rewards(spec, sp);
    case MechanismKind::Brm:
    case MechanismKind::Brcm:
      return backward_rewards(spec, sp);
  }
  throw std::logic_error("rewards: unreachable");
}

namespace {

std::vector<double> descending_scores(SplitMix64& rng, std::size_t n) {
  std::vector<double> s(n);
  for (double& x : s) x = rng.uniform();
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::size_t sample_creator_count(const MechanismSpec& spec, SplitMix64& rng) {
  std::size_t fixed = spec.fixed_creator_count();
  if (fixed > 0) return fixed;
  std::size_t lo = std::max<std::size_t>(2, spec.is_softmax() ? spec.top_k : 2);
  return lo + rng.uniform_index(5);
}

double reward_of(const MechanismSpec& spec, const std::vector<double>& scores,
                 std::size_t creator) {
  return rewards(spec, make_score_profile(scores))[creator];
}

double total_reward(const MechanismSpec& spec,
                    const std::vector<double>& scores) {
  auto r = rewards(spec, make_score_profile(scores));
  double t = 0.0;
  for (double v : r) t += v;
  return t;
}

void record_failure(CheckResult& slot, Counterexample ce) {
  if (!slot.pass) return;
  slot.pass = false;
  slot.counterexample = std::move(ce);
}

}  // namespace

MeritReport check_merit_based(const MechanismSpec& spec, std::size_t samples,
                              std::uint64_t seed) {
  MeritReport rep;
  SplitMix64 rng(seed);
  constexpr double kTol = 1e-12;
  for (std::size_t it = 0; it < samples; ++it) {
    std::size_t n = sample_creator_count(spec, rng);

    // normality: a zero score earns exactly zero ...
    {
      auto s = descending_scores(rng, n);
      s[n - 1] = 0.0;
      double r = reward_of(spec, s, n - 1);
      if (r != 0.0)
        record_failure(rep.normality,
                       {s, {}, n - 1, 0.0, r, "zero score earned a reward"});
      // ... and a lone perfect score earns a positive one
      std::vector<double> lone(n, 0.0);
      lone[0] = 1.0;
      double rl = reward_of(spec, lone, 0);
      if (!(rl > 0.0))
        record_failure(rep.normality,
                       {lone, {}, 0, rl, rl, "lone perfect score earned nothing"});
    }

    // fairness: rewards nonincreasing down the ranking
    {
      auto s = descending_scores(rng, n);
      auto r = rewards(spec, make_score_profile(s));
      for (std::size_t p = 0; p + 1 < n; ++p)
        if (r[p + 1] > r[p] + kTol)
          record_failure(rep.fairness,
                         {s, {}, p + 1, r[p], r[p + 1],
                          "lower-ranked creator earned more"});
    }

    // negative externality, probed by the two elementary raises
    if (n >= 2) {
      auto s = descending_scores(rng, n);
      std::size_t pi = rng.uniform_index(n);
      double before = reward_of(spec, s, pi);

      std::size_t pj = rng.uniform_index(n);
      if (pj == pi) pj = (pj + 1) % n;
      double upper = (pj == 0) ? 1.0 : s[pj - 1];
      auto same_order = s;
      same_order[pj] = s[pj] + rng.uniform() * (upper - s[pj]);
      double after = reward_of(spec, same_order, pi);
      if (after > before + kTol)
        record_failure(rep.negative_externality,
                       {s, same_order, pi, before, after,
                        "same-order competitor raise increased reward"});

      if (pi + 1 < n) {
        double hi = (pi == 0) ? 1.0 : s[pi - 1];
        auto crossing = s;
        crossing[pi + 1] = s[pi] + rng.uniform() * (hi - s[pi]);
        double after_cross = reward_of(spec, crossing, pi);
        if (after_cross > before + kTol)
          record_failure(rep.negative_externality,
                         {s, crossing, pi, before, after_cross,
                          "order-crossing competitor raise increased reward"});
      }
    }
  }
  return rep;
}

CheckResult check_monotone(const MechanismSpec& spec, std::size_t samples,
                           std::uint64_t seed) {
  CheckResult res;
  SplitMix64 rng(seed);
  constexpr double kTol = 1e-12;
  auto probe = [&](const std::vector<double>& before,
                   const std::vector<double>& after) {
    double tb = total_reward(spec, before);
    double ta = total_reward(spec, after);
    if (ta < tb - kTol)
      record_failure(res, {before, after, 0, tb, ta, "total reward decreased"});
  };

  // canary probes: a lone leader joined by an equal rival
  std::size_t fixed = spec.fixed_creator_count();
  std::vector<std::size_t> sizes =
      fixed > 0 ? std::vector<std::size_t>{fixed}
                : std::vector<std::size_t>{2, 3, 5};
  for (std::size_t n : sizes) {
    if (spec.is_softmax() && n < spec.top_k) continue;
    std::vector<double> before(n, 0.0);
    before[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
      auto after = before;
      after[j] = 1.0;
      probe(before, after);
    }
  }

  for (std::size_t it = 0; it < samples; ++it) {
    std::size_t n = sample_creator_count(spec, rng);
    auto s = descending_scores(rng, n);
    std::size_t c = rng.uniform_index(n);
    auto after = s;
    after[c] = s[c] + rng.uniform() * (1.0 - s[c]);
    probe(s, after);
  }
  return res;
}

}  // namespace c3
