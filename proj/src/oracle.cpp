#include "c3/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "c3/mechanism.hpp"
#include "c3/welfare.hpp"

namespace c3 {
namespace {

constexpr std::uint64_t kParallelProfiles = 256;

struct Layout {
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> strides;  // creator 0 most significant
  std::uint64_t total = 1;
  std::uint64_t deviations_per_profile = 0;
};

Layout make_layout(const GameInstance& g, std::uint64_t budget) {
  Layout lay;
  const std::size_t n = g.creator_count();
  lay.sizes.resize(n);
  lay.strides.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.action_spaces[i].kind != ActionSpaceKind::FiniteSet) {
      throw std::invalid_argument(
          "enumerate_pne: creator " + std::to_string(i) +
          " has a continuous action space; exhaustive search needs finite "
          "sets");
    }
    lay.sizes[i] = g.action_spaces[i].members.size();
    if (lay.sizes[i] == 0) {
      throw std::invalid_argument("enumerate_pne: empty action set");
    }
    lay.deviations_per_profile += lay.sizes[i] - 1;
  }
  std::uint64_t acc = 1;
  for (std::size_t i = n; i-- > 0;) {
    lay.strides[i] = acc;
    if (acc > budget / lay.sizes[i]) {
      throw std::invalid_argument(
          "enumerate_pne: profile count alone exceeds the check budget");
    }
    acc *= lay.sizes[i];
  }
  lay.total = acc;
  const unsigned __int128 checks =
      static_cast<unsigned __int128>(lay.total) *
      std::max<std::uint64_t>(lay.deviations_per_profile, 1);
  if (checks > budget) {
    std::ostringstream msg;
    msg << "enumerate_pne: " << lay.total << " profiles x "
        << lay.deviations_per_profile << " deviations exceeds budget "
        << budget;
    throw std::invalid_argument(msg.str());
  }
  return lay;
}

void decode(const Layout& lay, std::uint64_t idx, std::size_t* out) {
  for (std::size_t i = 0; i < lay.sizes.size(); ++i) {
    out[i] = static_cast<std::size_t>((idx / lay.strides[i]) % lay.sizes[i]);
  }
}

struct Tables {
  std::size_t n = 0;
  std::size_t m = 0;
  // scores[i][a * m + j] = matching score of creator i's a-th action on user j
  std::vector<std::vector<double>> scores;
  std::vector<std::vector<double>> costs;  // costs[i][a]
};

Tables make_tables(const GameInstance& g) {
  Tables t;
  t.n = g.creator_count();
  t.m = g.population.users.size();
  t.scores.resize(t.n);
  t.costs.resize(t.n);
  for (std::size_t i = 0; i < t.n; ++i) {
    const auto& members = g.action_spaces[i].members;
    t.scores[i].resize(members.size() * t.m);
    t.costs[i].resize(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t j = 0; j < t.m; ++j) {
        t.scores[i][a * t.m + j] =
            score(members[a], g.population.users[j], g.score_fn);
      }
      t.costs[i][a] = g.costs[i](members[a]);
    }
  }
  return t;
}

// Utilities and social welfare of one profile. Accumulation order (users
// ascending, then creators ascending) matches the welfare kernels so the two
// paths agree bitwise.
void eval_profile(const GameInstance& g, const Tables& t,
                  const std::size_t* a, double* u, double* welfare) {
  const MechanismSpec& mech = g.mech();
  std::fill(u, u + t.n, 0.0);
  double user_side = 0.0;
  Vec scores(t.n);
  for (std::size_t j = 0; j < t.m; ++j) {
    for (std::size_t i = 0; i < t.n; ++i) {
      scores[i] = t.scores[i][a[i] * t.m + j];
    }
    const ScoreProfile sp = make_score_profile(scores);
    const Vec rew = rewards(mech, sp);
    const double wj = g.population.weights[j];
    for (std::size_t i = 0; i < t.n; ++i) u[i] += wj * rew[i];
    user_side += wj * user_welfare(sp, g.attention);
  }
  double total_cost = 0.0;
  for (std::size_t i = 0; i < t.n; ++i) total_cost += t.costs[i][a[i]];
  for (std::size_t i = 0; i < t.n; ++i) u[i] -= t.costs[i][a[i]];
  *welfare = user_side - total_cost;
}

StrategyProfile profile_from_indices(const std::size_t* a, std::size_t n) {
  StrategyProfile s;
  s.actions.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.actions[i] = a[i];
  return s;
}

}  // namespace

EquilibriumReport enumerate_pne(const GameInstance& g,
                                const OracleOptions& opt) {
  g.validate();
  const MechanismSpec& mech = g.mech();
  (void)mech;
  const Layout lay = make_layout(g, opt.budget);
  const Tables tables = make_tables(g);
  const std::size_t n = tables.n;
  const auto total = static_cast<std::int64_t>(lay.total);

  std::vector<double> utilities(lay.total * n);
  std::vector<double> welfares(lay.total);
#pragma omp parallel for schedule(static) if (lay.total >= kParallelProfiles)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::vector<std::size_t> a(n);
    decode(lay, static_cast<std::uint64_t>(idx), a.data());
    eval_profile(g, tables, a.data(),
                 utilities.data() + static_cast<std::size_t>(idx) * n,
                 &welfares[static_cast<std::size_t>(idx)]);
  }

  std::vector<char> is_pne(lay.total, 1);
#pragma omp parallel for schedule(static) if (lay.total >= kParallelProfiles)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::vector<std::size_t> a(n);
    decode(lay, static_cast<std::uint64_t>(idx), a.data());
    const double* u = utilities.data() + static_cast<std::size_t>(idx) * n;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const std::uint64_t base =
          static_cast<std::uint64_t>(idx) - a[i] * lay.strides[i];
      for (std::size_t alt = 0; alt < lay.sizes[i]; ++alt) {
        if (alt == a[i]) continue;
        const std::uint64_t nb = base + alt * lay.strides[i];
        if (utilities[nb * n + i] > u[i] + opt.tolerance) {
          ok = false;
          break;
        }
      }
    }
    is_pne[static_cast<std::size_t>(idx)] = ok ? 1 : 0;
  }

  EquilibriumReport rep;
  rep.max_welfare = -std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < lay.total; ++idx) {
    rep.max_welfare = std::max(rep.max_welfare, welfares[idx]);
  }
  std::vector<std::size_t> a(n);
  for (std::uint64_t idx = 0; idx < lay.total; ++idx) {
    if (is_pne[idx]) {
      decode(lay, idx, a.data());
      rep.pnes.push_back(profile_from_indices(a.data(), n));
      rep.ne_welfares.push_back(welfares[idx]);
    }
    if (welfares[idx] == rep.max_welfare) {
      decode(lay, idx, a.data());
      rep.argmax_profiles.push_back(profile_from_indices(a.data(), n));
    }
  }
  if (rep.ne_welfares.empty()) {
    rep.ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double worst =
        *std::min_element(rep.ne_welfares.begin(), rep.ne_welfares.end());
    rep.ratio = worst / rep.max_welfare;
  }
  return rep;
}

TvnClosedForms tvn_closed_forms(std::size_t n, const AttentionWeights& r) {
  if (n < 2) throw std::invalid_argument("tvn_closed_forms: need n >= 2");
  if (r.r.size() != n) {
    throw std::invalid_argument(
        "tvn_closed_forms: attention length must equal creator count");
  }
  (void)AttentionWeights::validated(r.r);  // reject non-monotone weights
  if (!(r.r[0] > 0.0)) {
    throw std::invalid_argument("tvn_closed_forms: top attention must be > 0");
  }
  std::size_t k = 0;
  while (k < n && r.r[k] > 0.0) ++k;
  const double dn = static_cast<double>(n);
  const double denom = 2.0 * dn;
  TvnClosedForms cf;
  double prefix = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 1; q <= k; ++q) {
    prefix += r.r[q - 1];
    const double cand =
        ((dn + 1.0) * prefix + (dn - static_cast<double>(q)) * r.r[0]) / denom;
    best = std::max(best, cand);
  }
  cf.ne_welfare = (dn + 1.0) * prefix / denom;
  cf.max_welfare = best;
  cf.ratio = cf.ne_welfare / cf.max_welfare;
  return cf;
}

Theorem1Report verify_theorem1(std::size_t n, const AttentionWeights& r,
                               const MechanismSpec& mech,
                               std::uint64_t budget) {
  GameInstance g = make_tvn(n, r);
  g.mechanism = mech;
  OracleOptions opt;
  opt.tolerance = mech.is_softmax() ? 1e-9 : 1e-12;
  opt.budget = budget;
  const EquilibriumReport rep = enumerate_pne(g, opt);
  const TvnClosedForms cf = tvn_closed_forms(n, r);

  Theorem1Report out;
  out.expected = cf;
  out.max_welfare = rep.max_welfare;
  out.ratio = rep.ratio;
  out.unique_pne = rep.pnes.size() == 1;
  std::ostringstream detail;
  if (!out.unique_pne) detail << "expected 1 PNE, found " << rep.pnes.size();
  if (out.unique_pne) {
    out.pne_is_all_majority = true;
    for (const Action& act : rep.pnes[0].actions) {
      if (std::get<std::size_t>(act) != 0) out.pne_is_all_majority = false;
    }
    if (!out.pne_is_all_majority) detail << "; PNE is not the majority profile";
    out.ne_welfare = rep.ne_welfares[0];
    out.ne_welfare_match = std::abs(out.ne_welfare - cf.ne_welfare) <= 1e-9;
    if (!out.ne_welfare_match) {
      detail << "; NE welfare " << out.ne_welfare << " vs closed form "
             << cf.ne_welfare;
    }
  }
  out.max_welfare_match = std::abs(rep.max_welfare - cf.max_welfare) <= 1e-9;
  if (!out.max_welfare_match) {
    detail << "; max welfare " << rep.max_welfare << " vs closed form "
           << cf.max_welfare;
  }
  out.ratio_below_one = !rep.ne_welfares.empty() && rep.ratio < 1.0;
  if (!out.ratio_below_one) detail << "; welfare ratio not below 1";
  out.pass = out.unique_pne && out.pne_is_all_majority &&
             out.ne_welfare_match && out.max_welfare_match &&
             out.ratio_below_one;
  out.detail = detail.str();
  return out;
}

Corollary1Report verify_corollary1(std::size_t n, const AttentionWeights& r,
                                   std::uint64_t budget) {
  GameInstance g = make_tvn(n, r);
  g.mechanism = MechanismSpec::brcm(r.r);
  OracleOptions opt;
  opt.tolerance = 1e-12;
  opt.budget = budget;
  const EquilibriumReport rep = enumerate_pne(g, opt);

  Corollary1Report out;
  out.pne_count = rep.pnes.size();
  out.max_welfare = rep.max_welfare;
  out.has_pne = !rep.pnes.empty();
  out.all_pne_attain_max = out.has_pne;
  std::ostringstream detail;
  if (!out.has_pne) detail << "no PNE found";
  for (std::size_t i = 0; i < rep.ne_welfares.size(); ++i) {
    if (std::abs(rep.ne_welfares[i] - rep.max_welfare) > 1e-12) {
      out.all_pne_attain_max = false;
      detail << "; PNE " << i << " welfare " << rep.ne_welfares[i]
             << " below max " << rep.max_welfare;
      break;
    }
  }
  out.pass = out.has_pne && out.all_pne_attain_max;
  out.detail = detail.str();
  return out;
}

}  // namespace c3
