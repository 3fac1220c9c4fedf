#include "c3/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "c3/csv.hpp"
#include "c3/welfare.hpp"

namespace c3 {

void OptimizerConfig::validate() const {
  if (!(mechanism_step >= 0.0) || !std::isfinite(mechanism_step))
    throw std::invalid_argument("optimizer: mechanism_step must be >= 0");
  if (!(creator_step >= 0.0) || !std::isfinite(creator_step))
    throw std::invalid_argument("optimizer: creator_step must be >= 0");
  if (initial_f.empty())
    throw std::invalid_argument("optimizer: initial_f required");
  for (std::size_t i = 0; i < initial_f.size(); ++i) {
    if (!std::isfinite(initial_f[i]) || initial_f[i] < 0.0)
      throw std::invalid_argument("optimizer: initial_f must be >= 0");
    if (i > 0 && initial_f[i] > initial_f[i - 1])
      throw std::invalid_argument("optimizer: initial_f must be nonincreasing");
  }
}

std::vector<double> project_to_polytope(std::vector<double> f) {
  if (f.empty()) throw std::invalid_argument("projection: empty vector");
  for (double v : f)
    if (!std::isfinite(v))
      throw std::invalid_argument("projection: non-finite coordinate");
  // pool adjacent violators, nonincreasing target
  std::vector<double> sum, cnt;
  for (double v : f) {
    sum.push_back(v);
    cnt.push_back(1.0);
    while (sum.size() > 1) {
      std::size_t k = sum.size() - 1;
      if (sum[k - 1] / cnt[k - 1] >= sum[k] / cnt[k]) break;
      sum[k - 1] += sum[k];
      cnt[k - 1] += cnt[k];
      sum.pop_back();
      cnt.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(f.size());
  for (std::size_t b = 0; b < sum.size(); ++b) {
    double mean = sum[b] / cnt[b];
    if (mean < 0.0) mean = 0.0;
    for (long k = 0; k < static_cast<long>(cnt[b]); ++k) out.push_back(mean);
  }
  return out;
}

OptimizeResult optimize_brcm(const GameInstance& g, StrategyProfile init,
                             const OptimizerConfig& cfg) {
  cfg.validate();
  g.validate();
  validate_profile(g, init);
  if (g.mech().kind != MechanismKind::Brcm)
    throw std::invalid_argument("optimizer: game mechanism must be brcm");
  const std::size_t n = g.creator_count();
  if (cfg.initial_f.size() != n)
    throw std::invalid_argument("optimizer: initial_f length must equal n");

  GameInstance work = g;
  SplitMix64 rng(cfg.seed);

  std::vector<double> f = cfg.initial_f;
  work.mechanism = MechanismSpec::brcm(f);
  double w_cur = social_welfare_total(init, work);

  OptimizeResult res;
  res.best_f = f;
  res.best_welfare = w_cur;

  for (std::uint64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::size_t coord = rng.uniform_index(n);
    int sign = rng.coin() ? 1 : -1;
    std::vector<double> f_half = f;
    f_half[coord] += sign * cfg.mechanism_step;
    f_half = project_to_polytope(std::move(f_half));

    work.mechanism = MechanismSpec::brcm(f_half);
    detail::sim_stra_steps(work, init, cfg.inner_steps, cfg.creator_step, rng,
                           /*literal_order=*/false);
    double w_new = social_welfare_total(init, work);

    bool accepted = w_new > w_cur;
    if (accepted) f = f_half;
    if (w_new > res.best_welfare) {
      res.best_welfare = w_new;
      res.best_f = f_half;
    }
    res.log.push_back({epoch, coord, sign, accepted, w_new, f});
    w_cur = w_new;  // the profile advances regardless of the f decision
  }

  res.final_f = std::move(f);
  res.final_profile = std::move(init);
  return res;
}

std::string OptimizeResult::log_to_csv() const {
  std::string out;
  std::size_t n = final_f.size();
  std::vector<std::string> header = {"epoch", "coordinate", "sign", "accepted",
                                     "welfare"};
  for (std::size_t i = 0; i < n; ++i) header.push_back("f_" + std::to_string(i));
  out += csv::join_row(header);
  for (const EpochRecord& e : log) {
    std::vector<std::string> row = {
        std::to_string(e.epoch), std::to_string(e.coordinate),
        std::to_string(e.sign), e.accepted ? "1" : "0", csv::fmt(e.welfare)};
    for (double v : e.f) row.push_back(csv::fmt(v));
    out += csv::join_row(row);
  }
  return out;
}

}  // namespace c3
