#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "c3/environments.hpp"
#include "c3/oracle.hpp"
#include "c3/reference.hpp"
#include "c3/rng.hpp"
#include "c3/welfare.hpp"

namespace {

using c3::GameInstance;
using c3::StrategyProfile;
using c3::Vec;

template <class F>
double best_ms(F&& body, int reps) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void print_row(const std::string& kernel, double serial_ms, double parallel_ms,
               bool match) {
  std::cout << std::left << std::setw(26) << kernel << std::right
            << std::fixed << std::setprecision(2) << std::setw(12) << serial_ms
            << std::setw(12) << parallel_ms << std::setw(10)
            << std::setprecision(2) << serial_ms / parallel_ms << std::setw(10)
            << (match ? "yes" : "NO") << "\n";
}

GameInstance finite_game(std::uint64_t seed, std::size_t n,
                         std::size_t actions, std::size_t m, std::size_t d) {
  c3::SplitMix64 rng(seed);
  std::vector<Vec> users(m);
  for (Vec& x : users) x = rng.unit_vector(d);
  GameInstance g;
  g.population = c3::UserPopulation::uniform(std::move(users));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec> members(actions);
    for (Vec& v : members) v = rng.unit_vector(d);
    g.action_spaces.push_back(c3::ActionSpace::finite_set(std::move(members)));
    g.costs.push_back(c3::CostSpec::zero());
  }
  g.score_fn = c3::ScoreFunctionSpec::shifted_inner_product();
  g.attention = c3::AttentionWeights::dcg(n, 3);
  g.mechanism = c3::shapley_mediator(n);
  return g;
}

bool same_report(const c3::EquilibriumReport& a,
                 const c3::EquilibriumReport& b) {
  if (a.ne_welfares != b.ne_welfares || a.max_welfare != b.max_welfare)
    return false;
  if (a.pnes.size() != b.pnes.size()) return false;
  for (std::size_t i = 0; i < a.pnes.size(); ++i)
    if (a.pnes[i].actions != b.pnes[i].actions) return false;
  return a.argmax_profiles.size() == b.argmax_profiles.size();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Timings for the parallel welfare/equilibrium kernels against the "
      "serial reference (results must match bitwise)"};
  std::size_t users = 20000;
  std::size_t creators = 10;
  int reps = 5;
  std::uint64_t seed = 7;
  app.add_option("--users", users, "population size for the welfare kernel");
  app.add_option("--creators", creators, "creators for the welfare kernel");
  app.add_option("--reps", reps, "repetitions (best-of timing)");
  app.add_option("--seed", seed, "instance seed");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (built without OpenMP)\n";
#endif

  c3::SyntheticSpec spec;
  spec.d = 16;
  spec.cluster_sizes = {users / 4, users / 4, users / 4,
                        users - 3 * (users / 4)};
  spec.creators = creators;
  spec.seed = seed;
  c3::Scenario sc = c3::make_synthetic(spec, c3::ScenarioVariant::g1(),
                                       c3::AttentionWeights::dcg(creators, 5));
  GameInstance g = sc.game;
  g.mechanism = c3::MechanismSpec::brcm(g.attention.r);
  c3::SplitMix64 rng(c3::mix_seed(seed, 0xBE));
  StrategyProfile prof;
  for (std::size_t i = 0; i < creators; ++i)
    prof.actions.emplace_back(rng.unit_vector(spec.d));

  std::cout << std::left << std::setw(26) << "kernel" << std::right
            << std::setw(12) << "serial ms" << std::setw(12) << "parallel ms"
            << std::setw(10) << "speedup" << std::setw(10) << "bitwise"
            << "\n";

  {
    const auto serial_val = c3::ref::expected_rewards(prof, g);
    const auto parallel_val = c3::expected_rewards(prof, g);
    const double s = best_ms([&] { c3::ref::expected_rewards(prof, g); }, reps);
    const double p = best_ms([&] { c3::expected_rewards(prof, g); }, reps);
    print_row("expected rewards", s, p, serial_val == parallel_val);
  }
  {
    const double serial_val = c3::ref::social_welfare_total(prof, g);
    const double parallel_val = c3::social_welfare_total(prof, g);
    const double s =
        best_ms([&] { c3::ref::social_welfare_total(prof, g); }, reps);
    const double p = best_ms([&] { c3::social_welfare_total(prof, g); }, reps);
    print_row("social welfare", s, p, serial_val == parallel_val);
  }
  {
    const double serial_val = c3::ref::potential(prof, g);
    const double parallel_val = c3::potential(prof, g);
    const double s = best_ms([&] { c3::ref::potential(prof, g); }, reps);
    const double p = best_ms([&] { c3::potential(prof, g); }, reps);
    print_row("potential", s, p, serial_val == parallel_val);
  }
  {
    const GameInstance fg = finite_game(seed, 5, 6, 64, 8);
    const auto serial_rep = c3::ref::enumerate_pne(fg);
    const auto parallel_rep = c3::enumerate_pne(fg);
    const double s = best_ms([&] { c3::ref::enumerate_pne(fg); }, reps);
    const double p = best_ms([&] { c3::enumerate_pne(fg); }, reps);
    print_row("equilibrium enumeration", s, p,
              same_report(serial_rep, parallel_rep));
  }
  return 0;
}
