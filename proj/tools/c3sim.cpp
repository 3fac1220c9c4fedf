#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "c3/harness.hpp"

namespace {

c3::ExperimentConfig load_config(const std::string& config_path,
                                 const std::string& out_dir,
                                 const std::vector<std::uint64_t>& seeds) {
  c3::ExperimentConfig cfg =
      config_path.empty()
          ? c3::ExperimentConfig::from_json(nlohmann::json::object())
          : c3::ExperimentConfig::load_file(config_path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (!seeds.empty()) cfg.seeds = seeds;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulation and verification toolkit for content-creator competition "
      "under platform reward mechanisms"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string summary_path;
  std::vector<std::uint64_t> seeds;
  std::uint64_t seed = 1;
  std::uint64_t budget = 10'000'000;

  CLI::App* gen = app.add_subcommand(
      "gen-synth", "Generate a clustered synthetic population and write "
                   "population.csv + instance.json");
  gen->add_option("--config", config_path, "experiment config (JSON)");
  gen->add_option("--seed", seed, "run seed for the environment draw");
  gen->add_option("--out", out_dir, "output directory override");

  CLI::App* sim = app.add_subcommand(
      "simulate", "Run better-response dynamics for every (mechanism, seed) "
                  "cell and write trajectories + summary.csv");
  sim->add_option("--config", config_path, "experiment config (JSON)");
  sim->add_option("--out", out_dir, "output directory override");
  sim->add_option("--seeds", seeds, "seed list override");

  CLI::App* opt = app.add_subcommand(
      "optimize", "Search for a welfare-maximizing constant backward rule "
                  "and write epoch logs + optimized_f.json");
  opt->add_option("--config", config_path, "experiment config (JSON)");
  opt->add_option("--out", out_dir, "output directory override");
  opt->add_option("--seeds", seeds, "seed list override");

  CLI::App* ver = app.add_subcommand(
      "verify", "Check equilibrium structure against closed forms and audit "
                "mechanism properties on random rules");
  ver->add_option("--budget", budget,
                  "profile-deviation check budget for exhaustive search");
  std::uint64_t verify_seed = 20260814;
  ver->add_option("--seed", verify_seed, "seed for the randomized audits");

  CLI::App* rep = app.add_subcommand(
      "report", "Recompute per-mechanism aggregates from a summary.csv");
  rep->add_option("summary", summary_path, "path to summary.csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return c3::cmd_gen_synth(load_config(config_path, out_dir, seeds), seed,
                               std::cout);
    if (sim->parsed())
      return c3::cmd_simulate(load_config(config_path, out_dir, seeds),
                              std::cout);
    if (opt->parsed())
      return c3::cmd_optimize(load_config(config_path, out_dir, seeds),
                              std::cout);
    if (ver->parsed()) return c3::cmd_verify(budget, verify_seed, std::cout);
    if (rep->parsed()) return c3::cmd_report(summary_path, std::cout);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
