#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "c3/dynamics.hpp"
#include "c3/environments.hpp"
#include "c3/game.hpp"
#include "c3/optimizer.hpp"
#include "c3/welfare.hpp"

namespace c3 {

struct AttentionConfig {
  enum class Kind { Dcg, Explicit };
  Kind kind = Kind::Dcg;
  std::size_t k = 5;      // Dcg: positions with nonzero attention
  std::vector<double> r;  // Explicit
};

AttentionWeights build_attention(const AttentionConfig& cfg, std::size_t n);

struct EnvironmentConfig {
  std::string type = "synthetic";  // tvn | synthetic | embeddings | population
  std::string variant = "g1";      // g1: zero costs; g2: quadratic costs
  double lambda = 0.5;
  SyntheticSpec synthetic;  // per-run seed is derived, the field is ignored
  std::optional<std::size_t> declared_users;  // must match sum(cluster_sizes)
  std::size_t tvn_n = 3;
  EmbeddingIngestSpec embeddings;
  std::string population_file;
  std::size_t creators = 10;  // embeddings / population
};

/// One mechanism cell of an experiment: a preset label, an explicit inline
/// spec, or the bi-level optimizer marker ("brcm-opt").
struct MechanismEntry {
  std::string label;
  bool optimize = false;
  std::optional<MechanismSpec> spec;  // parsed inline spec, if given
};

struct ExperimentConfig {
  EnvironmentConfig environment;
  AttentionConfig attention;
  std::vector<MechanismEntry> mechanisms;
  DynamicsConfig dynamics;    // per-cell seeds are derived; cfg.seed is ignored
  OptimizerConfig optimizer;  // same; initial_f empty = default head-of-ones
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string output_dir = "out";

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load_file(const std::string& path);
};

nlohmann::json mechanism_to_json(const MechanismSpec& spec);
MechanismSpec mechanism_from_json(const nlohmann::json& j);

/// Resolves a preset label ("m3-zero", "m3-exposure", "m3-engagement",
/// "brcm-star", "brcm-1", "brcm-opt", "shapley") for a game with n creators
/// ranked by attention r. Softmax presets use K = min(5, n), beta = 0.05.
/// "brcm-opt" resolves to its starting rule; the entry's `optimize` flag is
/// what makes the harness run the optimizer.
MechanismSpec resolve_mechanism(const MechanismEntry& entry, std::size_t n,
                                const AttentionWeights& r,
                                const OptimizerConfig& opt_cfg);

/// Default optimizer start: ones on the first min(5, n) coordinates.
std::vector<double> default_initial_f(std::size_t n);

/// Builds the per-seed scenario. Environment randomness is derived from the
/// run seed, so every mechanism cell of a seed shares one game.
Scenario build_scenario(const ExperimentConfig& cfg, std::uint64_t seed);

// Derived-stream salts: one base seed per run, distinct streams per stage.
inline constexpr std::uint64_t kEnvSalt = 0xE1;
inline constexpr std::uint64_t kDynSalt = 0xD1;
inline constexpr std::uint64_t kOptSalt = 0x0F;

struct CellResult {
  std::string mechanism;
  std::uint64_t seed = 0;
  WelfareReport report;        // at the final profile
  std::uint64_t accepted = 0;  // accepted better-response moves
  std::optional<double> best_opt_welfare;  // optimizer cells only
};

/// Per-seed rows for every mechanism, then per-mechanism "mean"/"std" rows
/// (population std over seeds). Group columns follow the labels of `groups`.
std::string summary_csv(const std::vector<CellResult>& cells,
                        const std::vector<int>& groups);

int cmd_gen_synth(const ExperimentConfig& cfg, std::uint64_t seed,
                  std::ostream& log);
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log);
int cmd_optimize(const ExperimentConfig& cfg, std::ostream& log);
/// Equilibrium structure sweep (n in {3,4,5} x K in {1,2} x mechanisms) plus
/// randomized mechanism-property audits; returns nonzero on any failure.
int cmd_verify(std::uint64_t budget, std::uint64_t seed, std::ostream& log);
/// Recomputes per-mechanism aggregates from a summary.csv written by
/// cmd_simulate and prints them.
int cmd_report(const std::string& summary_path, std::ostream& out);

}  // namespace c3
