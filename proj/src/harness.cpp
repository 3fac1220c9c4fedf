#include "c3/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "c3/csv.hpp"
#include "c3/fuzz.hpp"
#include "c3/mechanism.hpp"
#include "c3/oracle.hpp"
#include "c3/reference.hpp"
#include "c3/welfare.hpp"

namespace c3 {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void apply_environment_preset(EnvironmentConfig& env, const std::string& p) {
  if (p == "synthetic-g1") {
    env.type = "synthetic";
    env.variant = "g1";
    env.lambda = 0.0;
  } else if (p == "synthetic-g2") {
    env.type = "synthetic";
    env.variant = "g2";
    env.lambda = 0.5;
  } else if (p == "movielens-g1") {
    env.type = "embeddings";
    env.variant = "g1";
    env.lambda = 0.0;
    env.embeddings.d = 32;
  } else if (p == "movielens-g2") {
    env.type = "embeddings";
    env.variant = "g2";
    env.lambda = 10.0;
    env.embeddings.d = 32;
  } else {
    throw std::invalid_argument("unknown environment preset: " + p);
  }
}

std::string file_label(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
      c = '-';
  }
  return out;
}

std::vector<int> sorted_groups(const UserPopulation& pop) {
  std::set<int> s(pop.group_labels.begin(), pop.group_labels.end());
  return {s.begin(), s.end()};
}

Vec heaviest_group_center(const UserPopulation& pop) {
  const std::size_t d = pop.dim();
  Vec acc(d, 0.0);
  if (pop.group_labels.empty()) {
    for (std::size_t j = 0; j < pop.size(); ++j)
      for (std::size_t k = 0; k < d; ++k)
        acc[k] += pop.weights[j] * pop.users[j][k];
    return normalized(std::move(acc));
  }
  std::map<int, double> mass;
  for (std::size_t j = 0; j < pop.size(); ++j)
    mass[pop.group_labels[j]] += pop.weights[j];
  int best = mass.begin()->first;
  for (const auto& [gl, w] : mass)
    if (w > mass[best]) best = gl;
  for (std::size_t j = 0; j < pop.size(); ++j)
    if (pop.group_labels[j] == best)
      for (std::size_t k = 0; k < d; ++k)
        acc[k] += pop.weights[j] * pop.users[j][k];
  return normalized(std::move(acc));
}

ScenarioVariant variant_of(const EnvironmentConfig& env) {
  if (env.variant == "g1") return ScenarioVariant::g1();
  if (env.variant == "g2") return ScenarioVariant::g2(env.lambda);
  throw std::invalid_argument("unknown variant (expected g1 or g2): " +
                              env.variant);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  if (v.empty()) return kNaN;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

AttentionWeights build_attention(const AttentionConfig& cfg, std::size_t n) {
  if (cfg.kind == AttentionConfig::Kind::Dcg)
    return AttentionWeights::dcg(n, cfg.k);
  if (cfg.r.size() != n)
    throw std::invalid_argument(
        "attention: explicit weights need one entry per creator (got " +
        std::to_string(cfg.r.size()) + ", need " + std::to_string(n) + ")");
  return AttentionWeights::validated(cfg.r);
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.environment.synthetic.cluster_sizes = {20, 10, 8, 5, 3, 3, 2, 1};
  cfg.dynamics.horizon = 1000;
  cfg.dynamics.step = 0.1;
  cfg.dynamics.record_every = 10;
  cfg.optimizer.epochs = 200;
  cfg.optimizer.inner_steps = 5;
  cfg.optimizer.mechanism_step = 0.1;
  cfg.optimizer.creator_step = 0.1;

  if (j.contains("environment")) {
    const json& e = j.at("environment");
    EnvironmentConfig& env = cfg.environment;
    if (e.contains("preset"))
      apply_environment_preset(env, e.at("preset").get<std::string>());
    env.type = e.value("type", env.type);
    env.variant = e.value("variant", env.variant);
    env.lambda = e.value("lambda", env.lambda);
    env.creators = e.value("creators", env.creators);
    env.tvn_n = e.value("n", env.tvn_n);
    SyntheticSpec& sp = env.synthetic;
    sp.d = e.value("dim", sp.d);
    sp.noise = e.value("noise", sp.noise);
    if (e.contains("cluster_sizes"))
      sp.cluster_sizes = e.at("cluster_sizes").get<std::vector<std::size_t>>();
    sp.creators = env.creators;
    if (e.contains("users"))
      env.declared_users = e.at("users").get<std::size_t>();
    EmbeddingIngestSpec& em = env.embeddings;
    em.user_file = e.value("user_file", em.user_file);
    em.item_file = e.value("item_file", em.item_file);
    em.d = e.value("dim", em.d);
    em.scale = e.value("score_scale", em.scale);
    em.offset = e.value("score_offset", em.offset);
    em.rating_cutoff = e.value("rating_cutoff", em.rating_cutoff);
    em.max_high_ratings = e.value("max_high_ratings", em.max_high_ratings);
    env.population_file = e.value("population_file", env.population_file);
  }
  cfg.environment.synthetic.creators = cfg.environment.creators;

  if (j.contains("attention")) {
    const json& a = j.at("attention");
    const std::string kind =
        a.value("kind", a.contains("r") ? "explicit" : "dcg");
    if (kind == "dcg") {
      cfg.attention.kind = AttentionConfig::Kind::Dcg;
      cfg.attention.k = a.value("k", std::size_t{5});
    } else if (kind == "explicit") {
      cfg.attention.kind = AttentionConfig::Kind::Explicit;
      cfg.attention.r = a.at("r").get<std::vector<double>>();
    } else {
      throw std::invalid_argument("unknown attention kind: " + kind);
    }
  }

  if (j.contains("mechanisms")) {
    for (const json& mj : j.at("mechanisms")) {
      MechanismEntry entry;
      if (mj.is_string()) {
        entry.label = mj.get<std::string>();
        entry.optimize = entry.label == "brcm-opt";
      } else if (mj.is_object() && mj.contains("kind")) {
        entry.spec = mechanism_from_json(mj);
        entry.label = mj.value("label", entry.spec->name());
      } else {
        throw std::invalid_argument(
            "mechanism entries are preset names or objects with a \"kind\"");
      }
      cfg.mechanisms.push_back(std::move(entry));
    }
  } else {
    for (const char* name : {"brcm-star", "brcm-1", "m3-zero", "m3-exposure",
                             "m3-engagement"})
      cfg.mechanisms.push_back({name, false, std::nullopt});
  }

  if (j.contains("dynamics")) {
    const json& d = j.at("dynamics");
    cfg.dynamics.horizon = d.value("horizon", cfg.dynamics.horizon);
    cfg.dynamics.step = d.value("step", cfg.dynamics.step);
    cfg.dynamics.record_every =
        d.value("record_every", cfg.dynamics.record_every);
    cfg.dynamics.literal_pseudocode_order = d.value(
        "literal_pseudocode_order", cfg.dynamics.literal_pseudocode_order);
  }
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    cfg.optimizer.epochs = o.value("epochs", cfg.optimizer.epochs);
    cfg.optimizer.inner_steps =
        o.value("inner_steps", cfg.optimizer.inner_steps);
    cfg.optimizer.mechanism_step =
        o.value("mechanism_step", cfg.optimizer.mechanism_step);
    cfg.optimizer.creator_step =
        o.value("creator_step", cfg.optimizer.creator_step);
    if (o.contains("initial_f"))
      cfg.optimizer.initial_f = o.at("initial_f").get<std::vector<double>>();
  }

  if (j.contains("seeds")) {
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  } else if (j.contains("seed_count")) {
    const auto count = j.at("seed_count").get<std::uint64_t>();
    const auto base = j.value("seed_base", std::uint64_t{1});
    cfg.seeds.clear();
    for (std::uint64_t i = 0; i < count; ++i) cfg.seeds.push_back(base + i);
  }
  if (cfg.seeds.empty())
    throw std::invalid_argument("config: at least one seed is required");
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  in >> j;
  return from_json(j);
}

json mechanism_to_json(const MechanismSpec& spec) {
  switch (spec.kind) {
    case MechanismKind::M3Zero:
      return json{{"kind", "m3-zero"}};
    case MechanismKind::M3Exposure:
      return json{
          {"kind", "m3-exposure"}, {"top_k", spec.top_k}, {"beta", spec.beta}};
    case MechanismKind::M3Engagement:
      return json{{"kind", "m3-engagement"},
                  {"top_k", spec.top_k},
                  {"beta", spec.beta}};
    case MechanismKind::Brcm:
      return json{{"kind", "brcm"}, {"f", spec.brcm_f}};
    case MechanismKind::Brm: {
      json fs = json::array();
      for (const PiecewiseConstantFn& f : spec.brm_f)
        fs.push_back(
            json{{"breakpoints", f.breakpoints}, {"values", f.values}});
      return json{{"kind", "brm"}, {"f", fs}};
    }
  }
  throw std::logic_error("mechanism_to_json: unhandled kind");
}

MechanismSpec mechanism_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "m3-zero") return MechanismSpec::m3_zero();
  if (kind == "m3-exposure")
    return MechanismSpec::m3_exposure(j.value("top_k", std::size_t{5}),
                                      j.value("beta", 0.05));
  if (kind == "m3-engagement")
    return MechanismSpec::m3_engagement(j.value("top_k", std::size_t{5}),
                                        j.value("beta", 0.05));
  if (kind == "brcm")
    return MechanismSpec::brcm(j.at("f").get<std::vector<double>>());
  if (kind == "brm") {
    std::vector<PiecewiseConstantFn> f;
    for (const json& fj : j.at("f")) {
      PiecewiseConstantFn fn;
      fn.breakpoints = fj.at("breakpoints").get<std::vector<double>>();
      fn.values = fj.at("values").get<std::vector<double>>();
      f.push_back(std::move(fn));
    }
    return MechanismSpec::brm(std::move(f));
  }
  if (kind == "shapley")
    return shapley_mediator(j.at("n").get<std::size_t>());
  throw std::invalid_argument("unknown mechanism kind: " + kind);
}

std::vector<double> default_initial_f(std::size_t n) {
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < std::min<std::size_t>(5, n); ++i) f[i] = 1.0;
  return f;
}

MechanismSpec resolve_mechanism(const MechanismEntry& entry, std::size_t n,
                                const AttentionWeights& r,
                                const OptimizerConfig& opt_cfg) {
  if (entry.spec) return *entry.spec;
  const std::string& label = entry.label;
  const std::size_t k = std::min<std::size_t>(5, n);
  if (label == "m3-zero") return MechanismSpec::m3_zero();
  if (label == "m3-exposure") return MechanismSpec::m3_exposure(k, 0.05);
  if (label == "m3-engagement") return MechanismSpec::m3_engagement(k, 0.05);
  if (label == "brcm-star") return MechanismSpec::brcm(r.r);
  if (label == "brcm-1") {
    std::vector<double> f(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) f[i] = 1.0 / static_cast<double>(i + 1);
    return MechanismSpec::brcm(std::move(f));
  }
  if (label == "shapley") return shapley_mediator(n);
  if (label == "brcm-opt")
    return MechanismSpec::brcm(opt_cfg.initial_f.empty()
                                   ? default_initial_f(n)
                                   : opt_cfg.initial_f);
  throw std::invalid_argument("unknown mechanism preset: " + label);
}

Scenario build_scenario(const ExperimentConfig& cfg, std::uint64_t seed) {
  const EnvironmentConfig& env = cfg.environment;
  const std::uint64_t env_seed = mix_seed(seed, kEnvSalt);
  if (env.type == "tvn") {
    Scenario sc;
    sc.game = make_tvn(env.tvn_n, build_attention(cfg.attention, env.tvn_n));
    sc.initial_profile.actions.assign(env.tvn_n, Action{std::size_t{0}});
    return sc;
  }
  const ScenarioVariant var = variant_of(env);
  if (env.type == "synthetic") {
    SyntheticSpec sp = env.synthetic;
    sp.seed = env_seed;
    return make_synthetic(sp, var, build_attention(cfg.attention, sp.creators));
  }
  if (env.type == "embeddings") {
    return ingest_embeddings(env.embeddings, var, env.creators, env_seed,
                             build_attention(cfg.attention, env.creators));
  }
  if (env.type == "population") {
    UserPopulation pop = read_population_csv(env.population_file);
    const std::size_t n = env.creators;
    const std::size_t d = pop.dim();
    Scenario sc;
    sc.game.population = std::move(pop);
    sc.game.score_fn = ScoreFunctionSpec::shifted_inner_product();
    sc.game.attention = build_attention(cfg.attention, n);
    sc.game.action_spaces.assign(n, ActionSpace::continuous_sphere(d));
    if (!var.quadratic) {
      sc.game.costs.assign(n, CostSpec::zero());
      const Vec center = heaviest_group_center(sc.game.population);
      sc.initial_profile.actions.assign(n, Action{center});
    } else {
      SplitMix64 rng(env_seed);
      for (std::size_t i = 0; i < n; ++i) {
        Vec c = sc.game.population.users[rng.uniform_index(
            sc.game.population.size())];
        sc.game.costs.push_back(CostSpec::quadratic(var.lambda, c));
        sc.initial_profile.actions.emplace_back(std::move(c));
      }
    }
    return sc;
  }
  throw std::invalid_argument("unknown environment type: " + env.type);
}

std::string summary_csv(const std::vector<CellResult>& cells,
                        const std::vector<int>& groups) {
  std::vector<std::string> header = {"mechanism",  "seed",
                                     "final_welfare", "user_side",
                                     "total_cost", "accepted",
                                     "opt_best_welfare"};
  for (int gl : groups) header.push_back("group_" + std::to_string(gl));
  std::string out = csv::join_row(header);

  const auto numeric_row = [&](const CellResult& c) {
    std::vector<double> v = {c.report.total_welfare, c.report.user_side,
                             c.report.total_cost,
                             static_cast<double>(c.accepted),
                             c.best_opt_welfare.value_or(kNaN)};
    for (int gl : groups) {
      const auto it = c.report.per_group_mean_user_utility.find(gl);
      v.push_back(it == c.report.per_group_mean_user_utility.end() ? kNaN
                                                                   : it->second);
    }
    return v;
  };
  const auto emit = [&](const std::string& mech, const std::string& seed,
                        const std::vector<double>& vals) {
    std::vector<std::string> f = {mech, seed};
    for (double v : vals) f.push_back(csv::fmt(v));
    out += csv::join_row(f);
  };

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::vector<double>>> by_mech;
  for (const CellResult& c : cells) {
    const std::vector<double> row = numeric_row(c);
    emit(c.mechanism, std::to_string(c.seed), row);
    if (!by_mech.count(c.mechanism)) order.push_back(c.mechanism);
    by_mech[c.mechanism].push_back(row);
  }
  for (const std::string& mech : order) {
    const auto& rows = by_mech[mech];
    std::vector<double> mean(rows.front().size()), sd(rows.front().size());
    for (std::size_t k = 0; k < mean.size(); ++k) {
      std::vector<double> col;
      col.reserve(rows.size());
      for (const auto& r : rows) col.push_back(r[k]);
      mean[k] = mean_of(col);
      sd[k] = std_of(col, mean[k]);
    }
    emit(mech, "mean", mean);
    emit(mech, "std", sd);
  }
  return out;
}

int cmd_gen_synth(const ExperimentConfig& cfg, std::uint64_t seed,
                  std::ostream& log) {
  if (cfg.environment.type != "synthetic")
    throw std::invalid_argument(
        "gen-synth: environment.type must be \"synthetic\"");
  const SyntheticSpec& sp = cfg.environment.synthetic;
  const std::size_t total = std::accumulate(sp.cluster_sizes.begin(),
                                            sp.cluster_sizes.end(),
                                            std::size_t{0});
  if (cfg.environment.declared_users &&
      *cfg.environment.declared_users != total)
    throw std::invalid_argument(
        "gen-synth: declared user count " +
        std::to_string(*cfg.environment.declared_users) +
        " does not match sum of cluster sizes " + std::to_string(total));

  const Scenario sc = build_scenario(cfg, seed);
  fs::create_directories(cfg.output_dir);
  const std::string pop_path = cfg.output_dir + "/population.csv";
  csv::write_file_atomic(pop_path, population_to_csv(sc.game.population));

  json inst;
  inst["type"] = "population";
  inst["variant"] = cfg.environment.variant;
  inst["lambda"] = cfg.environment.lambda;
  inst["creators"] = sp.creators;
  inst["score_fn"] = "shifted-inner-product";
  inst["attention"] = sc.game.attention.r;
  inst["run_seed"] = seed;
  inst["environment_seed"] = mix_seed(seed, kEnvSalt);
  inst["source"] = json{{"type", "synthetic"},
                        {"dim", sp.d},
                        {"noise", sp.noise},
                        {"cluster_sizes", sp.cluster_sizes}};
  json init = json::array();
  for (const Action& a : sc.initial_profile.actions)
    init.push_back(std::get<Vec>(a));
  inst["initial_profile"] = init;
  if (cfg.environment.variant == "g2") {
    json centers = json::array();
    for (const CostSpec& c : sc.game.costs) centers.push_back(c.center);
    inst["cost_centers"] = centers;
  }
  const std::string inst_path = cfg.output_dir + "/instance.json";
  csv::write_file_atomic(inst_path, inst.dump(2) + "\n");
  log << "wrote " << sc.game.population.size() << " users to " << pop_path
      << "\nwrote instance metadata to " << inst_path << "\n";
  return 0;
}

namespace {

CellResult run_cell(const ExperimentConfig& cfg, const Scenario& scenario,
                    const MechanismEntry& entry, const MechanismSpec& resolved,
                    std::uint64_t seed) {
  CellResult cell;
  cell.mechanism = entry.label;
  cell.seed = seed;
  GameInstance g = scenario.game;
  MechanismSpec spec = resolved;
  const std::string tag =
      file_label(entry.label) + "_seed" + std::to_string(seed);
  if (entry.optimize) {
    OptimizerConfig oc = cfg.optimizer;
    oc.seed = mix_seed(seed, kOptSalt);
    oc.initial_f = spec.brcm_f;
    g.mechanism = spec;
    const OptimizeResult opt =
        optimize_brcm(g, scenario.initial_profile, oc);
    csv::write_file_atomic(cfg.output_dir + "/epochs_" + tag + ".csv",
                           opt.log_to_csv());
    csv::write_file_atomic(
        cfg.output_dir + "/f_" + tag + ".json",
        mechanism_to_json(MechanismSpec::brcm(opt.best_f)).dump(2) + "\n");
    cell.best_opt_welfare = opt.best_welfare;
    spec = MechanismSpec::brcm(opt.best_f);
  }
  g.mechanism = spec;
  DynamicsConfig dc = cfg.dynamics;
  dc.seed = mix_seed(seed, kDynSalt);
  const DynamicsResult res = sim_stra(g, scenario.initial_profile, dc);
  csv::write_file_atomic(cfg.output_dir + "/traj_" + tag + ".csv",
                         res.trajectory.to_csv());
  cell.report = social_welfare(res.final_profile, g);
  cell.accepted = res.trajectory.accepted_moves;
  return cell;
}

}  // namespace

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.mechanisms.empty())
    throw std::invalid_argument("simulate: no mechanisms configured");
  fs::create_directories(cfg.output_dir);

  const std::size_t num_seeds = cfg.seeds.size();
  std::vector<Scenario> scenarios;
  scenarios.reserve(num_seeds);
  for (std::uint64_t sd : cfg.seeds)
    scenarios.push_back(build_scenario(cfg, sd));
  const std::size_t n = scenarios.front().game.creator_count();
  std::vector<MechanismSpec> specs;
  specs.reserve(cfg.mechanisms.size());
  for (const MechanismEntry& e : cfg.mechanisms)
    specs.push_back(resolve_mechanism(e, n, scenarios.front().game.attention,
                                      cfg.optimizer));
  const std::vector<int> groups =
      sorted_groups(scenarios.front().game.population);

  const std::size_t cells = cfg.mechanisms.size() * num_seeds;
  std::vector<CellResult> results(cells);
  std::vector<std::string> errors(cells);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(cells); ++c) {
    const std::size_t mi = static_cast<std::size_t>(c) / num_seeds;
    const std::size_t si = static_cast<std::size_t>(c) % num_seeds;
    try {
      results[c] = run_cell(cfg, scenarios[si], cfg.mechanisms[mi], specs[mi],
                            cfg.seeds[si]);
    } catch (const std::exception& ex) {
      errors[c] = ex.what();
    }
  }
  for (std::size_t c = 0; c < cells; ++c) {
    if (!errors[c].empty()) {
      log << "cell " << cfg.mechanisms[c / num_seeds].label << " seed "
          << cfg.seeds[c % num_seeds] << " failed: " << errors[c] << "\n";
      return 1;
    }
  }

  const std::string summary_path = cfg.output_dir + "/summary.csv";
  csv::write_file_atomic(summary_path, summary_csv(results, groups));
  log << "wrote " << cells << " cells to " << cfg.output_dir << "\n";
  return cmd_report(summary_path, log);
}

int cmd_optimize(const ExperimentConfig& cfg, std::ostream& log) {
  fs::create_directories(cfg.output_dir);
  const std::size_t num_seeds = cfg.seeds.size();
  std::vector<Scenario> scenarios;
  scenarios.reserve(num_seeds);
  for (std::uint64_t sd : cfg.seeds)
    scenarios.push_back(build_scenario(cfg, sd));
  const std::size_t n = scenarios.front().game.creator_count();
  MechanismEntry entry{"brcm-opt", true, std::nullopt};
  const MechanismSpec init = resolve_mechanism(
      entry, n, scenarios.front().game.attention, cfg.optimizer);

  std::vector<OptimizeResult> opts(num_seeds);
  std::vector<std::string> errors(num_seeds);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t si = 0; si < static_cast<std::int64_t>(num_seeds); ++si) {
    try {
      OptimizerConfig oc = cfg.optimizer;
      oc.seed = mix_seed(cfg.seeds[si], kOptSalt);
      oc.initial_f = init.brcm_f;
      GameInstance g = scenarios[si].game;
      g.mechanism = init;
      opts[si] = optimize_brcm(g, scenarios[si].initial_profile, oc);
      const std::string tag = "brcm-opt_seed" + std::to_string(cfg.seeds[si]);
      csv::write_file_atomic(cfg.output_dir + "/epochs_" + tag + ".csv",
                             opts[si].log_to_csv());
      csv::write_file_atomic(
          cfg.output_dir + "/f_" + tag + ".json",
          mechanism_to_json(MechanismSpec::brcm(opts[si].best_f)).dump(2) +
              "\n");
    } catch (const std::exception& ex) {
      errors[si] = ex.what();
    }
  }
  std::size_t best = 0;
  for (std::size_t si = 0; si < num_seeds; ++si) {
    if (!errors[si].empty()) {
      log << "seed " << cfg.seeds[si] << " failed: " << errors[si] << "\n";
      return 1;
    }
    log << "seed " << cfg.seeds[si] << ": best welfare "
        << csv::fmt(opts[si].best_welfare) << "\n";
    if (opts[si].best_welfare > opts[best].best_welfare) best = si;
  }
  csv::write_file_atomic(
      cfg.output_dir + "/optimized_f.json",
      mechanism_to_json(MechanismSpec::brcm(opts[best].best_f)).dump(2) +
          "\n");
  log << "best over seeds: " << csv::fmt(opts[best].best_welfare) << " (seed "
      << cfg.seeds[best] << "), rule written to " << cfg.output_dir
      << "/optimized_f.json\n";
  return 0;
}

int cmd_verify(std::uint64_t budget, std::uint64_t seed, std::ostream& log) {
  int rc = 0;
  const auto check = [&](bool ok, const std::string& what,
                         const std::string& detail) {
    log << (ok ? "PASS " : "FAIL ") << what;
    if (!ok && !detail.empty()) log << ": " << detail;
    log << "\n";
    if (!ok) rc = 1;
  };

  for (std::size_t n : {3, 4, 5}) {
    for (std::size_t k : {1, 2}) {
      const AttentionWeights r = AttentionWeights::dcg(n, k);
      const std::string grid =
          " n=" + std::to_string(n) + " K=" + std::to_string(k);
      const std::pair<const char*, MechanismSpec> mechs[] = {
          {"m3-zero", MechanismSpec::m3_zero()},
          {"m3-exposure", MechanismSpec::m3_exposure(k, 0.05)},
          {"m3-engagement", MechanismSpec::m3_engagement(k, 0.05)},
      };
      for (const auto& [label, mech] : mechs) {
        const Theorem1Report rep = verify_theorem1(n, r, mech, budget);
        check(rep.pass,
              std::string("unique majority equilibrium under ") + label + grid,
              rep.detail);
      }
      const Corollary1Report cor = verify_corollary1(n, r, budget);
      check(cor.pass, "every attention-matched backward PNE is optimal" + grid,
            cor.detail);
    }
  }

  SplitMix64 rng(seed);
  {
    bool ok = true;
    std::string detail;
    for (std::size_t t = 0; t < 150 && ok; ++t) {
      const std::size_t n = 2 + rng.uniform_index(4);
      const MechanismSpec spec = fuzz::random_backward_spec(rng, n);
      const MeritReport rep = check_merit_based(spec, 40, rng.next());
      if (!rep.pass()) {
        ok = false;
        detail = "rule " + std::to_string(t) + " (" + spec.name() + ")";
      }
    }
    check(ok, "merit audits pass on 150 random backward rules", detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (std::size_t t = 0; t < 150 && ok; ++t) {
      const std::size_t n = 2 + rng.uniform_index(4);
      MechanismSpec spec = MechanismSpec::m3_zero();
      switch (t % 3) {
        case 0:
          break;
        case 1:
          spec = MechanismSpec::m3_exposure(1 + rng.uniform_index(n),
                                            0.01 + 0.2 * rng.uniform());
          break;
        default:
          spec = MechanismSpec::m3_engagement(1 + rng.uniform_index(n),
                                              0.01 + 0.2 * rng.uniform());
      }
      const CheckResult res = check_monotone(spec, 40, rng.next());
      if (!res.pass) {
        ok = false;
        detail = "rule " + std::to_string(t) + " (" + spec.name() + ")";
      }
    }
    check(ok, "monotonicity audits pass on 150 softmax/score rules", detail);
  }
  {
    const CheckResult res =
        check_monotone(MechanismSpec::brcm({1.0, 0.0}), 50, rng.next());
    check(!res.pass, "monotonicity audit catches the winner-collapse rule",
          "audit reported pass for a rule with a known violation");
  }
  {
    bool ok = true;
    std::string detail;
    for (std::size_t t = 0; t < 40 && ok; ++t) {
      GameInstance g = fuzz::random_finite_game(rng);
      g.mechanism = fuzz::random_backward_spec(rng, g.creator_count());
      const StrategyProfile s = fuzz::random_profile(rng, g);
      const std::size_t i = rng.uniform_index(g.creator_count());
      StrategyProfile s2 = s;
      s2.actions[i] =
          Action{rng.uniform_index(g.action_spaces[i].members.size())};
      const double du = creator_utility(i, s2, g) - creator_utility(i, s, g);
      const double dp = potential(s2, g) - potential(s, g);
      if (std::abs(du - dp) > 1e-10) {
        ok = false;
        detail = "game " + std::to_string(t) + ": du=" + csv::fmt(du) +
                 " dP=" + csv::fmt(dp);
      }
    }
    check(ok, "utility deltas equal potential deltas on 40 random games",
          detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (std::size_t t = 0; t < 20 && ok; ++t) {
      GameInstance g = fuzz::random_finite_game(rng);
      g.mechanism = fuzz::random_mechanism(rng, g.creator_count());
      const StrategyProfile s = fuzz::random_profile(rng, g);
      if (expected_rewards(s, g) != ref::expected_rewards(s, g) ||
          social_welfare_total(s, g) != ref::social_welfare_total(s, g)) {
        ok = false;
        detail = "game " + std::to_string(t);
      }
    }
    check(ok, "parallel kernels match the serial reference bitwise", detail);
  }
  return rc;
}

int cmd_report(const std::string& summary_path, std::ostream& out) {
  const auto rows = csv::read_rows(summary_path);
  if (rows.size() < 2)
    throw std::runtime_error("summary has no data rows: " + summary_path);
  const auto& header = rows.front();
  if (header.size() < 3 || header[0] != "mechanism" || header[1] != "seed")
    throw std::runtime_error("unrecognized summary header in " + summary_path);

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::vector<double>>> by_mech;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw std::runtime_error("summary row " + std::to_string(r + 1) +
                               " has " + std::to_string(row.size()) +
                               " fields, header has " +
                               std::to_string(header.size()));
    if (!all_digits(row[1])) continue;  // aggregate rows are recomputed
    std::vector<double> vals;
    vals.reserve(row.size() - 2);
    for (std::size_t c = 2; c < row.size(); ++c)
      vals.push_back(csv::parse_double(row[c], "summary " + header[c]));
    if (!by_mech.count(row[0])) order.push_back(row[0]);
    by_mech[row[0]].push_back(std::move(vals));
  }
  if (order.empty())
    throw std::runtime_error("summary has no per-seed rows: " + summary_path);

  out << std::left << std::setw(16) << "mechanism" << std::right
      << std::setw(6) << "seeds";
  for (std::size_t c = 2; c < header.size(); ++c)
    out << std::setw(c == 2 ? 22 : 18) << (header[c] + " (m/s)");
  out << "\n";
  out << std::fixed << std::setprecision(4);
  for (const std::string& mech : order) {
    const auto& data = by_mech[mech];
    out << std::left << std::setw(16) << mech << std::right << std::setw(6)
        << data.size();
    for (std::size_t c = 0; c + 2 < header.size(); ++c) {
      std::vector<double> col;
      col.reserve(data.size());
      for (const auto& v : data) col.push_back(v[c]);
      const double m = mean_of(col);
      std::ostringstream cellv;
      cellv << std::fixed << std::setprecision(4) << m << "/"
            << std::setprecision(3) << std_of(col, m);
      out << std::setw(c == 0 ? 22 : 18) << cellv.str();
    }
    out << "\n";
  }
  return 0;
}

}  // namespace c3
