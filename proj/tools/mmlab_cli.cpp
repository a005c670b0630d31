// Command-line front end for the market-making laboratory.
//
//   mmlab simulate    one environment x learner run -> summary JSON (+ trace CSV)
//   mmlab sweep       horizon grid x seed list -> runs.csv, aggregate.json, manifest.json
//   mmlab best-fixed  hindsight-optimal fixed pair of a recorded (m,v) trace
//   mmlab verify      partition / KL-bound / construction audits -> JSON report
//
// Every option can also come from an INI-style config file (--config run.ini)
// with one [section] per subcommand; command-line flags override file values.
// All artifacts are a pure function of the configuration: rerunning the same
// config byte-reproduces every CSV and JSON file.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmlab/experiment.hpp"
#include "mmlab/verify.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mmlab;

// ---------------------------------------------------------------------------
// Shared option bundles
// ---------------------------------------------------------------------------

struct EnvOptions {
  std::string kind = "spiked";       // spiked | smooth | unlearnable | custom
  int strips = 4;                    // spiked: number of bid strips K
  int spike_index = 1;               // spiked: which strip carries the bump
  std::string valuation = "base";    // smooth: base | uniform
  std::string market = "high-band";  // smooth: high-band | uniform
  double atom_low = 0.49;            // unlearnable: lower valuation atom
  double atom_high = 0.51;           // unlearnable: upper valuation atom
  std::string replay_path;           // custom: CSV trace of (m, v) rounds
};

void add_env_options(CLI::App* cmd, EnvOptions& o) {
  cmd->add_option("--env", o.kind,
                  "Environment: spiked | smooth | unlearnable | custom")
      ->check(CLI::IsMember({"spiked", "smooth", "unlearnable", "custom"}))
      ->capture_default_str();
  cmd->add_option("--strips", o.strips, "Spiked: strip count K (>= 2)")
      ->capture_default_str();
  cmd->add_option("--spike-index", o.spike_index,
                  "Spiked: index k in [1, K] of the strip carrying the bump")
      ->capture_default_str();
  cmd->add_option("--valuation", o.valuation,
                  "Smooth: valuation law (base | uniform)")
      ->check(CLI::IsMember({"base", "uniform"}))
      ->capture_default_str();
  cmd->add_option("--market", o.market,
                  "Smooth: market-price law (high-band | uniform)")
      ->check(CLI::IsMember({"high-band", "uniform"}))
      ->capture_default_str();
  cmd->add_option("--atom-low", o.atom_low, "Unlearnable: lower valuation atom")
      ->capture_default_str();
  cmd->add_option("--atom-high", o.atom_high,
                  "Unlearnable: upper valuation atom")
      ->capture_default_str();
  cmd->add_option("--replay", o.replay_path,
                  "Custom: CSV trace of (m, v) rounds to replay");
}

struct LearnerOptions {
  std::string kind = "m3";    // m3 | fixed | random
  std::string algo = "exp3";  // exp3 | tsallis
  int grid = 0;               // 0 -> K = ceil(T^(1/3)) + 1
  double bid = 0.5;
  double ask = 0.5;
};

void add_learner_options(CLI::App* cmd, LearnerOptions& o) {
  cmd->add_option("--learner", o.kind, "Learner: m3 | fixed | random")
      ->check(CLI::IsMember({"m3", "fixed", "random"}))
      ->capture_default_str();
  cmd->add_option("--algo", o.algo, "Bandit core for m3: exp3 | tsallis")
      ->check(CLI::IsMember({"exp3", "tsallis"}))
      ->capture_default_str();
  cmd->add_option("--grid", o.grid,
                  "m3 price-grid size (0 = horizon default ceil(T^(1/3)) + 1)")
      ->capture_default_str();
  cmd->add_option("--bid", o.bid, "Fixed learner: bid price")
      ->capture_default_str();
  cmd->add_option("--ask", o.ask, "Fixed learner: ask price")
      ->capture_default_str();
}

// ---------------------------------------------------------------------------
// Trace-file input: CSV with columns (m, v), or any CSV whose header names
// columns m and v (the per-run trace schema qualifies).
// ---------------------------------------------------------------------------

bool parse_double_strict(const std::string& text, double& out) {
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<MarketRound> read_mv_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::vector<MarketRound> rounds;
  std::string line;
  std::size_t line_no = 0;
  int m_col = 0;
  int v_col = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    double first = 0.0;
    if (line_no == 1 && !parse_double_strict(fields[0], first)) {
      m_col = v_col = -1;
      for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
        if (fields[i] == "m") m_col = i;
        if (fields[i] == "v") v_col = i;
      }
      if (m_col < 0 || v_col < 0) {
        throw std::runtime_error(path + ": header must name columns m and v");
      }
      continue;
    }
    if (static_cast<int>(fields.size()) <= std::max(m_col, v_col)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": too few columns");
    }
    double m = 0.0;
    double v = 0.0;
    if (!parse_double_strict(fields[m_col], m) ||
        !parse_double_strict(fields[v_col], v)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed number");
    }
    rounds.emplace_back(m, v);  // validates [0,1] membership
  }
  if (rounds.empty()) throw std::runtime_error(path + ": no rounds");
  return rounds;
}

// ---------------------------------------------------------------------------
// Builders and JSON echoes
// ---------------------------------------------------------------------------

EnvironmentSpec build_env(const EnvOptions& o) {
  if (o.kind == "spiked") {
    return EnvironmentSpec::hard_instance(o.strips, o.spike_index);
  }
  if (o.kind == "smooth") {
    return EnvironmentSpec::smooth_iid(
        o.valuation == "uniform" ? ValuationModel::Uniform01
                                 : ValuationModel::BaseDensity,
        o.market == "uniform" ? MarketModel::Uniform01
                              : MarketModel::HighBand);
  }
  if (o.kind == "unlearnable") {
    return EnvironmentSpec::unlearnable(o.atom_low, o.atom_high);
  }
  if (o.replay_path.empty()) {
    throw std::runtime_error("custom environment requires --replay FILE");
  }
  return EnvironmentSpec::custom(read_mv_trace(o.replay_path));
}

json env_json(const EnvOptions& o) {
  json j;
  j["kind"] = o.kind;
  if (o.kind == "spiked") {
    j["strips"] = o.strips;
    j["spike_index"] = o.spike_index;
  } else if (o.kind == "smooth") {
    j["valuation"] = o.valuation;
    j["market"] = o.market;
  } else if (o.kind == "unlearnable") {
    j["atom_low"] = o.atom_low;
    j["atom_high"] = o.atom_high;
  } else {
    j["replay"] = o.replay_path;
  }
  return j;
}

LearnerConfig build_learner(const LearnerOptions& o) {
  LearnerConfig config;
  config.kind = o.kind == "fixed"    ? LearnerKind::FixedPair
                : o.kind == "random" ? LearnerKind::RandomPair
                                     : LearnerKind::M3;
  config.algo =
      o.algo == "tsallis" ? BanditAlgo::TsallisINF : BanditAlgo::Exp3;
  config.grid_size = o.grid;
  if (config.kind == LearnerKind::FixedPair) {
    config.fixed_pair = BidAskPair(o.bid, o.ask);  // validates b <= a
  }
  return config;
}

json learner_json(const LearnerOptions& o, long long horizon) {
  json j;
  j["kind"] = o.kind;
  if (o.kind == "m3") {
    j["algo"] = o.algo;
    j["grid_size"] =
        o.grid > 0 ? o.grid : M3State::default_grid_size(horizon);
  } else if (o.kind == "fixed") {
    j["bid"] = o.bid;
    j["ask"] = o.ask;
  }
  return j;
}

json witness_json(const HindsightWitness& w) {
  json j;
  j["bid"] = w.bid;
  j["ask"] = w.ask;
  j["ask_is_left_limit"] = w.ask_is_left_limit;
  return j;
}

json run_json(const RunResult& run) {
  json j;
  j["horizon"] = run.horizon;
  j["seed"] = run.seed;
  j["total_utility"] = run.total_utility;
  j["benchmark"] = run.benchmark;
  j["witness"] = witness_json(run.witness);
  j["regret"] = run.regret;
  j["regret_per_round"] = run.regret / static_cast<double>(run.horizon);
  j["expected_benchmark"] =
      run.expected_benchmark ? json(*run.expected_benchmark) : json(nullptr);
  j["expected_regret"] =
      run.expected_regret ? json(*run.expected_regret) : json(nullptr);
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_json(const std::string& path, const json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(path, j);
    std::cout << "wrote " << path << '\n';
  }
}

// Trajectories cost O(T^2) total work, so they default on only for small T.
constexpr long long kTrajectoryAutoLimit = 4096;

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
  EnvOptions env;
  LearnerOptions learner;
  long long horizon = 1024;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string trace_out;
  bool force_trajectory = false;
  bool force_no_trajectory = false;
};

void run_simulate(const SimulateArgs& args, bool horizon_given) {
  const EnvironmentSpec env = build_env(args.env);
  long long T = args.horizon;
  if (env.kind == EnvKind::Custom) {
    const long long trace_len = static_cast<long long>(env.trace.size());
    if (!horizon_given) T = trace_len;
    if (T > trace_len) {
      throw std::runtime_error("horizon exceeds replayed trace length (" +
                               std::to_string(trace_len) + ")");
    }
  }
  ProtocolOptions options;
  options.keep_trace = !args.trace_out.empty();
  options.with_trajectory =
      args.force_trajectory ||
      (options.keep_trace && T <= kTrajectoryAutoLimit &&
       !args.force_no_trajectory);

  const RunResult run =
      run_protocol(env, build_learner(args.learner), T, args.seed, options);
  if (!args.trace_out.empty()) write_trace_csv(args.trace_out, run);

  json j;
  j["command"] = "simulate";
  j["environment"] = env_json(args.env);
  j["learner"] = learner_json(args.learner, T);
  j["run"] = run_json(run);
  if (!args.trace_out.empty()) {
    j["trace_csv"] = args.trace_out;
    j["trace_has_trajectory"] = options.with_trajectory;
  }
  emit_json(args.out_path, j);
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
  EnvOptions env;
  LearnerOptions learner;
  bool track_horizon = false;
  std::vector<long long> horizons;
  std::vector<std::uint64_t> seeds;
  std::uint64_t seed_base = 1;
  int n_seeds = 10;
  int threads = 0;
  std::string out_dir;
  bool traces = false;
};

void run_sweep_command(const SweepArgs& args) {
  SweepSpec spec;
  spec.env = build_env(args.env);
  spec.strips_track_horizon = args.track_horizon;
  spec.hard_k = args.env.spike_index;
  spec.learner = build_learner(args.learner);
  spec.horizons = args.horizons;
  spec.seeds = args.seeds.empty() ? make_seed_list(args.seed_base, args.n_seeds)
                                  : args.seeds;
  spec.threads = args.threads;

  // Fail on an unwritable destination before any run starts.
  fs::create_directories(args.out_dir);
  const fs::path dir(args.out_dir);
  std::ofstream runs_csv(dir / "runs.csv", std::ios::binary);
  if (!runs_csv) {
    throw std::runtime_error("cannot write to output directory: " +
                             args.out_dir);
  }

  const SweepResult result = run_sweep(spec);

  runs_csv << "horizon,seed,total_utility,benchmark,regret\n";
  for (const SweepCell& cell : result.cells) {
    for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
      runs_csv << cell.horizon << ',' << spec.seeds[s] << ','
               << format_double(cell.utilities[s]) << ','
               << format_double(cell.benchmarks[s]) << ','
               << format_double(cell.regrets[s]) << '\n';
    }
  }
  runs_csv.close();
  if (!runs_csv) throw std::runtime_error("write failed: runs.csv");

  json aggregate;
  aggregate["cells"] = json::array();
  for (const SweepCell& cell : result.cells) {
    json c;
    c["horizon"] = cell.horizon;
    c["mean_regret"] = cell.mean_regret;
    c["std_regret"] = cell.std_regret;
    c["n_seeds"] = cell.n_seeds;
    c["mean_benchmark"] = cell.mean_benchmark;
    c["mean_utility"] = cell.mean_utility;
    aggregate["cells"].push_back(c);
  }
  aggregate["exponent_fit"] =
      result.exponent ? json(*result.exponent) : json(nullptr);
  write_json_file((dir / "aggregate.json").string(), aggregate);

  json manifest;
  manifest["command"] = "sweep";
  manifest["environment"] = env_json(args.env);
  manifest["environment"]["strips_track_horizon"] = args.track_horizon;
  manifest["learner"] = learner_json(
      args.learner, spec.horizons.empty() ? 1 : spec.horizons.back());
  manifest["horizons"] = spec.horizons;
  manifest["seeds"] = spec.seeds;
  manifest["threads"] = spec.threads;
  manifest["seed_rule"] =
      "master seed of the run for listed seed s at horizon T is "
      "derive_seed(s, T); independent of list order and thread count";
  manifest["artifacts"] = json{{"runs_csv", "runs.csv"},
                               {"aggregate_json", "aggregate.json"},
                               {"traces_dir", args.traces ? json("traces")
                                                          : json(nullptr)}};
  write_json_file((dir / "manifest.json").string(), manifest);

  if (args.traces) {
    fs::create_directories(dir / "traces");
    for (const long long T : spec.horizons) {
      const EnvironmentSpec env = env_for_horizon(spec, T);
      for (const std::uint64_t seed : spec.seeds) {
        ProtocolOptions options;
        options.keep_trace = true;
        options.with_trajectory = T <= kTrajectoryAutoLimit;
        const RunResult run =
            run_protocol(env, spec.learner, T,
                         derive_seed(seed, static_cast<std::uint64_t>(T)),
                         options);
        const std::string name =
            "T" + std::to_string(T) + "_seed" + std::to_string(seed) + ".csv";
        write_trace_csv((dir / "traces" / name).string(), run);
      }
    }
  }

  for (const SweepCell& cell : result.cells) {
    std::cout << "T=" << cell.horizon << "  mean regret "
              << format_double(cell.mean_regret) << "  (std "
              << format_double(cell.std_regret) << ", n=" << cell.n_seeds
              << ")\n";
  }
  if (result.exponent) {
    std::cout << "fitted log-log exponent: " << format_double(*result.exponent)
              << '\n';
  }
  std::cout << "wrote " << (dir / "runs.csv").string() << ", "
            << (dir / "aggregate.json").string() << ", "
            << (dir / "manifest.json").string() << '\n';
}

// ---------------------------------------------------------------------------
// best-fixed
// ---------------------------------------------------------------------------

struct BestFixedArgs {
  std::string trace_path;
  std::string out_path;
};

void run_best_fixed(const BestFixedArgs& args) {
  const std::vector<MarketRound> rounds = read_mv_trace(args.trace_path);
  const BestFixedResult best = best_fixed_pair(rounds);
  json j;
  j["command"] = "best-fixed";
  j["trace"] = args.trace_path;
  j["rounds"] = rounds.size();
  j["value"] = best.value;
  j["value_per_round"] = best.value / static_cast<double>(rounds.size());
  j["witness"] = witness_json(best.witness);
  emit_json(args.out_path, j);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::vector<int> strip_counts{4, 8, 16};
  long long samples_per_region = 1000;
  long long partition_samples = 100000;
  std::uint64_t seed = 7;
  std::string out_path;
};

int run_verify(const VerifyArgs& args) {
  json report;
  report["command"] = "verify";
  report["kl_bound_constants"] =
      json{{"exploit", "2/81"},
           {"explore", "65/9"},
           {"exploit_value", 2.0 / 81.0},
           {"explore_value", 65.0 / 9.0}};
  bool all_pass = true;
  report["strip_counts"] = json::array();

  for (const int K : args.strip_counts) {
    json jk;
    jk["strips"] = K;

    // Partition audit: every sampled point matches exactly the region the
    // classifier reports (and no other); White means no region matches.
    {
      Rng rng(derive_seed(args.seed, static_cast<std::uint64_t>(K)));
      long long white = 0;
      long long mismatches = 0;
      for (long long i = 0; i < args.partition_samples; ++i) {
        double b;
        double a;
        if (i % 2 == 0) {
          b = rng.uniform();
          a = rng.uniform();
          if (b > a) std::swap(b, a);
        } else {
          b = rng.uniform(0.15, 0.26);  // near the strip structure
          a = rng.uniform(b, 1.0);
        }
        const Region region = classify_region(b, a, K);
        const int matches = count_region_matches(b, a, K);
        const bool is_white = region.tag == Region::Tag::White;
        if (is_white) {
          ++white;
          if (matches != 0) ++mismatches;
        } else if (matches != 1) {
          ++mismatches;
        }
      }
      jk["partition"] = json{{"samples", args.partition_samples},
                             {"white", white},
                             {"mismatches", mismatches}};
      all_pass = all_pass && mismatches == 0;
    }

    // Feedback-channel KL bounds, every spike index.
    {
      Rng rng(derive_seed(args.seed, 1000 + static_cast<std::uint64_t>(K)));
      const KlReport kl = check_kl_bounds(K, args.samples_per_region, rng);
      jk["eps"] = kl.eps;
      jk["exploit_bound"] = kl.exploit_bound;
      jk["explore_bound"] = kl.explore_bound;
      jk["total_violations"] = kl.total_violations;
      jk["max_exploit_ratio"] = kl.max_exploit_ratio;
      jk["max_explore_ratio"] = kl.max_explore_ratio;
      jk["regions"] = json::array();
      for (const RegionKlEntry& entry : kl.entries) {
        jk["regions"].push_back(json{{"region", entry.region},
                                     {"spike_index", entry.spike_index},
                                     {"samples", entry.samples},
                                     {"max_kl", entry.max_kl},
                                     {"bound", entry.bound},
                                     {"violations", entry.violations}});
      }
      all_pass = all_pass && kl.total_violations == 0;
    }

    // Spike / plateau / explore structure, every spike index.
    {
      jk["construction"] = json::array();
      for (int k = 1; k <= K; ++k) {
        const ConstructionReport c = check_construction(K, k);
        jk["construction"].push_back(
            json{{"spike_index", k},
                 {"spike_value", c.spike_value},
                 {"spike_bound", c.spike_bound},
                 {"plateau_samples", c.plateau_samples},
                 {"plateau_violations", c.plateau_violations},
                 {"explore_max", c.explore_max},
                 {"explore_bound", c.explore_bound},
                 {"argmax_bid", c.argmax_bid},
                 {"argmax_ask", c.argmax_ask},
                 {"all_pass", c.all_pass}});
        all_pass = all_pass && c.all_pass;
      }
    }

    report["strip_counts"].push_back(jk);
  }

  report["all_pass"] = all_pass;
  emit_json(args.out_path, report);
  if (!all_pass) std::cerr << "verify: at least one audit failed\n";
  return all_pass ? 0 : 2;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{
      "Simulation and verification laboratory for online market making"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI config file with one [section] per subcommand");

  // Subcommands dispatch after the parse (not via callbacks): a config-file
  // section naming the active subcommand would otherwise fire the callback a
  // second time.

  // simulate
  auto sim_args = std::make_shared<SimulateArgs>();
  CLI::App* sim =
      app.add_subcommand("simulate", "Run one environment x learner episode");
  sim->configurable();
  add_env_options(sim, sim_args->env);
  add_learner_options(sim, sim_args->learner);
  CLI::Option* horizon_opt =
      sim->add_option("--horizon,-T", sim_args->horizon, "Number of rounds")
          ->capture_default_str();
  sim->add_option("--seed", sim_args->seed, "Master seed of the run")
      ->capture_default_str();
  sim->add_option("--out", sim_args->out_path,
                  "Summary JSON path (default: stdout)");
  sim->add_option("--trace-out", sim_args->trace_out,
                  "Per-round trace CSV path");
  sim->add_flag("--trajectory", sim_args->force_trajectory,
                "Force per-round benchmark/regret columns in the trace");
  sim->add_flag("--no-trajectory", sim_args->force_no_trajectory,
                "Suppress the per-round benchmark columns (auto for large T)");

  // sweep
  auto sweep_args = std::make_shared<SweepArgs>();
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a horizon grid x seed list and aggregate regrets");
  sweep->configurable();
  add_env_options(sweep, sweep_args->env);
  add_learner_options(sweep, sweep_args->learner);
  sweep->add_flag(
      "--track-horizon", sweep_args->track_horizon,
      "Spiked environment: re-derive the strip count from each horizon");
  sweep->add_option("--horizons", sweep_args->horizons,
                    "Strictly increasing horizon list")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_args->seeds,
                    "Explicit seed list (overrides --seed-base/--n-seeds)")
      ->delimiter(',');
  sweep->add_option("--seed-base", sweep_args->seed_base,
                    "Base for the derived seed list")
      ->capture_default_str();
  sweep->add_option("--n-seeds", sweep_args->n_seeds,
                    "Number of derived seeds")
      ->capture_default_str();
  sweep->add_option("--threads", sweep_args->threads,
                    "Worker threads (0 = hardware)")
      ->capture_default_str();
  sweep->add_option("--out-dir", sweep_args->out_dir,
                    "Output directory for runs.csv / aggregate.json / "
                    "manifest.json")
      ->required();
  sweep->add_flag("--traces", sweep_args->traces,
                  "Also write one per-round trace CSV per run");

  // best-fixed
  auto best_args = std::make_shared<BestFixedArgs>();
  CLI::App* best = app.add_subcommand(
      "best-fixed", "Hindsight-optimal fixed pair of a recorded trace");
  best->configurable();
  best->add_option("--trace", best_args->trace_path,
                   "CSV with columns (m, v), or any CSV naming those columns")
      ->required();
  best->add_option("--out", best_args->out_path,
                   "Report JSON path (default: stdout)");

  // verify
  auto verify_args = std::make_shared<VerifyArgs>();
  CLI::App* verify = app.add_subcommand(
      "verify", "Audit the partition, KL bounds, and spike construction");
  verify->configurable();
  verify->add_option("--strip-counts", verify_args->strip_counts,
                     "Strip counts K to audit")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_option("--samples", verify_args->samples_per_region,
                     "KL samples per region")
      ->capture_default_str();
  verify->add_option("--partition-samples", verify_args->partition_samples,
                     "Partition audit sample count")
      ->capture_default_str();
  verify->add_option("--seed", verify_args->seed, "Audit sampling seed")
      ->capture_default_str();
  verify->add_option("--out", verify_args->out_path,
                     "Report JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
    if (sim->parsed()) {
      run_simulate(*sim_args, horizon_opt->count() > 0);
    } else if (sweep->parsed()) {
      run_sweep_command(*sweep_args);
    } else if (best->parsed()) {
      run_best_fixed(*best_args);
    } else if (verify->parsed()) {
      return run_verify(*verify_args);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
