#pragma once
// Experiment drivers: single protocol runs, multi-seed sweeps across
// horizons, and trace/summary serialization.
//
// Determinism contract.  A run is fully determined by (environment spec,
// learner config, horizon, seed): the master seed is split into one
// independent stream per stochastic component (environment draws, the two
// bandit cores, and the random-pair baseline), so changing one component's
// consumption pattern never perturbs the others.  Sweeps derive one master
// seed per (horizon, repetition) from a base seed, so per-cell results do
// not depend on sweep order or thread scheduling; aggregation happens in a
// fixed order after all workers join.
//
// Cost model.  A lean run keeps O(T) state and computes the final benchmark
// in O(T log T).  The optional per-prefix benchmark trajectory costs O(T^2)
// total and is meant for plots and small-T inspection, not for sweeps.

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "mmlab/core.hpp"
#include "mmlab/envs.hpp"
#include "mmlab/hindsight.hpp"
#include "mmlab/learners.hpp"
#include "mmlab/rng.hpp"

namespace mmlab {

// Stream indices for deriving per-component seeds from a run's master seed.
inline constexpr std::uint64_t kEnvStream = 0;
inline constexpr std::uint64_t kFpaStream = 1;
inline constexpr std::uint64_t kDpStream = 2;
inline constexpr std::uint64_t kBaselineStream = 3;

enum class LearnerKind { M3, FixedPair, RandomPair };

inline const char* learner_kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::M3: return "m3";
    case LearnerKind::FixedPair: return "fixed";
    case LearnerKind::RandomPair: return "random";
  }
  return "unknown";
}

struct LearnerConfig {
  LearnerKind kind = LearnerKind::M3;
  BanditAlgo algo = BanditAlgo::Exp3;
  int grid_size = 0;        // 0 -> default grid for the horizon
  BidAskPair fixed_pair{};  // used by FixedPair
};

struct ProtocolOptions {
  bool keep_trace = false;       // retain per-round (pair, round, utility)
  bool with_trajectory = false;  // exact per-prefix benchmark (O(T^2) total)
};

struct RunResult {
  long long horizon = 0;
  std::uint64_t seed = 0;
  double total_utility = 0.0;
  double benchmark = 0.0;  // realized best fixed pair in hindsight
  HindsightWitness witness;
  double regret = 0.0;
  std::optional<double> expected_benchmark;  // closed form, when available
  std::optional<double> expected_regret;
  // Populated only when ProtocolOptions::keep_trace is set.
  std::vector<MarketRound> rounds;
  std::vector<BidAskPair> actions;
  std::vector<double> utilities;
  // Populated only when ProtocolOptions::with_trajectory is set.
  std::vector<double> cumulative_utility;
  std::vector<double> prefix_benchmark;
  std::vector<double> regret_trajectory;
};

/// Per-round supremum of expected utility over fixed pairs, for environments
/// with a closed form (empty otherwise).
inline std::optional<double> expected_per_round_benchmark(
    const EnvironmentSpec& spec) {
  switch (spec.kind) {
    case EnvKind::HardInstance: {
      // The landscape peaks at (r, 1): the spike tops the 1/8 plateau.
      const HardInstanceParams hp = spec.hard_params();
      return expected_utility(spec, BidAskPair(hp.r, 1.0));
    }
    case EnvKind::Unlearnable: {
      // The draw is uniform on two atoms, so the per-round supremum is half
      // the two-round hindsight supremum on one atom of each type.
      const std::vector<MarketRound> atoms{MarketRound(0.0, spec.d),
                                           MarketRound(1.0, spec.c)};
      return best_fixed_pair(atoms).value / 2.0;
    }
    default:
      return std::nullopt;
  }
}

/// Plays one learner against one environment for T rounds.
inline RunResult run_protocol(const EnvironmentSpec& env,
                              const LearnerConfig& learner, long long T,
                              std::uint64_t seed,
                              const ProtocolOptions& options = {}) {
  detail::require(T >= 1, "run_protocol: horizon must be >= 1");
  Rng env_rng(derive_seed(seed, kEnvStream));
  Rng fpa_rng(derive_seed(seed, kFpaStream));
  Rng dp_rng(derive_seed(seed, kDpStream));
  Rng baseline_rng(derive_seed(seed, kBaselineStream));

  std::optional<M3State> m3;
  if (learner.kind == LearnerKind::M3) {
    m3.emplace(make_m3(T, learner.algo, learner.grid_size));
  }

  RunResult result;
  result.horizon = T;
  result.seed = seed;
  std::vector<MarketRound> rounds;
  std::vector<double> utilities;
  rounds.reserve(static_cast<std::size_t>(T));
  utilities.reserve(static_cast<std::size_t>(T));
  if (options.keep_trace) {
    result.actions.reserve(static_cast<std::size_t>(T));
  }

  double total = 0.0;
  for (long long t = 1; t <= T; ++t) {
    const MarketRound round = next_round(env, t, env_rng);
    BidAskPair pair;
    switch (learner.kind) {
      case LearnerKind::M3:
        pair = m3_act(*m3, fpa_rng, dp_rng);
        break;
      case LearnerKind::FixedPair:
        pair = baseline_fixed(learner.fixed_pair);
        break;
      case LearnerKind::RandomPair:
        pair = baseline_random(baseline_rng);
        break;
    }
    const double u = utility(pair, round.market_price, round.taker_valuation);
    if (learner.kind == LearnerKind::M3) {
      m3_update(*m3, make_feedback(pair, round));
    }
    total += u;
    rounds.push_back(round);
    utilities.push_back(u);
    if (options.keep_trace) result.actions.push_back(pair);
  }

  result.total_utility = total;
  if (options.with_trajectory) {
    RegretReport report = cumulative_regret(rounds, utilities);
    result.benchmark = report.benchmark_value;
    result.witness = report.witness;
    result.regret = report.regret;
    result.cumulative_utility = std::move(report.cumulative_utility);
    result.prefix_benchmark = std::move(report.prefix_benchmark);
    result.regret_trajectory = std::move(report.regret_trajectory);
  } else {
    const BestFixedResult best = best_fixed_pair(rounds);
    result.benchmark = best.value;
    result.witness = best.witness;
    result.regret = best.value - total;
  }
  if (const auto per_round = expected_per_round_benchmark(env)) {
    result.expected_benchmark = *per_round * static_cast<double>(T);
    result.expected_regret = *result.expected_benchmark - total;
  }
  if (options.keep_trace) {
    result.rounds = std::move(rounds);
    result.utilities = std::move(utilities);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Parallel multi-seed sweeps
// ---------------------------------------------------------------------------

/// Runs body(0..count-1) on up to `threads` workers (0 -> hardware count).
/// The first exception thrown by any worker is rethrown after all join.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// n equally spaced seeds derived from one base; convenience for sweeps.
inline std::vector<std::uint64_t> make_seed_list(std::uint64_t base, int n) {
  detail::require(n >= 1, "make_seed_list: need at least one seed");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    seeds[static_cast<std::size_t>(i)] =
        derive_seed(base, static_cast<std::uint64_t>(i));
  }
  return seeds;
}

struct SweepSpec {
  EnvironmentSpec env;  // template; see strips_track_horizon
  // When true and env is the spiked instance, the strip count is re-derived
  // from each horizon (K = ceil(T^(1/3))) with spike index hard_k.
  bool strips_track_horizon = false;
  int hard_k = 1;
  LearnerConfig learner;
  std::vector<long long> horizons;    // strictly increasing
  std::vector<std::uint64_t> seeds;   // one repetition per listed seed
  int threads = 0;                    // 0 -> hardware concurrency
};

struct SweepCell {
  long long horizon = 0;
  int n_seeds = 0;
  double mean_regret = 0.0;
  double std_regret = 0.0;  // sample standard deviation
  double mean_benchmark = 0.0;
  double mean_utility = 0.0;
  // Per-seed values, in seed-list order.
  std::vector<double> regrets;
  std::vector<double> utilities;
  std::vector<double> benchmarks;
};

struct SweepResult {
  std::vector<SweepCell> cells;                 // one per horizon, in order
  std::optional<double> exponent;               // log-log slope of mean regret
};

inline EnvironmentSpec env_for_horizon(const SweepSpec& spec, long long T) {
  if (spec.strips_track_horizon && spec.env.kind == EnvKind::HardInstance) {
    return EnvironmentSpec::hard_instance_for_horizon(T, spec.hard_k);
  }
  return spec.env;
}

/// Multi-seed, multi-horizon regret sweep.  The master seed of the run for
/// listed seed s at horizon T is derive_seed(s, T) — a function of the seed
/// value and the horizon value only, so extending either list, reordering,
/// or changing the thread count never perturbs existing runs.
inline SweepResult run_sweep(const SweepSpec& spec) {
  detail::require(!spec.horizons.empty(), "run_sweep: no horizons");
  detail::require(!spec.seeds.empty(), "run_sweep: no seeds");
  for (std::size_t h = 0; h < spec.horizons.size(); ++h) {
    detail::require(spec.horizons[h] >= 1, "run_sweep: horizons must be >= 1");
    detail::require(h == 0 || spec.horizons[h] > spec.horizons[h - 1],
                    "run_sweep: horizons must be strictly increasing");
  }

  const std::size_t n_cells = spec.horizons.size();
  const std::size_t n_seeds = spec.seeds.size();
  const std::size_t n_runs = n_cells * n_seeds;
  std::vector<RunResult> runs(n_runs);
  parallel_for(n_runs, spec.threads, [&](std::size_t i) {
    const std::size_t h = i / n_seeds;
    const long long T = spec.horizons[h];
    const EnvironmentSpec env = env_for_horizon(spec, T);
    const std::uint64_t master =
        derive_seed(spec.seeds[i % n_seeds], static_cast<std::uint64_t>(T));
    runs[i] = run_protocol(env, spec.learner, T, master);
  });

  SweepResult result;
  result.cells.reserve(n_cells);
  for (std::size_t h = 0; h < n_cells; ++h) {
    SweepCell cell;
    cell.horizon = spec.horizons[h];
    cell.n_seeds = static_cast<int>(n_seeds);
    cell.regrets.reserve(n_seeds);
    double sum_regret = 0.0;
    double sum_benchmark = 0.0;
    double sum_utility = 0.0;
    cell.utilities.reserve(n_seeds);
    cell.benchmarks.reserve(n_seeds);
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const RunResult& run = runs[h * n_seeds + s];
      cell.regrets.push_back(run.regret);
      cell.utilities.push_back(run.total_utility);
      cell.benchmarks.push_back(run.benchmark);
      sum_regret += run.regret;
      sum_benchmark += run.benchmark;
      sum_utility += run.total_utility;
    }
    const double n = static_cast<double>(n_seeds);
    cell.mean_regret = sum_regret / n;
    cell.mean_benchmark = sum_benchmark / n;
    cell.mean_utility = sum_utility / n;
    if (n_seeds > 1) {
      double ss = 0.0;
      for (double r : cell.regrets) {
        ss += (r - cell.mean_regret) * (r - cell.mean_regret);
      }
      cell.std_regret = std::sqrt(ss / (n - 1.0));
    }
    result.cells.push_back(std::move(cell));
  }

  if (result.cells.size() >= 3) {
    bool fittable = true;
    std::vector<double> means;
    means.reserve(result.cells.size());
    for (const SweepCell& cell : result.cells) {
      if (cell.mean_regret <= 0.0) fittable = false;
      means.push_back(cell.mean_regret);
    }
    if (fittable) {
      result.exponent = fit_scaling_exponent(spec.horizons, means);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization helpers
// ---------------------------------------------------------------------------

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

/// Writes a per-round trace as CSV.  Requires a run made with keep_trace;
/// the two benchmark columns are left empty unless the run also kept the
/// per-prefix trajectory.
inline void write_trace_csv(const std::string& path, const RunResult& run) {
  detail::require(!run.rounds.empty() &&
                      run.rounds.size() == run.actions.size() &&
                      run.rounds.size() == run.utilities.size(),
                  "write_trace_csv: run has no retained trace");
  std::ofstream out(path);
  detail::require(static_cast<bool>(out),
                  "write_trace_csv: cannot open output file");
  const bool with_traj = run.prefix_benchmark.size() == run.rounds.size();
  out << "t,bid,ask,m,v,utility,cum_utility,prefix_benchmark,regret\n";
  double cum = 0.0;
  for (std::size_t t = 0; t < run.rounds.size(); ++t) {
    cum += run.utilities[t];
    out << (t + 1) << ',' << format_double(run.actions[t].bid) << ','
        << format_double(run.actions[t].ask) << ','
        << format_double(run.rounds[t].market_price) << ','
        << format_double(run.rounds[t].taker_valuation) << ','
        << format_double(run.utilities[t]) << ','
        << format_double(with_traj ? run.cumulative_utility[t] : cum);
    if (with_traj) {
      out << ',' << format_double(run.prefix_benchmark[t]) << ','
          << format_double(run.regret_trajectory[t]);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  detail::require(static_cast<bool>(out), "write_trace_csv: write failed");
}

}  // namespace mmlab
