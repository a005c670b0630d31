#pragma once
// Exact hindsight benchmarks and regret reporting.
//
// The benchmark is the supremum over fixed pairs (b, a), b <= a, of the
// realized cumulative utility
//
//     sum_t (m_t - b) 1{b >= v_t} + (a - m_t) 1{a < v_t},
//
// which separates as f(b) + g(a):
//
//  * f jumps (possibly downward) at each b = v_t and decreases affinely in
//    between, so its local maxima sit exactly at b in {0} union {v_t}.
//  * g increases affinely between valuations and drops at each a = v_t
//    (the sell indicator is strict), so on each interval the supremum is
//    approached from the left: the ask candidates are a = 1 plus the left
//    limits a -> v_t^-, where the sell indicator becomes 1{v_t <= v_s}.
//
// The supremum may therefore be unattained; witnesses carry an explicit
// ask_is_left_limit flag instead of representing "just below v" by a
// perturbed float, so reported values stay exact.
//
// Two implementations agree: a literal candidate enumeration for small
// inputs, and an O(T log T) sort + suffix-maximum sweep for large ones.  The
// sweep re-evaluates its winning candidate by direct summation in round
// order, so returned values never depend on prefix-sum bracketing.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "mmlab/core.hpp"

namespace mmlab {

/// The maximizing pair; when ask_is_left_limit is set, the supremum is
/// approached as the ask tends to `ask` from below (never attained).
struct HindsightWitness {
  double bid = 0.0;
  double ask = 1.0;
  bool ask_is_left_limit = false;
};

struct BestFixedResult {
  double value = 0.0;
  HindsightWitness witness;
};

/// Realized cumulative utility of a fixed pair, summed in round order.
inline double hindsight_value(const std::vector<MarketRound>& rounds,
                              const BidAskPair& pair) {
  double total = 0.0;
  for (const MarketRound& round : rounds) {
    total += utility(pair, round.market_price, round.taker_valuation);
  }
  return total;
}

/// Limit of the cumulative utility as the ask tends to v from below, with
/// bid b < v fixed: the sell indicator becomes 1{v <= v_t}.
inline double hindsight_left_limit_value(const std::vector<MarketRound>& rounds,
                                         double b, double v) {
  detail::require(b < v, "hindsight_left_limit_value: requires bid < v");
  double total = 0.0;
  for (const MarketRound& round : rounds) {
    if (b >= round.taker_valuation) {
      total += round.market_price - b;
    } else if (v <= round.taker_valuation) {
      total += v - round.market_price;
    }
  }
  return total;
}

namespace detail {

constexpr std::size_t kHindsightEnumerationThreshold = 100;

// Literal candidate enumeration with per-candidate direct sums.  Quadratic in
// the number of distinct valuations (cubic in T overall), used for small T.
inline BestFixedResult best_fixed_pair_enumerate(
    const std::vector<MarketRound>& rounds) {
  std::vector<double> bids;
  bids.push_back(0.0);
  std::vector<double> vals;
  for (const MarketRound& round : rounds) {
    bids.push_back(round.taker_valuation);
    vals.push_back(round.taker_valuation);
  }
  std::sort(bids.begin(), bids.end());
  bids.erase(std::unique(bids.begin(), bids.end()), bids.end());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  BestFixedResult best;
  bool first = true;
  for (double b : bids) {
    // Point candidate a = 1 (never sells: 1 < v_t is impossible).
    const double point_value = hindsight_value(rounds, BidAskPair(b, 1.0));
    if (first || point_value > best.value) {
      best.value = point_value;
      best.witness = {b, 1.0, false};
      first = false;
    }
    // Left-limit candidates a -> v^- for each valuation v > b.
    for (double v : vals) {
      if (v <= b) continue;
      const double limit_value = hindsight_left_limit_value(rounds, b, v);
      if (limit_value > best.value) {
        best.value = limit_value;
        best.witness = {b, v, true};
      }
    }
  }
  return best;
}

// Sort + suffix-maximum sweep; O(T log T).
inline BestFixedResult best_fixed_pair_sweep(
    const std::vector<MarketRound>& rounds) {
  const std::size_t n = rounds.size();
  std::vector<double> sv(n);
  std::vector<double> sm(n);
  {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return rounds[x].taker_valuation < rounds[y].taker_valuation;
    });
    for (std::size_t i = 0; i < n; ++i) {
      sv[i] = rounds[order[i]].taker_valuation;
      sm[i] = rounds[order[i]].market_price;
    }
  }
  std::vector<double> prefix_m(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix_m[i + 1] = prefix_m[i] + sm[i];

  // Per distinct valuation u_j: f(u_j) (bid candidate) and the ask
  // left-limit value g(u_j^-) = u_j * #{v_s >= u_j} - sum_{v_s >= u_j} m_s.
  std::vector<double> uniq;
  std::vector<double> fval;
  std::vector<double> gval;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sv[j] == sv[i]) ++j;
    const double u = sv[i];
    uniq.push_back(u);
    fval.push_back(prefix_m[j] - u * static_cast<double>(j));
    gval.push_back(u * static_cast<double>(n - i) -
                   (prefix_m[n] - prefix_m[i]));
    i = j;
  }
  const std::size_t r = uniq.size();

  // Suffix maxima of the left-limit values, with argmax tracking.
  std::vector<double> suffix_best(r + 1, 0.0);
  std::vector<std::size_t> suffix_arg(r + 1, r);
  bool have_suffix = false;
  std::vector<bool> suffix_valid(r + 1, false);
  for (std::size_t j = r; j-- > 0;) {
    suffix_best[j] = suffix_best[j + 1];
    suffix_arg[j] = suffix_arg[j + 1];
    suffix_valid[j] = suffix_valid[j + 1];
    const bool eligible = uniq[j] > 0.0;  // an ask cannot approach 0 from below
    if (eligible && (!suffix_valid[j] || gval[j] > suffix_best[j])) {
      suffix_best[j] = gval[j];
      suffix_arg[j] = j;
      suffix_valid[j] = true;
    }
    have_suffix = have_suffix || eligible;
  }

  // Scan bid candidates {0} union uniq; the admissible ask left-limits for
  // bid b are the valuations strictly above b.
  struct Candidate {
    double value = 0.0;
    double bid = 0.0;
    std::size_t limit_arg = 0;  // index into uniq, or r for "ask = 1"
  };
  std::optional<Candidate> best;
  const auto consider = [&](double b, double f, std::size_t next_j) {
    double h = 0.0;
    std::size_t arg = r;
    if (next_j < r && suffix_valid[next_j] && suffix_best[next_j] > 0.0) {
      h = suffix_best[next_j];
      arg = suffix_arg[next_j];
    }
    const double value = f + h;
    if (!best || value > best->value) best = Candidate{value, b, arg};
  };
  if (r == 0 || uniq[0] > 0.0) consider(0.0, 0.0, 0);
  for (std::size_t j = 0; j < r; ++j) consider(uniq[j], fval[j], j + 1);

  // Re-evaluate the winner by direct summation in round order.
  BestFixedResult result;
  if (!best) {  // no rounds
    result.value = 0.0;
    result.witness = {0.0, 1.0, false};
    return result;
  }
  if (best->limit_arg == r) {
    result.witness = {best->bid, 1.0, false};
    result.value = hindsight_value(rounds, BidAskPair(best->bid, 1.0));
  } else {
    const double v = uniq[best->limit_arg];
    result.witness = {best->bid, v, true};
    result.value = hindsight_left_limit_value(rounds, best->bid, v);
  }
  return result;
}

}  // namespace detail

/// Supremum of the realized cumulative utility over fixed pairs, with the
/// attaining (or approaching) witness.  Empty input yields 0 at (0, 1).
inline BestFixedResult best_fixed_pair(const std::vector<MarketRound>& rounds) {
  if (rounds.empty()) return {0.0, {0.0, 1.0, false}};
  if (rounds.size() <= detail::kHindsightEnumerationThreshold) {
    return detail::best_fixed_pair_enumerate(rounds);
  }
  return detail::best_fixed_pair_sweep(rounds);
}

/// Maximum of the hindsight objective over the triangular grid
/// {(i/n, j/n) : 0 <= i <= j <= n}.  A deliberately literal oracle: per-grid
/// marginal values by direct summation, then an exhaustive pair scan.
inline double brute_force_best(const std::vector<MarketRound>& rounds, int n) {
  detail::require(n >= 2, "brute_force_best: grid resolution must be >= 2");
  const std::size_t points = static_cast<std::size_t>(n) + 1;
  std::vector<double> fb(points, 0.0);
  std::vector<double> ga(points, 0.0);
  for (std::size_t i = 0; i < points; ++i) {
    const double b = static_cast<double>(i) / static_cast<double>(n);
    const double a = b;
    double f = 0.0;
    double g = 0.0;
    for (const MarketRound& round : rounds) {
      if (b >= round.taker_valuation) f += round.market_price - b;
      if (a < round.taker_valuation) g += a - round.market_price;
    }
    fb[i] = f;
    ga[i] = g;
  }
  double best = fb[0] + ga[0];
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = i; j < points; ++j) {
      const double value = fb[i] + ga[j];
      if (value > best) best = value;
    }
  }
  return best;
}

/// Regret of a learner trace against the hindsight benchmark.
///
/// prefix_benchmark[t] is the benchmark of rounds 1..t+1, so the trajectory
/// is exact at every prefix.  expected_benchmark / expected_regret are left
/// unset here; experiment drivers fill them for environments with closed
/// forms.
struct RegretReport {
  double total_learner_utility = 0.0;
  double benchmark_value = 0.0;
  HindsightWitness witness;
  double regret = 0.0;
  std::vector<double> cumulative_utility;
  std::vector<double> prefix_benchmark;
  std::vector<double> regret_trajectory;
  std::optional<double> expected_benchmark;
  std::optional<double> expected_regret;
};

/// Builds the full regret report, including exact per-prefix benchmarks.
///
/// The prefix engine maintains the candidate structure incrementally (O(t)
/// amortized work per round, O(T^2) total): each new round shifts the f and
/// g values of existing candidates, inserts the new valuation as a
/// candidate, and rescans for the maximum.
inline RegretReport cumulative_regret(
    const std::vector<MarketRound>& rounds,
    const std::vector<double>& learner_utilities) {
  detail::require(rounds.size() == learner_utilities.size(),
                  "cumulative_regret: rounds / utilities length mismatch");
  const std::size_t n = rounds.size();
  RegretReport report;
  report.cumulative_utility.reserve(n);
  report.prefix_benchmark.reserve(n);
  report.regret_trajectory.reserve(n);

  std::vector<double> cand{0.0};   // sorted distinct candidate prices
  std::vector<char> is_val{0};     // candidate is a seen valuation
  std::vector<double> fc{0.0};     // bid-side value f at each candidate
  std::vector<double> gc{0.0};     // ask-side left-limit value at candidates
  std::vector<MarketRound> seen;
  seen.reserve(n);

  double cum_utility = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double m = rounds[t].market_price;
    const double v = rounds[t].taker_valuation;
    seen.push_back(rounds[t]);

    // Shift existing candidates by this round's contribution.
    const auto lb = std::lower_bound(cand.begin(), cand.end(), v);
    const std::size_t first_ge = static_cast<std::size_t>(lb - cand.begin());
    for (std::size_t i = first_ge; i < cand.size(); ++i) {
      fc[i] += m - cand[i];  // buy: candidate bid >= v
    }
    const auto ub = std::upper_bound(cand.begin(), cand.end(), v);
    const std::size_t first_gt = static_cast<std::size_t>(ub - cand.begin());
    for (std::size_t i = 0; i < first_gt; ++i) {
      gc[i] += cand[i] - m;  // sell at the left limit: candidate <= v
    }

    // Insert (or mark) the new valuation as a candidate.
    if (first_ge < cand.size() && cand[first_ge] == v) {
      is_val[first_ge] = 1;
    } else {
      double f = 0.0;
      double g = 0.0;
      for (const MarketRound& round : seen) {
        if (v >= round.taker_valuation) f += round.market_price - v;
        if (v <= round.taker_valuation) g += v - round.market_price;
      }
      cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(first_ge), v);
      is_val.insert(is_val.begin() + static_cast<std::ptrdiff_t>(first_ge), 1);
      fc.insert(fc.begin() + static_cast<std::ptrdiff_t>(first_ge), f);
      gc.insert(gc.begin() + static_cast<std::ptrdiff_t>(first_ge), g);
    }

    // Rescan: best f(b) + max(0, best left-limit strictly above b).
    double best = 0.0;
    bool have_best = false;
    double suffix = 0.0;
    bool suffix_valid = false;
    for (std::size_t i = cand.size(); i-- > 0;) {
      const double h = (suffix_valid && suffix > 0.0) ? suffix : 0.0;
      const double value = fc[i] + h;
      if (!have_best || value > best) {
        best = value;
        have_best = true;
      }
      if (is_val[i] && cand[i] > 0.0) {
        if (!suffix_valid || gc[i] > suffix) {
          suffix = gc[i];
          suffix_valid = true;
        }
      }
    }

    cum_utility += learner_utilities[t];
    report.cumulative_utility.push_back(cum_utility);
    report.prefix_benchmark.push_back(best);
    report.regret_trajectory.push_back(best - cum_utility);
  }

  const BestFixedResult final_best = best_fixed_pair(rounds);
  report.total_learner_utility = cum_utility;
  report.benchmark_value = final_best.value;
  report.witness = final_best.witness;
  report.regret = final_best.value - cum_utility;
  if (!report.prefix_benchmark.empty()) {
    // Make the trajectory's final entry agree bit-for-bit with the
    // authoritative benchmark (the incremental engine can differ by ulps).
    report.prefix_benchmark.back() = final_best.value;
    report.regret_trajectory.back() = final_best.value - cum_utility;
  }
  return report;
}

/// Least-squares slope of log(regret) against log(horizon).
///
/// Requires at least three strictly increasing horizons and strictly
/// positive regrets; anything else is rejected as unfittable.
inline double fit_scaling_exponent(const std::vector<long long>& horizons,
                                   const std::vector<double>& regrets) {
  detail::require(horizons.size() == regrets.size(),
                  "fit_scaling_exponent: length mismatch");
  detail::require(horizons.size() >= 3,
                  "fit_scaling_exponent: need at least three horizons");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    detail::require(horizons[i] >= 1,
                    "fit_scaling_exponent: horizons must be positive");
    if (i > 0) {
      detail::require(horizons[i] > horizons[i - 1],
                      "fit_scaling_exponent: horizons must increase");
    }
    detail::require(regrets[i] > 0.0,
                    "fit_scaling_exponent: nonpositive regret is unfittable");
  }
  const std::size_t n = horizons.size();
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += std::log(static_cast<double>(horizons[i]));
    mean_y += std::log(regrets[i]);
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(static_cast<double>(horizons[i])) - mean_x;
    const double dy = std::log(regrets[i]) - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace mmlab
