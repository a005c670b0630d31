#pragma once
// Discretized price learners and the M3 meta-algorithm.
//
// Both sub-problems are K-armed bandits over the uniform price grid
// q_k = (k-1)/(K-1), k = 1..K:
//
//  * FPA learner — repeated first-price-auction bidding: posting bid X and
//    observing whether it won against an unknown threshold, with raw reward
//    (z - X) * 1{won} for a revealed settlement value z.
//  * DP learner — posted-price selling: posting price P, observing whether
//    it sold, with raw reward (P - c) * 1{sold} for a revealed cost c.
//
// Raw rewards live in [-1, 1] and are rescaled by x -> (x+1)/2 before the
// bandit update.
//
// M3 couples one FPA learner (bid proposal X) and one DP learner (ask
// proposal P).  If X <= P the pair (X, P) is posted as-is (ties included);
// otherwise the proposals are swapped and (P, X) is posted.  Feedback is
// relayed counterfactually so each sub-learner always learns about its OWN
// proposal, even when swapped:
//
//   not swapped:  FPA won  = bought          DP sold = sold
//   swapped:      FPA won  = NOT sold        DP sold = NOT bought
//
// In the swapped case X is the posted ask and P the posted bid, so
// 1{X >= V} = 1 - 1{X < V} = NOT sold and 1{P < V} = 1 - 1{P >= V} =
// NOT bought: the relayed indicators equal the direct ones in every case.
// Both sub-learners receive the revealed market price as their settlement
// value / cost.
//
// Posting (min, max) can only help: realized utility dominates the sum of
// the two sub-learners' raw rewards, with equality exactly when X <= P.

#include <optional>
#include <utility>

#include "mmlab/bandit.hpp"
#include "mmlab/core.hpp"

namespace mmlab {

enum class GridRole { FPA, DP };

/// A bandit over the uniform price grid, acting as one side of the quote.
struct GridLearnerState {
  GridRole role = GridRole::FPA;
  int K = 2;
  std::vector<double> grid;  // q_i = i/(K-1), i = 0..K-1
  BanditState bandit;
  std::optional<int> last_arm;
};

/// Builds a grid learner with K arms tuned for horizon T.
inline GridLearnerState make_grid_learner(GridRole role, int K, long long T,
                                          BanditAlgo algo) {
  detail::require(K >= 2, "make_grid_learner: need at least two grid points");
  GridLearnerState state;
  state.role = role;
  state.K = K;
  state.grid.resize(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    state.grid[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(K - 1);
  }
  state.bandit = make_bandit(algo, K, T);
  return state;
}

namespace detail {

inline void require_role(const GridLearnerState& state, GridRole role,
                         const char* msg) {
  if (state.role != role) throw std::logic_error(msg);
}

inline double grid_post(GridLearnerState& state, Rng& rng) {
  if (state.last_arm.has_value()) {
    throw std::logic_error("grid learner: previous round was never resolved");
  }
  const int arm = select_arm(state.bandit, rng);
  state.last_arm = arm;
  return state.grid[static_cast<std::size_t>(arm)];
}

inline void grid_resolve(GridLearnerState& state, double raw_reward) {
  if (!state.last_arm.has_value()) {
    throw std::logic_error("grid learner: update without a pending post");
  }
  update(state.bandit, *state.last_arm, (raw_reward + 1.0) / 2.0);
  state.last_arm.reset();
}

}  // namespace detail

/// Posts the FPA learner's bid X (a grid point) and records the arm.
inline double fpa_bid(GridLearnerState& state, Rng& rng) {
  detail::require_role(state, GridRole::FPA, "fpa_bid: learner role is DP");
  return detail::grid_post(state, rng);
}

/// Resolves the pending bid: raw reward (z - X) * 1{won}, rescaled to [0,1].
inline void fpa_update(GridLearnerState& state, bool won, double z) {
  detail::require_role(state, GridRole::FPA, "fpa_update: learner role is DP");
  detail::require(detail::in_unit(z), "fpa_update: z outside [0,1]");
  if (!state.last_arm.has_value()) {
    throw std::logic_error("fpa_update: update without a pending bid");
  }
  const double x = state.grid[static_cast<std::size_t>(*state.last_arm)];
  detail::grid_resolve(state, won ? z - x : 0.0);
}

/// Posts the DP learner's price P (a grid point) and records the arm.
inline double dp_price(GridLearnerState& state, Rng& rng) {
  detail::require_role(state, GridRole::DP, "dp_price: learner role is FPA");
  return detail::grid_post(state, rng);
}

/// Resolves the pending price: raw reward (P - c) * 1{sold}, rescaled.
inline void dp_update(GridLearnerState& state, bool sold, double c) {
  detail::require_role(state, GridRole::DP, "dp_update: learner role is FPA");
  detail::require(detail::in_unit(c), "dp_update: c outside [0,1]");
  if (!state.last_arm.has_value()) {
    throw std::logic_error("dp_update: update without a pending price");
  }
  const double p = state.grid[static_cast<std::size_t>(*state.last_arm)];
  detail::grid_resolve(state, sold ? p - c : 0.0);
}

/// The coupled meta-learner.  The last_* fields expose the most recent
/// proposals, swap decision, and relayed indicators for inspection.
struct M3State {
  GridLearnerState fpa;
  GridLearnerState dp;
  bool pending = false;
  double last_x = 0.0;        // FPA proposal of the pending round
  double last_p = 0.0;        // DP proposal of the pending round
  bool swapped_last = false;  // proposals were crossed and got swapped
  BidAskPair last_pair;
  bool last_fpa_won = false;  // relayed indicators of the last resolved round
  bool last_dp_sold = false;

  /// Default grid size for horizon T: ceil(T^(1/3)) + 1.
  static int default_grid_size(long long T) { return ceil_cuberoot(T) + 1; }
};

/// Builds an M3 learner for horizon T.  grid_size_override = 0 selects the
/// default K = ceil(T^(1/3)) + 1.
inline M3State make_m3(long long T, BanditAlgo algo,
                       int grid_size_override = 0) {
  const int K =
      grid_size_override > 0 ? grid_size_override : M3State::default_grid_size(T);
  M3State state;
  state.fpa = make_grid_learner(GridRole::FPA, K, T, algo);
  state.dp = make_grid_learner(GridRole::DP, K, T, algo);
  return state;
}

/// Queries both sub-learners and posts (min, max) of their proposals.
/// The FPA stream is consumed first, then the DP stream.
inline BidAskPair m3_act(M3State& state, Rng& fpa_rng, Rng& dp_rng) {
  if (state.pending) {
    throw std::logic_error("m3_act: previous round was never resolved");
  }
  const double x = fpa_bid(state.fpa, fpa_rng);
  const double p = dp_price(state.dp, dp_rng);
  state.last_x = x;
  state.last_p = p;
  state.swapped_last = x > p;  // the tie x == p keeps (x, p) unswapped
  state.last_pair =
      state.swapped_last ? BidAskPair(p, x) : BidAskPair(x, p);
  state.pending = true;
  return state.last_pair;
}

/// Relays the round's feedback to both sub-learners (see file header for the
/// counterfactual logic) with the market price as settlement value and cost.
inline void m3_update(M3State& state, const FeedbackRecord& fb) {
  if (!state.pending) {
    throw std::logic_error("m3_update: update without a pending act");
  }
  const double m = fb.market_price;
  const bool fpa_won = state.swapped_last ? !fb.sold : fb.bought;
  const bool dp_sold = state.swapped_last ? !fb.bought : fb.sold;
  fpa_update(state.fpa, fpa_won, m);
  dp_update(state.dp, dp_sold, m);
  state.last_fpa_won = fpa_won;
  state.last_dp_sold = dp_sold;
  state.pending = false;
}

/// Trivial baseline: the same pair every round, ignoring feedback.
inline BidAskPair baseline_fixed(const BidAskPair& pair) { return pair; }

/// Trivial baseline: a uniform random point of the action space, obtained by
/// drawing two uniforms and swapping them into order if needed.
inline BidAskPair baseline_random(Rng& rng) {
  double u1 = rng.uniform();
  double u2 = rng.uniform();
  if (u1 > u2) std::swap(u1, u2);
  return BidAskPair(u1, u2);
}

}  // namespace mmlab
