// Tests for the grid learners (first-price-auction bidder and posted-price
// seller) and the M3 meta-learner that couples them: grid construction,
// reward rescaling, the post/resolve protocol, swap and tie handling,
// counterfactual feedback relay, and the utility decomposition bound.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "mmlab/core.hpp"
#include "mmlab/envs.hpp"
#include "mmlab/learners.hpp"
#include "mmlab/rng.hpp"

namespace {

using namespace mmlab;

TEST(GridLearner, UniformGridPoints) {
  const GridLearnerState state =
      make_grid_learner(GridRole::FPA, 5, 1000, BanditAlgo::Exp3);
  ASSERT_EQ(state.grid.size(), 5u);
  EXPECT_EQ(state.grid[0], 0.0);
  EXPECT_EQ(state.grid[1], 0.25);
  EXPECT_EQ(state.grid[2], 0.5);
  EXPECT_EQ(state.grid[3], 0.75);
  EXPECT_EQ(state.grid[4], 1.0);
  EXPECT_THROW(make_grid_learner(GridRole::DP, 1, 1000, BanditAlgo::Exp3),
               std::invalid_argument);
}

TEST(GridLearner, EnforcesRole) {
  GridLearnerState fpa = make_grid_learner(GridRole::FPA, 4, 100,
                                           BanditAlgo::Exp3);
  GridLearnerState dp = make_grid_learner(GridRole::DP, 4, 100,
                                          BanditAlgo::Exp3);
  Rng rng(1);
  EXPECT_THROW(dp_price(fpa, rng), std::logic_error);
  EXPECT_THROW(fpa_bid(dp, rng), std::logic_error);
  EXPECT_THROW(dp_update(fpa, true, 0.5), std::logic_error);
  EXPECT_THROW(fpa_update(dp, true, 0.5), std::logic_error);
}

TEST(GridLearner, PostResolveProtocol) {
  GridLearnerState state =
      make_grid_learner(GridRole::FPA, 4, 100, BanditAlgo::Exp3);
  Rng rng(2);
  EXPECT_THROW(fpa_update(state, true, 0.5), std::logic_error);
  fpa_bid(state, rng);
  EXPECT_THROW(fpa_bid(state, rng), std::logic_error);  // unresolved post
  fpa_update(state, false, 0.5);
  EXPECT_FALSE(state.last_arm.has_value());
  EXPECT_NO_THROW(fpa_bid(state, rng));
  EXPECT_THROW(fpa_update(state, true, 1.5), std::invalid_argument);
}

// White-box rescaling checks: with a fresh 5-arm Exp3 core each arm has
// probability exactly 0.2, so the importance-weighted statistic after one
// update is ((raw + 1) / 2) / 0.2 exactly.
TEST(GridLearner, FpaRewardRescaling) {
  {
    GridLearnerState s = make_grid_learner(GridRole::FPA, 5, 100,
                                           BanditAlgo::Exp3);
    s.last_arm = 2;  // bid X = 0.5
    fpa_update(s, true, 0.9);  // raw = 0.4, reward01 = 0.7
    EXPECT_DOUBLE_EQ(s.bandit.stats[2], 3.5);
  }
  {
    GridLearnerState s = make_grid_learner(GridRole::FPA, 5, 100,
                                           BanditAlgo::Exp3);
    s.last_arm = 2;
    fpa_update(s, false, 0.9);  // losing pays 0, reward01 = 0.5
    EXPECT_DOUBLE_EQ(s.bandit.stats[2], 2.5);
  }
  {
    GridLearnerState s = make_grid_learner(GridRole::FPA, 5, 100,
                                           BanditAlgo::Exp3);
    s.last_arm = 4;  // bid X = 1
    fpa_update(s, true, 0.0);  // raw = -1, reward01 = 0
    EXPECT_EQ(s.bandit.stats[4], 0.0);
  }
}

TEST(GridLearner, DpRewardRescaling) {
  {
    GridLearnerState s = make_grid_learner(GridRole::DP, 5, 100,
                                           BanditAlgo::Exp3);
    s.last_arm = 3;  // price P = 0.75
    dp_update(s, true, 0.9);  // raw = -0.15, reward01 = 0.425
    EXPECT_DOUBLE_EQ(s.bandit.stats[3], 2.125);
  }
  {
    GridLearnerState s = make_grid_learner(GridRole::DP, 5, 100,
                                           BanditAlgo::Exp3);
    s.last_arm = 4;  // price P = 1
    dp_update(s, true, 0.0);  // raw = 1, reward01 = 1
    EXPECT_DOUBLE_EQ(s.bandit.stats[4], 5.0);
  }
  {
    GridLearnerState s = make_grid_learner(GridRole::DP, 5, 100,
                                           BanditAlgo::Exp3);
    s.last_arm = 0;
    dp_update(s, false, 0.3);  // no sale pays 0, reward01 = 0.5
    EXPECT_DOUBLE_EQ(s.bandit.stats[0], 2.5);
  }
}

TEST(M3, DefaultGridSizeIsCeilCubeRootPlusOne) {
  for (long long T = 1; T <= 1000; ++T) {
    int c = 1;
    while (static_cast<long long>(c) * c * c < T) ++c;
    ASSERT_EQ(M3State::default_grid_size(T), c + 1) << "T=" << T;
  }
  const M3State m3 = make_m3(1000, BanditAlgo::Exp3);
  EXPECT_EQ(m3.fpa.K, 11);
  EXPECT_EQ(m3.dp.K, 11);
  EXPECT_EQ(make_m3(1000, BanditAlgo::Exp3, 7).fpa.K, 7);
}

TEST(M3, PostsOrderedPairAndTracksSwap) {
  M3State state = make_m3(500, BanditAlgo::Exp3);
  Rng fpa_rng(3);
  Rng dp_rng(4);
  Rng env_rng(5);
  bool saw_swap = false;
  for (int t = 0; t < 500; ++t) {
    const BidAskPair pair = m3_act(state, fpa_rng, dp_rng);
    ASSERT_LE(pair.bid, pair.ask);
    ASSERT_EQ(state.swapped_last, state.last_x > state.last_p);
    if (state.swapped_last) {
      saw_swap = true;
      ASSERT_EQ(pair.bid, state.last_p);
      ASSERT_EQ(pair.ask, state.last_x);
    } else {
      ASSERT_EQ(pair.bid, state.last_x);
      ASSERT_EQ(pair.ask, state.last_p);
    }
    m3_update(state, make_feedback(pair, MarketRound(env_rng.uniform(),
                                                     env_rng.uniform())));
  }
  EXPECT_TRUE(saw_swap);
}

// With a 2-point grid ties x == p happen constantly; they must never swap.
TEST(M3, TieKeepsProposalsUnswapped) {
  M3State state = make_m3(500, BanditAlgo::Exp3, 2);
  Rng fpa_rng(6);
  Rng dp_rng(7);
  Rng env_rng(8);
  int ties = 0;
  for (int t = 0; t < 300; ++t) {
    const BidAskPair pair = m3_act(state, fpa_rng, dp_rng);
    if (state.last_x == state.last_p) {
      ++ties;
      ASSERT_FALSE(state.swapped_last);
      ASSERT_EQ(pair.bid, state.last_x);
      ASSERT_EQ(pair.ask, state.last_p);
    }
    m3_update(state, make_feedback(pair, MarketRound(env_rng.uniform(),
                                                     env_rng.uniform())));
  }
  EXPECT_GT(ties, 10);
}

TEST(M3, ActUpdateProtocol) {
  M3State state = make_m3(100, BanditAlgo::Exp3);
  Rng fpa_rng(9);
  Rng dp_rng(10);
  FeedbackRecord fb;
  fb.market_price = 0.5;
  EXPECT_THROW(m3_update(state, fb), std::logic_error);
  m3_act(state, fpa_rng, dp_rng);
  EXPECT_THROW(m3_act(state, fpa_rng, dp_rng), std::logic_error);
  m3_update(state, fb);
  EXPECT_NO_THROW(m3_act(state, fpa_rng, dp_rng));
}

// The relayed indicators must equal the direct indicators of the proposals:
// FPA won = 1{X >= V} and DP sold = 1{P < V}, swap or no swap.
TEST(M3, RelayedFeedbackMatchesDirectIndicators) {
  M3State state = make_m3(1000, BanditAlgo::TsallisINF);
  Rng fpa_rng(11);
  Rng dp_rng(12);
  Rng env_rng(13);
  for (int t = 0; t < 1000; ++t) {
    const BidAskPair pair = m3_act(state, fpa_rng, dp_rng);
    const MarketRound round(env_rng.uniform(), env_rng.uniform());
    m3_update(state, make_feedback(pair, round));
    ASSERT_EQ(state.last_fpa_won, state.last_x >= round.taker_valuation);
    ASSERT_EQ(state.last_dp_sold, state.last_p < round.taker_valuation);
  }
}

// Posting (min, max) dominates the sum of the sub-learners' raw payoffs:
//   u(min(x,p), max(x,p)) >= (m - x) 1{x >= v} + (p - m) 1{v > p},
// with equality exactly when x <= p.
TEST(M3, UtilityDominatesDecomposition) {
  Rng rng(14);
  const double tol = 1e-12;
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform();
    const double p = rng.uniform();
    const double v = rng.uniform();
    const double m = rng.uniform();
    const BidAskPair pair(std::min(x, p), std::max(x, p));
    const double u = utility(pair, m, v);
    const double rhs =
        (x >= v ? m - x : 0.0) + (v > p ? p - m : 0.0);
    ASSERT_GE(u, rhs - tol);
    if (x <= p) {
      ASSERT_LE(std::fabs(u - rhs), tol);
    }
  }
}

TEST(Baselines, FixedReturnsTheSamePair) {
  const BidAskPair pair(0.3, 0.8);
  const BidAskPair out = baseline_fixed(pair);
  EXPECT_EQ(out.bid, 0.3);
  EXPECT_EQ(out.ask, 0.8);
}

TEST(Baselines, RandomPairIsAlwaysOrdered) {
  Rng rng(15);
  for (int i = 0; i < 10000; ++i) {
    const BidAskPair pair = baseline_random(rng);
    ASSERT_GE(pair.bid, 0.0);
    ASSERT_LE(pair.ask, 1.0);
    ASSERT_LE(pair.bid, pair.ask);
  }
}

// On the two-atom environment with atoms (m=0, v=0.51) and (m=1, v=0.49),
// the fixed pair (0.5, 0.5) earns exactly 0.5 every round: it sells to the
// high-valuation taker (0.5 - 0) and buys from the low-valuation one
// (1 - 0.5).
TEST(Baselines, MidpointPairEarnsHalfEveryRoundOnTwoAtomEnv) {
  const EnvironmentSpec spec = EnvironmentSpec::unlearnable(0.49, 0.51);
  const BidAskPair pair(0.5, 0.5);
  Rng rng(16);
  for (long long t = 1; t <= 100; ++t) {
    const MarketRound round = next_round(spec, t, rng);
    ASSERT_EQ(utility(pair, round.market_price, round.taker_valuation), 0.5);
  }
}

}  // namespace
