// Unit and property tests for the round-level domain types: validated
// prices/rounds, trade classification with its boundary semantics, the
// realized utility, and the feedback record.

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "mmlab/core.hpp"
#include "mmlab/rng.hpp"

namespace {

using namespace mmlab;

TEST(BidAskPair, DefaultIsFullSpread) {
  BidAskPair pair;
  EXPECT_EQ(pair.bid, 0.0);
  EXPECT_EQ(pair.ask, 1.0);
}

TEST(BidAskPair, StoresValidPrices) {
  BidAskPair pair(0.3, 0.7);
  EXPECT_EQ(pair.bid, 0.3);
  EXPECT_EQ(pair.ask, 0.7);
  EXPECT_NO_THROW(BidAskPair(0.5, 0.5));  // degenerate spread is allowed
  EXPECT_NO_THROW(BidAskPair(0.0, 1.0));
}

TEST(BidAskPair, RejectsInvertedOrOutOfRangePrices) {
  EXPECT_THROW(BidAskPair(0.7, 0.3), std::invalid_argument);
  EXPECT_THROW(BidAskPair(-0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(BidAskPair(0.5, 1.1), std::invalid_argument);
  EXPECT_THROW(BidAskPair(std::nan(""), 0.5), std::invalid_argument);
}

TEST(MarketRound, ValidatesUnitInterval) {
  MarketRound round(0.8, 0.2);
  EXPECT_EQ(round.market_price, 0.8);
  EXPECT_EQ(round.taker_valuation, 0.2);
  EXPECT_THROW(MarketRound(1.2, 0.5), std::invalid_argument);
  EXPECT_THROW(MarketRound(0.5, -0.01), std::invalid_argument);
}

TEST(TradeOutcome, BuyBoundaryIsInclusive) {
  EXPECT_EQ(trade_outcome(BidAskPair(0.3, 0.7), 0.3), TradeOutcome::Buy);
}

TEST(TradeOutcome, AskBoundaryDoesNotTrade) {
  EXPECT_EQ(trade_outcome(BidAskPair(0.3, 0.7), 0.7), TradeOutcome::NoTrade);
}

TEST(TradeOutcome, SellRequiresStrictlyHigherValuation) {
  EXPECT_EQ(trade_outcome(BidAskPair(0.3, 0.7), 0.71), TradeOutcome::Sell);
}

TEST(TradeOutcome, RejectsOutOfRangeValuation) {
  EXPECT_THROW(trade_outcome(BidAskPair(0.3, 0.7), 1.5),
               std::invalid_argument);
}

TEST(Utility, BuyBranchEarnsMarketMinusBid) {
  EXPECT_DOUBLE_EQ(utility(BidAskPair(0.5, 0.75), 0.9, 0.4), 0.4);
}

TEST(Utility, SellBranchEarnsAskMinusMarket) {
  EXPECT_DOUBLE_EQ(utility(BidAskPair(0.2, 0.6), 0.5, 0.7), 0.1);
}

TEST(Utility, NoTradeEarnsZero) {
  EXPECT_EQ(utility(BidAskPair(0.2, 0.6), 0.5, 0.4), 0.0);
}

TEST(Utility, DegenerateSpreadBuysAtItsOwnValuation) {
  // bid == ask == v buys (inclusive boundary) and earns m - bid.
  EXPECT_DOUBLE_EQ(utility(BidAskPair(0.4, 0.4), 0.9, 0.4), 0.5);
}

TEST(Utility, RejectsOutOfRangeInputs) {
  EXPECT_THROW(utility(BidAskPair(0.2, 0.6), 1.5, 0.4),
               std::invalid_argument);
  EXPECT_THROW(utility(BidAskPair(0.2, 0.6), 0.5, -0.4),
               std::invalid_argument);
}

TEST(MakeFeedback, ReportsBuySide) {
  const FeedbackRecord fb =
      make_feedback(BidAskPair(0.5, 0.9), MarketRound(0.8, 0.2));
  EXPECT_TRUE(fb.bought);
  EXPECT_FALSE(fb.sold);
  EXPECT_EQ(fb.market_price, 0.8);
}

TEST(MakeFeedback, ReportsSellSide) {
  const FeedbackRecord fb =
      make_feedback(BidAskPair(0.1, 0.2), MarketRound(0.8, 0.9));
  EXPECT_FALSE(fb.bought);
  EXPECT_TRUE(fb.sold);
  EXPECT_EQ(fb.market_price, 0.8);
}

TEST(MakeFeedback, ReportsNoTrade) {
  const FeedbackRecord fb =
      make_feedback(BidAskPair(0.1, 0.9), MarketRound(0.8, 0.5));
  EXPECT_FALSE(fb.bought);
  EXPECT_FALSE(fb.sold);
  EXPECT_EQ(fb.market_price, 0.8);
}

// For random (pair, m, v): exactly one outcome holds, the utility matches
// that outcome's branch exactly, |utility| <= 1, and the feedback record
// agrees with the outcome.
TEST(RoundProperties, OutcomeUtilityAndFeedbackAreConsistent) {
  Rng rng(314159);
  for (int i = 0; i < 10000; ++i) {
    double b = rng.uniform();
    double a = rng.uniform();
    if (b > a) std::swap(b, a);
    const BidAskPair pair(b, a);
    const double m = rng.uniform();
    const double v = rng.uniform();
    const TradeOutcome outcome = trade_outcome(pair, v);
    const double u = utility(pair, m, v);
    const FeedbackRecord fb = make_feedback(pair, MarketRound(m, v));

    const bool buy = b >= v;
    const bool sell = a < v;
    ASSERT_FALSE(buy && sell);
    switch (outcome) {
      case TradeOutcome::Buy:
        ASSERT_TRUE(buy);
        ASSERT_EQ(u, m - b);
        break;
      case TradeOutcome::Sell:
        ASSERT_TRUE(sell);
        ASSERT_EQ(u, a - m);
        break;
      case TradeOutcome::NoTrade:
        ASSERT_TRUE(!buy && !sell);
        ASSERT_EQ(u, 0.0);
        break;
    }
    ASSERT_LE(std::fabs(u), 1.0);
    ASSERT_EQ(fb.bought, outcome == TradeOutcome::Buy);
    ASSERT_EQ(fb.sold, outcome == TradeOutcome::Sell);
    ASSERT_FALSE(fb.bought && fb.sold);
    ASSERT_EQ(fb.market_price, m);
  }
}

// With ask, m, v fixed, the utility as a function of the bid jumps only at
// bid = v and is affine (slope -1 above, slope 0 below, up to the sell term).
TEST(RoundProperties, UtilityIsPiecewiseAffineInBid) {
  Rng rng(2718);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.uniform(0.1, 0.9);
    const double m = rng.uniform();
    const double a = rng.uniform(v, 1.0);  // keep the pair valid on both sides
    const double lo1 = rng.uniform(0.0, v);
    const double lo2 = rng.uniform(0.0, v);
    ASSERT_EQ(utility(BidAskPair(lo1, a), m, v), utility(BidAskPair(lo2, a), m, v));
    const double hi1 = rng.uniform(v, a);
    const double hi2 = rng.uniform(v, a);
    const double diff = utility(BidAskPair(hi1, a), m, v) -
                        utility(BidAskPair(hi2, a), m, v);
    ASSERT_NEAR(diff, hi2 - hi1, 1e-15);
  }
}

// Symmetric statement for the ask: jump only at ask = v, affine elsewhere.
TEST(RoundProperties, UtilityIsPiecewiseAffineInAsk) {
  Rng rng(1618);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.uniform(0.1, 0.9);
    const double m = rng.uniform();
    const double b = rng.uniform(0.0, v);  // below v so the bid never buys
    const double hi1 = rng.uniform(v, 1.0);
    const double hi2 = rng.uniform(v, 1.0);
    ASSERT_EQ(utility(BidAskPair(b, hi1), m, v), utility(BidAskPair(b, hi2), m, v));
    const double lo1 = rng.uniform(b, v);
    const double lo2 = rng.uniform(b, v);
    const double diff = utility(BidAskPair(b, lo1), m, v) -
                        utility(BidAskPair(b, lo2), m, v);
    ASSERT_NEAR(diff, lo1 - lo2, 1e-15);
  }
}

}  // namespace
