#pragma once
// Domain types and the round-level mechanics of the market-making protocol.
//
// Each round the maker posts a bid/ask pair (bid <= ask, both in [0,1]); a
// taker with private valuation v arrives and trades against the quotes, and a
// market price m is revealed at which the maker unwinds its position.  The
// maker buys when bid >= v (boundary inclusive: a taker sells even when its
// valuation exactly equals the bid) and sells when ask < v (boundary strict).
// Round utility is
//
//     u(b, a, m, v) = (m - b) * 1{b >= v} + (a - m) * 1{a < v},
//
// i.e. the market-bid spread when buying and the ask-market spread when
// selling; at most one indicator is active because b <= a.  Comparisons are
// exact (no epsilon), so the boundary semantics are bit-reproducible.

#include <stdexcept>

namespace mmlab {

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

inline bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace detail

/// A point of the maker's action space: 0 <= bid <= ask <= 1.
struct BidAskPair {
  double bid;
  double ask;

  BidAskPair() : bid(0.0), ask(1.0) {}
  BidAskPair(double bid_, double ask_) : bid(bid_), ask(ask_) {
    detail::require(detail::in_unit(bid) && detail::in_unit(ask),
                    "BidAskPair: prices must lie in [0,1]");
    detail::require(bid <= ask, "BidAskPair: bid must not exceed ask");
  }
};

/// One environment draw: the revealed market price and the taker's valuation.
struct MarketRound {
  double market_price;
  double taker_valuation;

  MarketRound() : market_price(0.0), taker_valuation(0.0) {}
  MarketRound(double market_price_, double taker_valuation_)
      : market_price(market_price_), taker_valuation(taker_valuation_) {
    detail::require(detail::in_unit(market_price),
                    "MarketRound: market price must lie in [0,1]");
    detail::require(detail::in_unit(taker_valuation),
                    "MarketRound: taker valuation must lie in [0,1]");
  }
};

/// How the taker traded against the posted pair; exactly one case holds.
enum class TradeOutcome { Buy, Sell, NoTrade };

/// What the maker observes at a round's end.  Never both bought and sold.
struct FeedbackRecord {
  bool bought = false;
  bool sold = false;
  double market_price = 0.0;
};

/// Classifies the trade: Buy iff bid >= v, Sell iff ask < v, else NoTrade.
inline TradeOutcome trade_outcome(const BidAskPair& pair, double v) {
  detail::require(detail::in_unit(v), "trade_outcome: valuation outside [0,1]");
  if (pair.bid >= v) return TradeOutcome::Buy;
  if (pair.ask < v) return TradeOutcome::Sell;
  return TradeOutcome::NoTrade;
}

/// Round utility (m - bid) * 1{bid >= v} + (ask - m) * 1{ask < v}.
inline double utility(const BidAskPair& pair, double m, double v) {
  detail::require(detail::in_unit(m), "utility: market price outside [0,1]");
  detail::require(detail::in_unit(v), "utility: valuation outside [0,1]");
  if (pair.bid >= v) return m - pair.bid;
  if (pair.ask < v) return pair.ask - m;
  return 0.0;
}

/// Builds the maker's observation: the two trade indicators plus the market
/// price.  Together with the posted pair this is enough to recover utility.
inline FeedbackRecord make_feedback(const BidAskPair& pair,
                                    const MarketRound& round) {
  FeedbackRecord fb;
  fb.bought = pair.bid >= round.taker_valuation;
  fb.sold = pair.ask < round.taker_valuation;
  fb.market_price = round.market_price;
  return fb;
}

}  // namespace mmlab
