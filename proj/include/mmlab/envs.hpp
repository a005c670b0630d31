#pragma once
// Round-generating processes.
//
// Three built-in families plus replayed traces:
//
//  * SmoothIID — independent draws with a Lipschitz valuation CDF (the
//    piecewise "base" density below, or Uniform[0,1]) and a market price
//    uniform on the high band [7/8, 1] (or Uniform[0,1]).
//  * HardInstance — the spiked family used for rate experiments and the
//    information-theoretic audits in verify.hpp.  Valuations follow the base
//    density plus a small tent-shaped CDF bump of width eps centered at r;
//    market prices are uniform on [7/8, 1].  The bump creates a reward spike
//    of height ~eps at the pair (r, 1) on top of an exactly flat plateau of
//    expected utility 1/8, so locating the spike requires costly exploration.
//  * Unlearnable — (m, v) i.i.d. uniform on the two-point set {(0,d), (1,c)}
//    with 0 < c < d < 1.  Any price strictly inside (c, d) trades every round;
//    prices outside earn nothing, so learners whose price grid misses (c, d)
//    suffer linear regret while the fixed pair (p, p), c < p < d, earns
//    (p + (1-p))/2 per round.
//
// Base valuation density f and its CDF F:
//
//     f(x) = 8/9                   on [0, 3/16]
//          = (1/8) / (15/16 - x)^2 on (3/16, 3/4]
//          = 8/3                   on (3/4, 7/8]
//          = 0                     on (7/8, 1]
//
//     F(x) = (8/9) x               on [0, 3/16]
//          = (1/8) / (15/16 - x)   on (3/16, 3/4]
//          = (8/3) (x - 1/2)       on (3/4, 7/8]
//          = 1                     on (7/8, 1]
//
// The perturbed CDF is F_{r,eps}(x) = F(x) + (eps/18) * tent(r, eps, x) where
// tent is the triangular bump of height 1 and width eps centered at r; the
// corresponding density adds +1/9 on [r - eps/2, r] and -1/9 on (r, r + eps/2].
// Admissible (r, eps) keep the bump support inside [3/16, 11/16].

#include <cmath>
#include <cstdint>
#include <vector>

#include "mmlab/core.hpp"
#include "mmlab/rng.hpp"

namespace mmlab {

// ---------------------------------------------------------------------------
// Base distribution
// ---------------------------------------------------------------------------

/// Piecewise base valuation density (see file header).
inline double base_pdf(double x) {
  detail::require(detail::in_unit(x), "base_pdf: x outside [0,1]");
  if (x <= 3.0 / 16.0) return 8.0 / 9.0;
  if (x <= 0.75) {
    const double gap = 0.9375 - x;  // 15/16 - x
    return 0.125 / (gap * gap);
  }
  if (x <= 0.875) return 8.0 / 3.0;
  return 0.0;
}

/// CDF of base_pdf; continuous, F(0) = 0, F(x) = 1 for x >= 7/8.
inline double base_cdf(double x) {
  detail::require(detail::in_unit(x), "base_cdf: x outside [0,1]");
  if (x <= 3.0 / 16.0) return (8.0 * x) / 9.0;
  if (x <= 0.75) return 0.125 / (0.9375 - x);
  if (x <= 0.875) return 8.0 * (x - 0.5) / 3.0;
  return 1.0;
}

/// Closed-form inverse of base_cdf on [0, 1); used by the SmoothIID sampler.
inline double base_cdf_inverse(double u) {
  detail::require(u >= 0.0 && u < 1.0, "base_cdf_inverse: u outside [0,1)");
  if (u <= 1.0 / 6.0) return (9.0 * u) / 8.0;
  if (u <= 2.0 / 3.0) return 0.9375 - 0.125 / u;
  return 0.5 + (3.0 / 8.0) * u;
}

// ---------------------------------------------------------------------------
// Tent perturbation
// ---------------------------------------------------------------------------

namespace detail {

// Admissibility of (r, eps): bump support inside [3/16, 11/16].  The 1e-12
// slack absorbs the rounding of r = 3/16 + (k - 1/2) * eps, whose computed
// support edge can land one ulp outside the exact bound.
inline void require_admissible_tent(double r, double eps, const char* who) {
  require(eps > 0.0 && eps <= 1.0, who);
  require(r - eps / 2.0 >= 3.0 / 16.0 - 1e-12, who);
  require(r + eps / 2.0 <= 11.0 / 16.0 + 1e-12, who);
}

}  // namespace detail

/// Triangular bump of height 1 and width eps centered at r; exactly zero at
/// and outside the support edges r -+ eps/2, peak tent(r, eps, r) = 1.  The
/// edge test is inclusive so the boundary value is 0 rather than ramp
/// roundoff, which also keeps the ramp nonnegative throughout.
inline double tent(double r, double eps, double x) {
  detail::require_admissible_tent(r, eps,
                                  "tent: (r, eps) outside the admissible set");
  if (x <= r - eps / 2.0 || x >= r + eps / 2.0) return 0.0;
  if (x <= r) return 1.0 - (2.0 / eps) * (r - x);
  return 1.0 - (2.0 / eps) * (x - r);
}

/// F(x) + (eps/18) * tent(r, eps, x); nondecreasing with endpoints 0 and 1.
inline double perturbed_cdf(double r, double eps, double x) {
  detail::require_admissible_tent(
      r, eps, "perturbed_cdf: (r, eps) outside the admissible set");
  return base_cdf(x) + (eps / 18.0) * tent(r, eps, x);
}

/// Base density plus the +/- 1/9 square bump; integrates to 1.
inline double perturbed_pdf(double r, double eps, double x) {
  detail::require_admissible_tent(
      r, eps, "perturbed_pdf: (r, eps) outside the admissible set");
  double bump = 0.0;
  if (x >= r - eps / 2.0 && x <= r) {
    bump = 1.0 / 9.0;
  } else if (x > r && x <= r + eps / 2.0) {
    bump = -1.0 / 9.0;
  }
  return base_pdf(x) + bump;
}

// ---------------------------------------------------------------------------
// Hard-instance parameters
// ---------------------------------------------------------------------------

/// Derived constants of the spiked valuation family.
///
/// K strips of width eps = 1/(16K) tile the band (3/16, 1/4]; the bump of
/// instance k is centered at r = 3/16 + (k - 1/2) * eps, i.e. at the middle
/// of strip k.  The remaining fields are fixed landmark constants: the strip
/// band's edges (p_left, p_right), the exploit threshold p_exploit, and the
/// plateau/spike margins used by the construction audits.
struct HardInstanceParams {
  int K = 1;
  int k = 1;
  double eps = 1.0 / 16.0;
  double r = 3.0 / 16.0 + 1.0 / 32.0;
  double p_left = 3.0 / 16.0;
  double p_right = 0.25;
  double p_exploit = 0.75;
  double c_plat = 1.0 / 32.0;
  double c_spike = 1.0 / 72.0;
};

/// Smallest integer K >= 1 with K^3 >= T (the ceiling of T^(1/3)), computed
/// exactly in integer arithmetic.
inline int ceil_cuberoot(long long T) {
  detail::require(T >= 1, "ceil_cuberoot: T must be >= 1");
  int K = static_cast<int>(std::llround(std::cbrt(static_cast<double>(T))));
  if (K < 1) K = 1;
  while (static_cast<long long>(K) * K * K < T) ++K;
  while (K > 1 && static_cast<long long>(K - 1) * (K - 1) * (K - 1) >= T) --K;
  return K;
}

/// Parameters for a given strip count K and spike index k in [1, K].
inline HardInstanceParams hard_instance_params_for_strips(int K, int k) {
  detail::require(K >= 1, "hard_instance_params: K must be >= 1");
  detail::require(k >= 1 && k <= K, "hard_instance_params: k outside [1, K]");
  HardInstanceParams p;
  p.K = K;
  p.k = k;
  p.eps = 1.0 / (16.0 * K);
  p.r = 3.0 / 16.0 + (k - 0.5) * p.eps;
  return p;
}

/// Parameters for horizon T: K = ceil(T^(1/3)), eps = 1/(16K),
/// r = 3/16 + (k - 1/2) * eps.
inline HardInstanceParams hard_instance_params(long long T, int k) {
  return hard_instance_params_for_strips(ceil_cuberoot(T), k);
}

/// Inverse-CDF sample of the perturbed valuation law: the x in [0, 7/8] with
/// perturbed_cdf(x) = u, found by bisection to absolute tolerance 1e-12 on x.
///
/// Bisection (rather than rejection or piecewise closed forms) keeps the map
/// from the raw uniform stream to samples fixed and reproducible.
inline double sample_hard_valuation(const HardInstanceParams& params,
                                    double u) {
  detail::require(u > 0.0 && u < 1.0,
                  "sample_hard_valuation: u outside (0,1)");
  double lo = 0.0;
  double hi = 0.875;  // the CDF reaches 1 at 7/8 and is flat beyond
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (perturbed_cdf(params.r, params.eps, mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Environment specification and sampling
// ---------------------------------------------------------------------------

enum class EnvKind { SmoothIID, HardInstance, Unlearnable, Custom };

enum class ValuationModel { BaseDensity, Uniform01 };

/// Market-price law: HighBand is uniform on [7/8, 1] (mean 15/16).
enum class MarketModel { HighBand, Uniform01 };

/// Parametric description of a round-generating process.  Build through the
/// factory functions, which validate the per-kind parameters.
struct EnvironmentSpec {
  EnvKind kind = EnvKind::SmoothIID;
  // SmoothIID
  ValuationModel valuation = ValuationModel::BaseDensity;
  MarketModel market = MarketModel::HighBand;
  // HardInstance
  int K = 0;
  int k = 0;
  // Unlearnable
  double c = 0.0;
  double d = 0.0;
  // Custom: a replayed trace, consumed by round index.
  std::vector<MarketRound> trace;

  static EnvironmentSpec smooth_iid(
      ValuationModel valuation = ValuationModel::BaseDensity,
      MarketModel market = MarketModel::HighBand) {
    EnvironmentSpec spec;
    spec.kind = EnvKind::SmoothIID;
    spec.valuation = valuation;
    spec.market = market;
    return spec;
  }

  static EnvironmentSpec hard_instance(int K, int k) {
    // Validates (K, k) and the derived tent admissibility.
    const HardInstanceParams params = hard_instance_params_for_strips(K, k);
    EnvironmentSpec spec;
    spec.kind = EnvKind::HardInstance;
    spec.K = params.K;
    spec.k = params.k;
    return spec;
  }

  static EnvironmentSpec hard_instance_for_horizon(long long T, int k) {
    return hard_instance(ceil_cuberoot(T), k);
  }

  static EnvironmentSpec unlearnable(double c, double d) {
    detail::require(0.0 < c && c < d && d < 1.0,
                    "EnvironmentSpec: unlearnable requires 0 < c < d < 1");
    EnvironmentSpec spec;
    spec.kind = EnvKind::Unlearnable;
    spec.c = c;
    spec.d = d;
    return spec;
  }

  static EnvironmentSpec custom(std::vector<MarketRound> trace) {
    EnvironmentSpec spec;
    spec.kind = EnvKind::Custom;
    spec.trace = std::move(trace);
    return spec;
  }

  HardInstanceParams hard_params() const {
    detail::require(kind == EnvKind::HardInstance,
                    "hard_params: spec is not a hard instance");
    return hard_instance_params_for_strips(K, k);
  }
};

/// Draws round t (1-based, matching the protocol loop t = 1..T).  For
/// i.i.d. kinds, one round consumes a fixed number of uniforms in a fixed
/// order (valuation first, then market price), so traces are reproducible
/// from the seed alone.
inline MarketRound next_round(const EnvironmentSpec& spec, long long t,
                              Rng& rng) {
  detail::require(t >= 1, "next_round: rounds are numbered from 1");
  switch (spec.kind) {
    case EnvKind::SmoothIID: {
      const double uv = rng.uniform();
      const double v = spec.valuation == ValuationModel::BaseDensity
                           ? base_cdf_inverse(uv)
                           : uv;
      const double um = rng.uniform();
      const double m =
          spec.market == MarketModel::HighBand ? 0.875 + 0.125 * um : um;
      return MarketRound(m, v);
    }
    case EnvKind::HardInstance: {
      const HardInstanceParams params = spec.hard_params();
      const double v = sample_hard_valuation(params, rng.uniform_open());
      const double m = 0.875 + 0.125 * rng.uniform();
      return MarketRound(m, v);
    }
    case EnvKind::Unlearnable: {
      const double u = rng.uniform();
      return u < 0.5 ? MarketRound(0.0, spec.d) : MarketRound(1.0, spec.c);
    }
    case EnvKind::Custom: {
      detail::require(static_cast<std::size_t>(t) <= spec.trace.size(),
                      "next_round: round index beyond the recorded trace");
      return spec.trace[static_cast<std::size_t>(t - 1)];
    }
  }
  throw std::invalid_argument("next_round: unknown environment kind");
}

// ---------------------------------------------------------------------------
// Closed-form expected utility
// ---------------------------------------------------------------------------

namespace detail {

// Expected utility of (b, a) under the spiked family:
//
//     (15/16 - b) * F_{r,eps}(b) + (a - 15/16) * (1 - F_{r,eps}(a)),
//
// using E[M] = 15/16 and the independence of market price and valuation.
//
// The bid-side product is evaluated through its piecewise expansion rather
// than literally: on (3/16, 3/4] the factors cancel to the constant 1/8 plus
// the tent term, and the expansion preserves that exactness in floating
// point (the literal product can be off by one ulp).  The equivalence of the
// two forms is property-tested to 1e-15.
inline double hard_expected_utility(const HardInstanceParams& hp, double b,
                                    double a) {
  const double em = 0.9375;  // E[M] = 15/16
  double bid_term;
  if (b <= 3.0 / 16.0) {
    bid_term = (8.0 / 9.0) * b * (em - b);
  } else if (b <= 0.75) {
    bid_term = 0.125 + (hp.eps / 18.0) * (em - b) * tent(hp.r, hp.eps, b);
  } else if (b <= 0.875) {
    bid_term = (8.0 / 3.0) * (b - 0.5) * (em - b);
  } else {
    bid_term = em - b;  // F = 1 beyond 7/8
  }
  const double ask_term = (a - em) * (1.0 - perturbed_cdf(hp.r, hp.eps, a));
  return bid_term + ask_term;
}

}  // namespace detail

/// Per-round expected utility of a fixed pair under environments with a
/// closed form (HardInstance and Unlearnable); throws for other kinds.
inline double expected_utility(const EnvironmentSpec& spec,
                               const BidAskPair& pair) {
  switch (spec.kind) {
    case EnvKind::HardInstance:
      return detail::hard_expected_utility(spec.hard_params(), pair.bid,
                                           pair.ask);
    case EnvKind::Unlearnable:
      return 0.5 * utility(pair, 0.0, spec.d) + 0.5 * utility(pair, 1.0, spec.c);
    default:
      throw std::invalid_argument(
          "expected_utility: no closed form for this environment kind");
  }
}

}  // namespace mmlab
