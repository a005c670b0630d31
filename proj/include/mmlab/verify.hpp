#pragma once
// Numerical audits of the spiked-instance construction.
//
// Region partition.  With K strips of width eps = 1/(16K) spanning the band
// (p_left, p_right] = (3/16, 1/4], the action space splits into:
//
//   Left(i)      b <= p_left,  a in [p_right - i*eps, p_right - (i-1)*eps)
//                (i = 1 closed above: a in [p_right - eps, p_right])
//   Top(i)       b in strip i, a in [p_right, p_exploit]
//   Square(i,j)  b in strip i, a in (p_right - j*eps, p_right - (j-1)*eps],
//                for i + j <= K
//   Triangle(k)  b and a both in strip k
//   Exploit(i)   b in strip i, a > p_exploit
//   White        everything else (no assertions are made there)
//
// where strip i is (p_left + (i-1)*eps, p_left + i*eps], closed below for
// i = 1.  A handful of shared boundary points carry two printed labels;
// classification resolves them by a fixed precedence (Left, Top, Square,
// Triangle, Exploit, White).  The partition property is only asserted on
// continuous samples, where boundaries have probability zero.
//
// Feedback-channel KL.  A play (b, a) observes one of three outcomes - buy
// (prob F(b)), sell (prob 1 - F(a)), or no trade - so the information a play
// gathers about the tent bump is the KL divergence between the two
// three-outcome laws induced by the base and perturbed CDFs.  The audited
// bounds: at exploit plays the KL is at most (2/81) * eps^2 (cheap spikes to
// hide from exploiters), while at explore plays it is at most (65/9) * eps.
//
// Construction values.  With the ask at 1, expected utility is exactly 1/8
// on the plateau of bids outside the bump, at least 1/8 + eps/72 at the
// spike (r, 1), and at most 1/8 - 1/32 anywhere in the explore regions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <utility>
#include <string>
#include <vector>

#include "mmlab/envs.hpp"
#include "mmlab/rng.hpp"

namespace mmlab {

struct Region {
  enum class Tag { Left, Top, Square, Triangle, Exploit, White };
  Tag tag = Tag::White;
  int i = 0;  // Left/Top/Exploit index, Triangle strip, or Square bid strip
  int j = 0;  // Square ask strip

  bool operator==(const Region& other) const {
    return tag == other.tag && i == other.i && j == other.j;
  }
};

/// Classifies (b, a) against the K-strip partition (see file header).
inline Region classify_region(double b, double a, int K) {
  detail::require(K >= 1, "classify_region: K must be >= 1");
  detail::require(detail::in_unit(b) && detail::in_unit(a) && b <= a,
                  "classify_region: (b, a) outside the action space");
  const double eps = 1.0 / (16.0 * K);
  const double p_left = 3.0 / 16.0;
  const double p_right = 0.25;
  const double p_exploit = 0.75;

  const auto in_bid_strip = [&](int i) {
    const double lo = p_left + (i - 1) * eps;
    const double hi = p_left + i * eps;
    return i == 1 ? (b >= p_left && b <= hi) : (b > lo && b <= hi);
  };

  // Left bands: i = 1 is closed at the top (a <= p_right), the rest are
  // half-open [p_right - i*eps, p_right - (i-1)*eps).
  if (b <= p_left) {
    for (int i = 1; i <= K; ++i) {
      const double lo = p_right - i * eps;
      const double hi = p_right - (i - 1) * eps;
      const bool in_band = i == 1 ? (a >= lo && a <= p_right)
                                  : (a >= lo && a < hi);
      if (in_band) return {Region::Tag::Left, i, 0};
    }
  }
  for (int i = 1; i <= K; ++i) {
    if (!in_bid_strip(i)) continue;
    if (a >= p_right && a <= p_exploit) return {Region::Tag::Top, i, 0};
    for (int j = 1; i + j <= K; ++j) {
      const double lo = p_right - j * eps;
      const double hi = p_right - (j - 1) * eps;
      if (a > lo && a <= hi) return {Region::Tag::Square, i, j};
    }
    const double strip_lo = p_left + (i - 1) * eps;
    const double strip_hi = p_left + i * eps;
    if (a > strip_lo && a <= strip_hi) return {Region::Tag::Triangle, i, 0};
    if (a > p_exploit) return {Region::Tag::Exploit, i, 0};
    break;  // b sits in strip i; no other strip can match
  }
  return {Region::Tag::White, 0, 0};
}

/// Number of non-White region predicates matching (b, a), each evaluated
/// independently (no precedence).  The partition property says this count is
/// 1 wherever classify_region is non-White and 0 where it is White; boundary
/// points shared by two printed intervals are the only double-counts, and
/// they have measure zero.
inline int count_region_matches(double b, double a, int K) {
  detail::require(K >= 1, "count_region_matches: K must be >= 1");
  detail::require(detail::in_unit(b) && detail::in_unit(a) && b <= a,
                  "count_region_matches: (b, a) outside the action space");
  const double eps = 1.0 / (16.0 * K);
  const double p_left = 3.0 / 16.0;
  const double p_right = 0.25;
  const double p_exploit = 0.75;
  const auto bid_strip = [&](double x, int i) {
    const double lo = p_left + (i - 1) * eps;
    const double hi = p_left + i * eps;
    return i == 1 ? (x >= p_left && x <= hi) : (x > lo && x <= hi);
  };
  const auto ask_band = [&](double x, int i) {
    const double lo = p_right - i * eps;
    const double hi = p_right - (i - 1) * eps;
    return i == 1 ? (x >= lo && x <= p_right) : (x >= lo && x < hi);
  };
  int matches = 0;
  for (int i = 1; i <= K; ++i) {
    if (b <= p_left && ask_band(a, i)) ++matches;                    // Left
    if (bid_strip(b, i) && a >= p_right && a <= p_exploit) ++matches;  // Top
    if (bid_strip(b, i) && a > p_exploit) ++matches;               // Exploit
    if (bid_strip(b, i) && bid_strip(a, i)) ++matches;            // Triangle
    for (int j = 1; i + j <= K; ++j) {                              // Square
      const double lo = p_right - j * eps;
      const double hi = p_right - (j - 1) * eps;
      if (bid_strip(b, i) && a > lo && a <= hi) ++matches;
    }
  }
  return matches;
}

/// KL divergence between the base and perturbed three-outcome feedback laws
/// of the play (b, a): (buy, sell, no-trade) with probabilities
/// (F(b), 1 - F(a), F(a) - F(b)) under each CDF.  Conventions:
/// 0 * log(0/q) = 0, and p > 0 with q = 0 yields +infinity.
inline double feedback_kl(double b, double a, const HardInstanceParams& params) {
  detail::require(detail::in_unit(b) && detail::in_unit(a) && b <= a,
                  "feedback_kl: (b, a) outside the action space");
  const auto term = [](double p, double q) {
    if (p == 0.0) return 0.0;
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    return p * std::log(p / q);
  };
  const double fb = base_cdf(b);
  const double fa = base_cdf(a);
  const double qb = perturbed_cdf(params.r, params.eps, b);
  const double qa = perturbed_cdf(params.r, params.eps, a);
  const double none_p = std::max(0.0, fa - fb);
  const double none_q = std::max(0.0, qa - qb);
  return term(fb, qb) + term(1.0 - fa, 1.0 - qa) + term(none_p, none_q);
}

// ---------------------------------------------------------------------------
// KL bound sweep
// ---------------------------------------------------------------------------

/// Per-region tally of a KL audit.
struct RegionKlEntry {
  std::string region;
  int spike_index = 0;  // which perturbation k the bound was checked against
  long long samples = 0;
  double max_kl = 0.0;
  double bound = 0.0;
  long long violations = 0;  // kl > bound + 1e-12
  double max_ratio = 0.0;    // max kl / bound
};

struct KlReport {
  int K = 0;
  double eps = 0.0;
  double exploit_bound = 0.0;  // (2/81) * eps^2
  double explore_bound = 0.0;  // (65/9) * eps
  std::vector<RegionKlEntry> entries;
  long long total_violations = 0;
  double max_exploit_ratio = 0.0;
  double max_explore_ratio = 0.0;
};

namespace detail {

struct RegionSampler {
  std::string name;
  double b_lo, b_hi;  // uniform box for b
  double a_lo, a_hi;  // uniform box for a
  bool triangle = false;  // sample both coordinates in [b_lo, b_hi], ordered
};

inline RegionKlEntry audit_region(const RegionSampler& sampler, int k,
                                  const HardInstanceParams& params,
                                  double bound, long long samples, Rng& rng) {
  RegionKlEntry entry;
  entry.region = sampler.name;
  entry.spike_index = k;
  entry.samples = samples;
  entry.bound = bound;
  for (long long s = 0; s < samples; ++s) {
    double b, a;
    if (sampler.triangle) {
      b = rng.uniform(sampler.b_lo, sampler.b_hi);
      a = rng.uniform(sampler.b_lo, sampler.b_hi);
      if (b > a) std::swap(b, a);
    } else {
      b = rng.uniform(sampler.b_lo, sampler.b_hi);
      a = rng.uniform(sampler.a_lo, sampler.a_hi);
    }
    const double kl = feedback_kl(b, a, params);
    if (kl > entry.max_kl) entry.max_kl = kl;
    if (kl > bound + 1e-12) ++entry.violations;
  }
  entry.max_ratio = entry.max_kl / bound;
  return entry;
}

}  // namespace detail

/// Sweeps the KL bounds for every spike index k in [1, K]: exploit plays in
/// strip k against (2/81) * eps^2, and the strip-k explore regions (Left,
/// Top, Triangle, and both Square families) against (65/9) * eps.
/// Violations are reported, not thrown.
inline KlReport check_kl_bounds(int K, long long samples_per_region, Rng& rng) {
  detail::require(K >= 2, "check_kl_bounds: K must be >= 2");
  detail::require(samples_per_region >= 1,
                  "check_kl_bounds: need at least one sample per region");
  KlReport report;
  report.K = K;
  const double eps = 1.0 / (16.0 * K);
  report.eps = eps;
  report.exploit_bound = (2.0 / 81.0) * eps * eps;
  report.explore_bound = (65.0 / 9.0) * eps;
  const double p_left = 3.0 / 16.0;
  const double p_right = 0.25;
  const double p_exploit = 0.75;

  for (int k = 1; k <= K; ++k) {
    const HardInstanceParams params = hard_instance_params_for_strips(K, k);
    const double strip_lo = p_left + (k - 1) * eps;
    const double strip_hi = p_left + k * eps;
    std::vector<std::pair<detail::RegionSampler, double>> jobs;
    jobs.push_back({{"exploit(" + std::to_string(k) + ")", strip_lo, strip_hi,
                     p_exploit, 1.0, false},
                    report.exploit_bound});
    jobs.push_back({{"left(" + std::to_string(k) + ")", 0.0, p_left,
                     p_right - k * eps, p_right - (k - 1) * eps, false},
                    report.explore_bound});
    jobs.push_back({{"top(" + std::to_string(k) + ")", strip_lo, strip_hi,
                     p_right, p_exploit, false},
                    report.explore_bound});
    jobs.push_back({{"triangle(" + std::to_string(k) + ")", strip_lo, strip_hi,
                     0.0, 0.0, true},
                    report.explore_bound});
    for (int j = 1; k + j <= K; ++j) {
      jobs.push_back({{"square(" + std::to_string(k) + "," + std::to_string(j) +
                           ")",
                       strip_lo, strip_hi, p_right - j * eps,
                       p_right - (j - 1) * eps, false},
                      report.explore_bound});
    }
    for (int i = 1; i + k <= K; ++i) {
      jobs.push_back({{"square(" + std::to_string(i) + "," + std::to_string(k) +
                           ")",
                       p_left + (i - 1) * eps, p_left + i * eps,
                       p_right - k * eps, p_right - (k - 1) * eps, false},
                      report.explore_bound});
    }
    for (const auto& [sampler, bound] : jobs) {
      RegionKlEntry entry = detail::audit_region(sampler, k, params, bound,
                                                 samples_per_region, rng);
      report.total_violations += entry.violations;
      const bool exploit = bound == report.exploit_bound;
      if (exploit) {
        report.max_exploit_ratio =
            std::max(report.max_exploit_ratio, entry.max_ratio);
      } else {
        report.max_explore_ratio =
            std::max(report.max_explore_ratio, entry.max_ratio);
      }
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Construction audit
// ---------------------------------------------------------------------------

/// Result of auditing the expected-utility landscape of one (K, k) instance.
struct ConstructionReport {
  int K = 0;
  int k = 0;
  double spike_value = 0.0;
  double spike_bound = 0.0;  // 1/8 + eps/72
  bool spike_ok = false;
  long long plateau_samples = 0;
  long long plateau_violations = 0;  // plateau points not exactly 1/8
  bool plateau_ok = false;
  double explore_max = 0.0;
  double explore_bound = 0.0;  // 1/8 - 1/32
  bool explore_ok = false;
  double argmax_bid = 0.0;
  double argmax_ask = 0.0;
  double argmax_value = 0.0;
  bool argmax_ok = false;  // argmax bid inside the bump strip, ask at 1
  bool all_pass = false;
};

/// Audits the spike / plateau / explore structure of instance (K, k) on
/// deterministic dense grids (no sampling, so the report is reproducible).
inline ConstructionReport check_construction(int K, int k) {
  const HardInstanceParams params = hard_instance_params_for_strips(K, k);
  const EnvironmentSpec spec = EnvironmentSpec::hard_instance(K, k);
  ConstructionReport report;
  report.K = K;
  report.k = k;

  // Spike: expected utility at (r, 1) clears 1/8 + eps/72.
  report.spike_value = expected_utility(spec, BidAskPair(params.r, 1.0));
  report.spike_bound = 0.125 + params.eps / 72.0;
  report.spike_ok = report.spike_value >= report.spike_bound;

  // Plateau: with the ask at 1, every bid in (3/16, 3/4] outside the bump
  // support yields exactly 1/8.  Sampled on a dense deterministic grid that
  // stays clear of the support edges by a strip-relative margin.
  {
    const int n = 4001;
    const double lo = 3.0 / 16.0;
    const double hi = 0.75;
    const double guard_lo = params.r - 0.6 * params.eps;
    const double guard_hi = params.r + 0.6 * params.eps;
    for (int i = 1; i <= n; ++i) {
      const double b = lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(n);
      if (b > guard_lo && b < guard_hi) continue;
      ++report.plateau_samples;
      if (expected_utility(spec, BidAskPair(b, 1.0)) != 0.125) {
        ++report.plateau_violations;
      }
    }
    report.plateau_ok = report.plateau_violations == 0;
  }

  // Explore regions: dense grid over b in [0, 1/4], a in [b, 3/4]; points
  // classified Left/Top/Square/Triangle must stay below 1/8 - 1/32.
  {
    const double step = params.eps / 8.0;
    const int nb = static_cast<int>(std::ceil(0.25 / step));
    const int na = static_cast<int>(std::ceil(0.75 / step));
    report.explore_bound = 0.125 - 0.03125;
    double worst = -std::numeric_limits<double>::infinity();
    for (int ib = 0; ib <= nb; ++ib) {
      const double b = 0.25 * static_cast<double>(ib) / static_cast<double>(nb);
      for (int ia = 0; ia <= na; ++ia) {
        const double a = 0.75 * static_cast<double>(ia) / static_cast<double>(na);
        if (a < b) continue;
        const Region region = classify_region(b, a, K);
        if (region.tag == Region::Tag::White ||
            region.tag == Region::Tag::Exploit) {
          continue;
        }
        const double value = expected_utility(spec, BidAskPair(b, a));
        if (value > worst) worst = value;
      }
    }
    report.explore_max = worst;
    report.explore_ok = worst <= report.explore_bound;
  }

  // Global grid argmax: must sit inside the bump's bid strip with ask 1.
  {
    const int n = 128 * K;  // grid step eps/8 across [0, 1]
    double best = -std::numeric_limits<double>::infinity();
    double best_b = 0.0;
    double best_a = 0.0;
    for (int ib = 0; ib <= n; ++ib) {
      const double b = static_cast<double>(ib) / static_cast<double>(n);
      for (int ia = ib; ia <= n; ++ia) {
        const double a = static_cast<double>(ia) / static_cast<double>(n);
        const double value = expected_utility(spec, BidAskPair(b, a));
        if (value >= best) {  // ties resolve to the largest (b, a) scanned
          best = value;
          best_b = b;
          best_a = a;
        }
      }
    }
    report.argmax_bid = best_b;
    report.argmax_ask = best_a;
    report.argmax_value = best;
    const bool in_strip = best_b >= params.r - params.eps / 2.0 &&
                          best_b <= params.r + params.eps / 2.0;
    report.argmax_ok = in_strip && best_a == 1.0;
  }

  report.all_pass = report.spike_ok && report.plateau_ok && report.explore_ok &&
                    report.argmax_ok;
  return report;
}

}  // namespace mmlab
