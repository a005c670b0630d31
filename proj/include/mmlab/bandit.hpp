#pragma once
// Adversarial K-armed bandit cores.
//
// Two interchangeable algorithms drive the discretized learners:
//
//  * Exp3 — exponential weights over importance-weighted reward estimates,
//    mixed with gamma-uniform exploration.  The played arm's estimate gets
//    reward/p(arm); sampling probabilities are
//        p_i = (1 - gamma) * softmax(eta * S_i) + gamma / K.
//    Horizon-tuned rates: gamma = min(1, sqrt(K ln K / ((e-1) T))) and
//    eta = gamma / K, which gives O(sqrt(T K ln K)) regret.
//
//  * Tsallis-INF — follow-the-regularized-leader with the 1/2-Tsallis
//    entropy over importance-weighted loss estimates (loss = 1 - reward).
//    Probabilities solve p_i = 1 / (4 eta^2 (L_i - z)^2) with the
//    normalizing z < min_i L_i chosen so the p_i sum to one; z is found by a
//    safeguarded Newton/bisection hybrid on a guaranteed bracket.  The
//    horizon-tuned rate eta = 1 / (2 sqrt(T)) gives O(sqrt(K T)) regret.
//
// Rewards are consumed on the [0,1] scale; callers translate raw utilities
// u in [-1,1] via u -> (u+1)/2 before updating.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmlab/core.hpp"
#include "mmlab/rng.hpp"

namespace mmlab {

enum class BanditAlgo { Exp3, TsallisINF };

/// State of one bandit core.  `stats` holds cumulative importance-weighted
/// reward estimates for Exp3 and cumulative importance-weighted loss
/// estimates for Tsallis-INF; `rounds` counts completed updates.
struct BanditState {
  BanditAlgo algo = BanditAlgo::Exp3;
  int K = 2;
  long long T = 1;
  long long rounds = 0;
  double eta = 0.0;
  double gamma = 0.0;  // Exp3 only
  std::vector<double> stats;
};

/// Initializes a bandit with horizon-tuned rates for (K, T).
inline BanditState make_bandit(BanditAlgo algo, int K, long long T) {
  detail::require(K >= 2, "make_bandit: need at least two arms");
  detail::require(T >= 1, "make_bandit: horizon must be >= 1");
  BanditState state;
  state.algo = algo;
  state.K = K;
  state.T = T;
  state.stats.assign(static_cast<std::size_t>(K), 0.0);
  const double kd = static_cast<double>(K);
  const double td = static_cast<double>(T);
  if (algo == BanditAlgo::Exp3) {
    state.gamma =
        std::min(1.0, std::sqrt(kd * std::log(kd) / ((std::exp(1.0) - 1.0) * td)));
    state.eta = state.gamma / kd;
  } else {
    state.eta = 1.0 / (2.0 * std::sqrt(td));
  }
  return state;
}

namespace detail {

inline std::vector<double> exp3_probabilities(const BanditState& state) {
  const std::size_t K = state.stats.size();
  std::vector<double> probs(K);
  const double smax = *std::max_element(state.stats.begin(), state.stats.end());
  double norm = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    probs[i] = std::exp(state.eta * (state.stats[i] - smax));
    norm += probs[i];
  }
  const double mix = state.gamma / static_cast<double>(K);
  for (std::size_t i = 0; i < K; ++i) {
    probs[i] = (1.0 - state.gamma) * (probs[i] / norm) + mix;
  }
  return probs;
}

// Solves sum_i 1 / (4 eta^2 (L_i - z)^2) = 1 for z < min_i L_i.
//
// The sum is strictly increasing in z.  At z = Lmin - sqrt(K)/(2 eta) the
// minimum-loss term alone contributes 1/K and every term is <= 1/K, so the
// sum is <= 1; at z = Lmin - 1/(2 eta) the minimum-loss term alone is 1, so
// the sum is >= 1.  Newton steps are taken inside that bracket and fall back
// to bisection whenever they leave it.
inline std::vector<double> tsallis_probabilities(const BanditState& state) {
  const std::size_t K = state.stats.size();
  const double eta = state.eta;
  const double lmin = *std::min_element(state.stats.begin(), state.stats.end());
  double zlo = lmin - std::sqrt(static_cast<double>(K)) / (2.0 * eta);
  double zhi = lmin - 1.0 / (2.0 * eta);

  const auto weight = [&](double li, double z) {
    const double gap = eta * (li - z);
    return 1.0 / (4.0 * gap * gap);
  };
  const auto residual = [&](double z) {
    double sum = 0.0;
    for (double li : state.stats) sum += weight(li, z);
    return sum - 1.0;
  };
  const auto slope = [&](double z) {
    // d/dz of the sum: sum_i 1 / (2 eta^2 (L_i - z)^3), positive on z < Lmin.
    double sum = 0.0;
    for (double li : state.stats) {
      const double gap = li - z;
      sum += 1.0 / (2.0 * eta * eta * gap * gap * gap);
    }
    return sum;
  };

  double z = 0.5 * (zlo + zhi);
  double res = residual(z);
  for (int iter = 0; iter < 200 && std::fabs(res) > 1e-13; ++iter) {
    if (res > 0.0) {
      zhi = z;
    } else {
      zlo = z;
    }
    const double step = res / slope(z);
    double znext = z - step;
    if (!(znext > zlo && znext < zhi)) znext = 0.5 * (zlo + zhi);
    if (znext == z) break;  // bracket exhausted at double precision
    z = znext;
    res = residual(z);
  }

  std::vector<double> probs(K);
  double norm = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    probs[i] = weight(state.stats[i], z);
    norm += probs[i];
  }
  for (auto& p : probs) p /= norm;  // absorb the residual (< 1e-13)
  return probs;
}

}  // namespace detail

/// Current sampling distribution over arms; nonnegative, sums to 1 +- 1e-12.
inline std::vector<double> arm_probabilities(const BanditState& state) {
  if (state.rounds == 0) {
    // Fresh state: exactly uniform.
    return std::vector<double>(state.stats.size(),
                               1.0 / static_cast<double>(state.K));
  }
  return state.algo == BanditAlgo::Exp3
             ? detail::exp3_probabilities(state)
             : detail::tsallis_probabilities(state);
}

/// Samples an arm from arm_probabilities(state), advancing the rng.
inline int select_arm(const BanditState& state, Rng& rng) {
  return sample_index(arm_probabilities(state), rng);
}

/// Records reward01 in [0,1] for the played arm via importance weighting.
inline void update(BanditState& state, int arm, double reward01) {
  detail::require(arm >= 0 && arm < state.K, "update: arm index out of range");
  detail::require(reward01 >= 0.0 && reward01 <= 1.0,
                  "update: reward outside [0,1]");
  const std::vector<double> probs = arm_probabilities(state);
  const double p = probs[static_cast<std::size_t>(arm)];
  if (state.algo == BanditAlgo::Exp3) {
    state.stats[static_cast<std::size_t>(arm)] += reward01 / p;
  } else {
    state.stats[static_cast<std::size_t>(arm)] += (1.0 - reward01) / p;
  }
  ++state.rounds;
}

}  // namespace mmlab
