#pragma once

#include <Eigen/Core>

#include "noma/allocation.hpp"
#include "noma/config.hpp"

// Closed-form outage probabilities from order statistics of i.i.d.
// Gamma(N, beta) effective gains.

namespace noma {

inline constexpr int kMaxOracleUsers = 64;

/// K i.i.d. gains with Gamma(shape N, scale beta) marginals, ranked ascending.
struct OrderedGainModel {
  int K = 1;
  int N = 1;
  double beta = 1.0;

  static OrderedGainModel from(const SystemConfig& cfg) { return {cfg.K, cfg.N, cfg.beta}; }
};

/// Erlang CDF P(G <= t) for integer shape N and scale beta, clamped to [0, 1].
double gamma_cdf(double t, int N, double beta);

/// C(n, k) in floating point, multiplicative recurrence.
double binomial_coefficient(int n, int k);

/// P(G_(rank) <= t) for the rank-th smallest of K gains; rank is zero-based.
double ordered_outage_probability(const OrderedGainModel& model, int rank, double threshold);

/// All ranks at the OMA threshold (2^(K R0) - 1) / xi. This is the exact OMA
/// outage per rank and, under the fixed QoS allocation, the NOMA outage too.
Vector<double> analytic_oma_outage(const SystemConfig& cfg);

}  // namespace noma
