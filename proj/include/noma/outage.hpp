#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "noma/allocation.hpp"
#include "noma/channel.hpp"
#include "noma/config.hpp"

namespace noma {

// Capacities (bits/s/Hz). User indices are zero-based and follow gain order.

/// log2(1 + a_n xi g_n / (1 + xi g_n A_n)); for the last user A_K = 0.
double noma_capacity(const ChannelRealization& realization, const Allocation& alloc,
                     const SystemConfig& cfg, Eigen::Index user);

/// Rate at which `decoder` can decode the message of `target` (target < decoder).
double sic_capacity(const ChannelRealization& realization, const Allocation& alloc,
                    const SystemConfig& cfg, Eigen::Index decoder, Eigen::Index target);

/// (1/K) log2(1 + xi g).
double oma_capacity(double gain, const SystemConfig& cfg);

using BoolVector = Eigen::Array<bool, Eigen::Dynamic, 1>;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Per-trial outage outcomes; `true` means outage.
///
/// decode_step(n, m) for m < n is the SIC step B_{n->m}; the diagonal
/// decode_step(n, n) is user n's own decode step taken in isolation.
/// own_signal(n) is the whole chain: any failed step is an own-signal outage.
struct OutageMatrix {
  BoolVector own_signal;
  BoolMatrix decode_step;
  BoolVector oma;
};

/// Pre-solved decision boundaries for one (allocation, config) pair.
struct DecisionThresholds {
  Vector<double> decode;  // t_m, +inf where the message is undecodable
  Vector<double> own;     // max_{m <= n} t_m
  double oma = 0.0;

  static DecisionThresholds make(const Allocation& alloc, const SystemConfig& cfg);
};

/// Threshold comparisons only; a gain equal to its threshold is an outage.
OutageMatrix evaluate_trial(const Eigen::Ref<const Vector<double>>& gains,
                            const DecisionThresholds& thresholds);

OutageMatrix evaluate_trial(const ChannelRealization& realization, const Allocation& alloc,
                            const SystemConfig& cfg);

/// Number of decisions in `outcome` that disagree with direct capacity
/// comparisons (C > R0). Gains within `band` (relative) of a threshold are
/// skipped since rounding decides those.
std::size_t capacity_disagreements(const ChannelRealization& realization, const Allocation& alloc,
                                   const SystemConfig& cfg, const OutageMatrix& outcome,
                                   double band = 1e-9);

using CountVector = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, 1>;
using CountMatrix = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct OutageCounts {
  std::uint64_t trials = 0;
  CountVector own_signal;
  CountMatrix decode_step;
  CountVector oma;
  CountVector noma_oma_mismatch;  // trials where own_signal(n) != oma(n)
};

struct EvaluationOptions {
  unsigned workers = 1;
  /// Recompute every decision from capacities and throw std::logic_error on
  /// disagreement.
  bool cross_check = false;
};

OutageCounts count_outages(const GainMatrix& gains, const Allocation& alloc,
                           const SystemConfig& cfg, const EvaluationOptions& options = {});

struct WilsonInterval {
  double center = 0.0;
  double half_width = 0.0;
  double lower() const { return center - half_width; }
  double upper() const { return center + half_width; }
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct OutageReport {
  Vector<double> per_user_noma;
  Vector<double> per_user_oma;
  Vector<double> ci_halfwidth;      // Wilson 95%, NOMA
  Vector<double> oma_ci_halfwidth;  // Wilson 95%, OMA
  Eigen::MatrixXd decode_step;      // frequencies of decode_step outages
  CountVector noma_oma_mismatch;
  std::uint64_t trials = 0;
  SystemConfig config;
  Allocation allocation;
  RngSpec rng;
};

OutageReport make_report(const OutageCounts& counts, const SystemConfig& cfg,
                         const Allocation& alloc, const RngSpec& rng);

struct EstimateOptions {
  unsigned workers = 1;
  GainPath path = GainPath::Direct;
  bool cross_check = false;
};

OutageReport estimate_outage(const SystemConfig& cfg, const Allocation& alloc,
                             std::uint64_t trials, const RngSpec& rng,
                             const EstimateOptions& options = {});

}  // namespace noma
