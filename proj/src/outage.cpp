#include "noma/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "noma/parallel.hpp"

namespace noma {
namespace {

void check_users(const ChannelRealization& realization, const Allocation& alloc,
                 const SystemConfig& cfg) {
  if (realization.gains.size() != cfg.K || alloc.users() != cfg.K)
    throw ParameterError("realization, allocation and config disagree on K");
}

double sinr_capacity(double coefficient, double tail, double snr_gain) {
  return std::log2(1.0 + coefficient * snr_gain / (1.0 + snr_gain * tail));
}

bool near(double gain, double threshold, double band) {
  return std::isfinite(threshold) && std::abs(gain - threshold) <= band * threshold;
}

}  // namespace

double noma_capacity(const ChannelRealization& realization, const Allocation& alloc,
                     const SystemConfig& cfg, Eigen::Index user) {
  check_users(realization, alloc, cfg);
  if (user < 0 || user >= cfg.K) throw ParameterError("user index out of range");
  return sinr_capacity(alloc.coefficient(user), alloc.tail(user), cfg.xi * realization.gains(user));
}

double sic_capacity(const ChannelRealization& realization, const Allocation& alloc,
                    const SystemConfig& cfg, Eigen::Index decoder, Eigen::Index target) {
  check_users(realization, alloc, cfg);
  if (decoder < 0 || decoder >= cfg.K || target < 0 || target >= decoder)
    throw ParameterError("SIC requires 0 <= target < decoder < K");
  return sinr_capacity(alloc.coefficient(target), alloc.tail(target),
                       cfg.xi * realization.gains(decoder));
}

double oma_capacity(double gain, const SystemConfig& cfg) {
  if (!(gain >= 0.0)) throw ParameterError("gain must be non-negative");
  return std::log2(1.0 + cfg.xi * gain) / cfg.K;
}

DecisionThresholds DecisionThresholds::make(const Allocation& alloc, const SystemConfig& cfg) {
  cfg.validate();
  if (alloc.users() != cfg.K) throw ParameterError("allocation size differs from K");
  DecisionThresholds out;
  out.decode = decode_thresholds(alloc, cfg.R0, cfg.xi);
  out.own.resize(cfg.K);
  double running = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < cfg.K; ++n) {
    running = std::max(running, out.decode(n));
    out.own(n) = running;
  }
  out.oma = oma_threshold(cfg.K, cfg.R0, cfg.xi);
  return out;
}

OutageMatrix evaluate_trial(const Eigen::Ref<const Vector<double>>& gains,
                            const DecisionThresholds& thresholds) {
  const Eigen::Index k = thresholds.decode.size();
  OutageMatrix out;
  out.own_signal.resize(k);
  out.oma.resize(k);
  out.decode_step = BoolMatrix::Constant(k, k, false);
  for (Eigen::Index n = 0; n < k; ++n) {
    const double g = gains(n);
    for (Eigen::Index m = 0; m <= n; ++m) out.decode_step(n, m) = g <= thresholds.decode(m);
    out.own_signal(n) = g <= thresholds.own(n);
    out.oma(n) = g <= thresholds.oma;
  }
  return out;
}

OutageMatrix evaluate_trial(const ChannelRealization& realization, const Allocation& alloc,
                            const SystemConfig& cfg) {
  check_users(realization, alloc, cfg);
  return evaluate_trial(realization.gains, DecisionThresholds::make(alloc, cfg));
}

std::size_t capacity_disagreements(const ChannelRealization& realization, const Allocation& alloc,
                                   const SystemConfig& cfg, const OutageMatrix& outcome,
                                   double band) {
  const DecisionThresholds thresholds = DecisionThresholds::make(alloc, cfg);
  std::size_t bad = 0;
  for (Eigen::Index n = 0; n < cfg.K; ++n) {
    const double g = realization.gains(n);
    bool chain_outage = false;
    bool chain_ambiguous = false;
    for (Eigen::Index m = 0; m <= n; ++m) {
      const double rate = m == n ? noma_capacity(realization, alloc, cfg, n)
                                 : sic_capacity(realization, alloc, cfg, n, m);
      const bool outage = !(rate > cfg.R0);
      chain_outage = chain_outage || outage;
      if (near(g, thresholds.decode(m), band)) {
        chain_ambiguous = true;
        continue;
      }
      if (outage != outcome.decode_step(n, m)) ++bad;
    }
    if (!chain_ambiguous && chain_outage != outcome.own_signal(n)) ++bad;
    if (!near(g, thresholds.oma, band) && !(oma_capacity(g, cfg) > cfg.R0) != outcome.oma(n)) ++bad;
  }
  return bad;
}

OutageCounts count_outages(const GainMatrix& gains, const Allocation& alloc,
                           const SystemConfig& cfg, const EvaluationOptions& options) {
  const DecisionThresholds thresholds = DecisionThresholds::make(alloc, cfg);
  if (gains.cols() != cfg.K) throw ParameterError("gain matrix width differs from K");
  const auto trials = static_cast<std::uint64_t>(gains.rows());
  const int k = cfg.K;

  auto empty = [k](std::uint64_t n) {
    OutageCounts c;
    c.trials = n;
    c.own_signal = CountVector::Zero(k);
    c.oma = CountVector::Zero(k);
    c.noma_oma_mismatch = CountVector::Zero(k);
    c.decode_step = CountMatrix::Zero(k, k);
    return c;
  };

  std::vector<OutageCounts> partial(detail::block_count(trials, options.workers), empty(0));
  std::vector<std::size_t> disagreements(partial.size(), 0);
  detail::parallel_blocks(trials, options.workers,
                          [&](std::uint64_t begin, std::uint64_t end, std::size_t block) {
    OutageCounts& c = partial[block];
    for (std::uint64_t t = begin; t < end; ++t) {
      const Vector<double> row = gains.row(static_cast<Eigen::Index>(t)).transpose();
      const OutageMatrix o = evaluate_trial(row, thresholds);
      c.own_signal += o.own_signal.cast<std::uint64_t>().matrix();
      c.oma += o.oma.cast<std::uint64_t>().matrix();
      c.noma_oma_mismatch += (o.own_signal != o.oma).cast<std::uint64_t>().matrix();
      c.decode_step += o.decode_step.cast<std::uint64_t>().matrix();
      if (options.cross_check) {
        ChannelRealization r{row, t};
        disagreements[block] += capacity_disagreements(r, alloc, cfg, o);
      }
    }
    c.trials = end - begin;
  });

  OutageCounts total = empty(0);
  std::size_t bad = 0;
  for (std::size_t b = 0; b < partial.size(); ++b) {
    total.trials += partial[b].trials;
    total.own_signal += partial[b].own_signal;
    total.oma += partial[b].oma;
    total.noma_oma_mismatch += partial[b].noma_oma_mismatch;
    total.decode_step += partial[b].decode_step;
    bad += disagreements[b];
  }
  if (bad != 0)
    throw std::logic_error("threshold and capacity decisions disagree on " + std::to_string(bad) +
                           " comparisons");
  return total;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw ParameterError("Wilson interval needs at least one trial");
  if (successes > trials) throw ParameterError("successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  WilsonInterval w;
  w.center = (p + z2 / (2.0 * n)) / denom;
  w.half_width = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return w;
}

OutageReport make_report(const OutageCounts& counts, const SystemConfig& cfg,
                         const Allocation& alloc, const RngSpec& rng) {
  if (counts.trials == 0) throw ParameterError("report needs at least one trial");
  const double n = static_cast<double>(counts.trials);
  const int k = cfg.K;
  OutageReport report{
      .per_user_noma = counts.own_signal.cast<double>() / n,
      .per_user_oma = counts.oma.cast<double>() / n,
      .ci_halfwidth = Vector<double>(k),
      .oma_ci_halfwidth = Vector<double>(k),
      .decode_step = counts.decode_step.cast<double>() / n,
      .noma_oma_mismatch = counts.noma_oma_mismatch,
      .trials = counts.trials,
      .config = cfg,
      .allocation = alloc,
      .rng = rng,
  };
  for (int i = 0; i < k; ++i) {
    report.ci_halfwidth(i) = wilson_interval(counts.own_signal(i), counts.trials).half_width;
    report.oma_ci_halfwidth(i) = wilson_interval(counts.oma(i), counts.trials).half_width;
  }
  return report;
}

OutageReport estimate_outage(const SystemConfig& cfg, const Allocation& alloc,
                             std::uint64_t trials, const RngSpec& rng,
                             const EstimateOptions& options) {
  cfg.validate();
  if (trials == 0) throw ParameterError("trials must be >= 1");
  if (alloc.users() != cfg.K) throw ParameterError("allocation size differs from K");
  const GainMatrix gains = sample_gain_matrix(cfg, rng, trials, options.workers, options.path);
  const OutageCounts counts =
      count_outages(gains, alloc, cfg, {.workers = options.workers, .cross_check = options.cross_check});
  return make_report(counts, cfg, alloc, rng);
}

}  // namespace noma
