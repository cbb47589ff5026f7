#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

#include "noma/allocation.hpp"
#include "noma/config.hpp"

namespace noma {

/// Counter-based seeding: every trial owns an engine derived from
/// (seed, trial), so results never depend on evaluation order.
struct RngSpec {
  std::uint64_t seed = 0;

  std::uint64_t substream_seed(std::uint64_t trial) const;
  std::mt19937_64 engine(std::uint64_t trial) const;
};

/// Ordered effective gains |G_1|^2 <= ... <= |G_K|^2 of one trial.
struct ChannelRealization {
  Vector<double> gains;
  std::uint64_t trial_index = 0;

  /// Sorts raw per-user draws ascending (stable on draw index).
  static ChannelRealization from_draws(const Vector<double>& draws, std::uint64_t trial);
};

enum class GainPath {
  Direct,          // Gamma(N, beta) draw per user
  ExplicitMatrix,  // builds H_n, v and the MRC combiner
};

/// Fast path: one effective gain ~ Gamma(shape N, scale beta).
class GainSampler {
 public:
  explicit GainSampler(const SystemConfig& cfg);

  double operator()(std::mt19937_64& engine) { return dist_(engine); }

 private:
  std::gamma_distribution<double> dist_;
};

/// |u^H H v|^2 for one user with H ~ CN(0, beta) entries (N x M), v isotropic
/// on the unit sphere of C^M and u the MRC combiner H v / |H v|.
double explicit_matrix_gain(const SystemConfig& cfg, std::mt19937_64& engine);

/// K unsorted gains of one trial, in draw order.
Vector<double> draw_gains(const SystemConfig& cfg, const RngSpec& rng, std::uint64_t trial,
                          GainPath path = GainPath::Direct);

ChannelRealization sample_realization(const SystemConfig& cfg, const RngSpec& rng,
                                      std::uint64_t trial, GainPath path = GainPath::Direct);

/// trials x K, each row an ordered realization. Row t only depends on
/// (rng, t), whatever the worker count.
using GainMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

GainMatrix sample_gain_matrix(const SystemConfig& cfg, const RngSpec& rng, std::uint64_t trials,
                              unsigned workers = 1, GainPath path = GainPath::Direct);

}  // namespace noma
