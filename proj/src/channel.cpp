#include "noma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Dense>

#include "noma/parallel.hpp"

namespace noma {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXcd complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance,
                                  std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  Eigen::MatrixXcd out(rows, cols);
  // column-major fill order is part of the reproducibility contract
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(engine);
      const double im = normal(engine);
      out(r, c) = {re, im};
    }
  return out;
}

}  // namespace

std::uint64_t RngSpec::substream_seed(std::uint64_t trial) const {
  return splitmix64(seed ^ splitmix64(trial));
}

std::mt19937_64 RngSpec::engine(std::uint64_t trial) const {
  return std::mt19937_64(substream_seed(trial));
}

ChannelRealization ChannelRealization::from_draws(const Vector<double>& draws,
                                                  std::uint64_t trial) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(draws.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return draws(l) < draws(r); });
  ChannelRealization out;
  out.gains.resize(draws.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    out.gains(static_cast<Eigen::Index>(i)) = draws(order[i]);
  out.trial_index = trial;
  return out;
}

GainSampler::GainSampler(const SystemConfig& cfg) : dist_(cfg.N, cfg.beta) { cfg.validate(); }

double explicit_matrix_gain(const SystemConfig& cfg, std::mt19937_64& engine) {
  const Eigen::MatrixXcd h = complex_gaussian(cfg.N, cfg.M, cfg.beta, engine);
  Eigen::VectorXcd v = complex_gaussian(cfg.M, 1, 1.0, engine);
  v.normalize();
  const Eigen::VectorXcd hv = h * v;
  const double norm = hv.norm();
  if (norm == 0.0) return 0.0;
  const Eigen::VectorXcd u = hv / norm;
  const std::complex<double> g = u.dot(hv);  // u^H H v
  return std::norm(g);
}

Vector<double> draw_gains(const SystemConfig& cfg, const RngSpec& rng, std::uint64_t trial,
                          GainPath path) {
  cfg.validate();
  std::mt19937_64 engine = rng.engine(trial);
  Vector<double> draws(cfg.K);
  if (path == GainPath::Direct) {
    GainSampler sampler(cfg);
    for (int i = 0; i < cfg.K; ++i) draws(i) = sampler(engine);
  } else {
    for (int i = 0; i < cfg.K; ++i) draws(i) = explicit_matrix_gain(cfg, engine);
  }
  return draws;
}

ChannelRealization sample_realization(const SystemConfig& cfg, const RngSpec& rng,
                                      std::uint64_t trial, GainPath path) {
  return ChannelRealization::from_draws(draw_gains(cfg, rng, trial, path), trial);
}

GainMatrix sample_gain_matrix(const SystemConfig& cfg, const RngSpec& rng, std::uint64_t trials,
                              unsigned workers, GainPath path) {
  cfg.validate();
  GainMatrix gains(static_cast<Eigen::Index>(trials), cfg.K);
  detail::parallel_blocks(trials, workers, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
    for (std::uint64_t t = begin; t < end; ++t)
      gains.row(static_cast<Eigen::Index>(t)) =
          ChannelRealization::from_draws(draw_gains(cfg, rng, t, path), t).gains.transpose();
  });
  return gains;
}

}  // namespace noma
