#include "noma/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace noma {
namespace {

// e^{-x} x^k / k!
double poisson_term(double x, int k) {
  return std::exp(k * std::log(x) - x - std::lgamma(k + 1.0));
}

}  // namespace

double gamma_cdf(double t, int N, double beta) {
  if (!(t >= 0.0)) throw ParameterError("gamma_cdf needs t >= 0");
  if (N < 1) throw ParameterError("gamma_cdf needs integer shape N >= 1");
  if (!(beta > 0.0)) throw ParameterError("gamma_cdf needs beta > 0");
  if (t == 0.0) return 0.0;
  if (std::isinf(t)) return 1.0;
  const double x = t / beta;
  double cdf;
  if (x < N) {
    // lower tail sum_{k >= N}; terms shrink geometrically once k > x
    double term = poisson_term(x, N);
    double sum = 0.0;
    for (int k = N; term > sum * 1e-17; ++k) {
      sum += term;
      term *= x / (k + 1);
    }
    cdf = sum;
  } else {
    double upper = 0.0;
    for (int k = 0; k < N; ++k) upper += poisson_term(x, k);
    cdf = 1.0 - upper;
  }
  return std::clamp(cdf, 0.0, 1.0);
}

double binomial_coefficient(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

double ordered_outage_probability(const OrderedGainModel& model, int rank, double threshold) {
  if (model.K < 1 || model.K > kMaxOracleUsers)
    throw ParameterError("oracle supports 1 <= K <= 64");
  if (rank < 0 || rank >= model.K) throw ParameterError("rank out of range");
  const double f = gamma_cdf(threshold, model.N, model.beta);
  // at least rank+1 of the K gains fall below the threshold
  double p = 0.0;
  for (int j = rank + 1; j <= model.K; ++j)
    p += binomial_coefficient(model.K, j) * std::pow(f, j) * std::pow(1.0 - f, model.K - j);
  return std::clamp(p, 0.0, 1.0);
}

Vector<double> analytic_oma_outage(const SystemConfig& cfg) {
  cfg.validate();
  const auto model = OrderedGainModel::from(cfg);
  const double t = oma_threshold(cfg.K, cfg.R0, cfg.xi);
  Vector<double> out(cfg.K);
  for (int n = 0; n < cfg.K; ++n) out(n) = ordered_outage_probability(model, n, t);
  return out;
}

}  // namespace noma
