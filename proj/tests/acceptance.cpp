// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "noma/allocation.hpp"
#include "noma/channel.hpp"
#include "noma/oracle.hpp"
#include "noma/outage.hpp"
#include "noma/sweep.hpp"

namespace {

constexpr std::uint64_t kSeed = 20180101;
constexpr std::uint64_t kTrials = 100000;
const noma::SystemConfig kReference{.K = 4, .M = 1, .N = 4, .R0 = 1.0, .xi = 3.0, .beta = 1.0};

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome fixed_allocation_identities() {
  double worst_sum = 0.0, worst_ratio = 0.0, min_gap = INFINITY;
  for (int K = 1; K <= 16; ++K)
    for (double R0 : {0.25, 0.5, 1.0, 2.0}) {
      const auto alloc = noma::qos_fixed_allocation(K, R0);
      const auto& a = alloc.coefficients();
      worst_sum = std::max(worst_sum, std::abs(a.sum() - 1.0));
      for (int i = 1; i < K; ++i)
        worst_ratio = std::max(worst_ratio, std::abs(a(i - 1) - std::exp2(R0) * a(i)) / a(i - 1));
      for (int i = 0; i + 1 < K; ++i) min_gap = std::min(min_gap, std::exp2(-(i + 1) * R0) - alloc.tail(i));
    }
  std::ostringstream d;
  d << "max |sum-1| = " << worst_sum << ", max ratio rel err = " << worst_ratio
    << ", min (2^-nR0 - A_n) = " << min_gap;
  return {worst_sum <= 1e-12 && worst_ratio <= 1e-12 && min_gap > 0.0, d.str()};
}

Outcome noma_equals_oma_per_trial() {
  const auto start = Clock::now();
  const auto gains = noma::sample_gain_matrix(kReference, noma::RngSpec{kSeed}, kTrials, 1);
  const auto counts = noma::count_outages(gains, noma::qos_fixed_allocation(4, 1.0), kReference, {.workers = 1});
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "mismatches = " << counts.noma_oma_mismatch.sum() << " over " << counts.trials
    << " trials x 4 users, outage = [";
  for (int n = 0; n < 4; ++n) d << (n ? " " : "") << double(counts.own_signal(n)) / kTrials;
  d << "], " << elapsed << " s";
  return {counts.noma_oma_mismatch.sum() == 0 && counts.trials == kTrials && elapsed < 10.0, d.str()};
}

Outcome certain_outage_over_limit() {
  const auto gains = noma::sample_gain_matrix(kReference, noma::RngSpec{kSeed}, kTrials, 4);
  bool pass = true;
  std::ostringstream d;
  for (int n = 1; n <= 3; ++n) {
    const double tail = std::exp2(-n * kReference.R0) * (1 + 1e-3);
    const auto alloc = noma::interference_allocation(kReference.K, n, tail, kReference.R0);
    const auto c = noma::count_outages(gains, alloc, kReference, {.workers = 4});
    const double own = double(c.decode_step(n - 1, n - 1)) / kTrials;
    const double chain = double(c.own_signal(n - 1)) / kTrials;
    const double sic = double(c.decode_step(kReference.K - 1, n - 1)) / kTrials;
    pass = pass && own == 1.0 && chain == 1.0 && sic == 1.0;
    d << "n=" << n << ": own " << own << ", SIC by user K " << sic << "; ";
  }
  return {pass, d.str()};
}

Outcome oracle_agreement() {
  const auto start = Clock::now();
  const auto gains = noma::sample_gain_matrix(kReference, noma::RngSpec{kSeed}, kTrials, 1);
  const noma::OrderedGainModel model{4, 4, 1.0};
  bool pass = true;
  double worst = 0.0;
  for (int rank = 0; rank < 4; ++rank)
    for (double t : {1.0, 3.0, 5.0, 10.0}) {
      const double freq = (gains.col(rank).array() <= t).cast<double>().mean();
      const double p = noma::ordered_outage_probability(model, rank, t);
      const double bound = 4 * std::sqrt(p * (1 - p) / kTrials);
      if (!(std::abs(freq - p) <= bound)) pass = false;
      if (bound > 0) worst = std::max(worst, std::abs(freq - p) / bound);
    }
  const double spot = noma::ordered_outage_probability(model, 3, 5.0);
  pass = pass && std::abs(spot - 0.291802) <= 1e-6;
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "worst |MC - exact| / bound = " << worst << ", rank 4 at t=5: " << spot << ", " << elapsed << " s";
  return {pass && elapsed < 30.0, d.str()};
}

Outcome single_user() {
  const noma::SystemConfig cfg{.K = 1, .M = 1, .N = 1, .R0 = 1.0, .xi = 1.0};
  const auto report = noma::estimate_outage(cfg, noma::qos_fixed_allocation(1, 1.0), kTrials, noma::RngSpec{kSeed});
  const double p = report.per_user_noma(0);
  std::ostringstream d;
  d << "outage = " << p << " (1 - 1/e = " << 1 - std::exp(-1.0) << ")";
  return {std::abs(p - 0.6321) <= 0.005, d.str()};
}

Outcome a1_sweep_structure() {
  noma::SweepSpec spec{.kind = noma::SweepKind::A1, .grid = {0.0, 1.0, 0.02}, .trials = kTrials, .seed = kSeed,
                       .workers = 4};
  const noma::CsvTable table = noma::run_a1_sweep(kReference, spec);
  std::map<double, std::map<int, std::pair<double, double>>> rows;
  for (const auto& r : table.rows) rows[std::stod(r[0])][std::stoi(r[1])] = {std::stod(r[2]), std::stod(r[3])};

  const double qos_a1 = noma::qos_fixed_allocation(4, 1.0).coefficient(0);
  bool crossing = rows.count(qos_a1) == 1 && rows[qos_a1][1].first == rows[qos_a1][1].second;
  bool others = rows.count(qos_a1) == 1;
  for (int n = 2; n <= 4 && others; ++n) others = rows[qos_a1][n].first == rows[qos_a1][n].second;

  // the same point re-evaluated trial by trial
  const auto gains = noma::sample_gain_matrix(kReference, noma::RngSpec{kSeed}, kTrials, 4);
  const auto per_trial = noma::count_outages(gains, noma::qos_fixed_allocation(4, 1.0), kReference, {.workers = 4});

  bool monotone = true;
  double previous = 1.0;
  for (const auto& [a1, users] : rows) {
    monotone = monotone && users.at(1).first <= previous;
    previous = users.at(1).first;
  }
  std::ostringstream d;
  d << "user 1 at a1=8/15: NOMA " << rows[qos_a1][1].first << " / OMA " << rows[qos_a1][1].second
    << "; users 2-4 equal: " << (others ? "yes" : "no") << "; per-trial mismatches " << per_trial.noma_oma_mismatch.sum()
    << "; user-1 outage non-increasing over " << rows.size() << " a1 values: " << (monotone ? "yes" : "no");
  return {crossing && others && monotone && per_trial.noma_oma_mismatch.sum() == 0, d.str()};
}

Outcome deterministic_csv() {
  std::vector<std::string> a1, interference;
  for (unsigned workers : {1u, 2u, 8u}) {
    noma::SweepSpec a{.kind = noma::SweepKind::A1, .grid = {0.0, 1.0, 0.05}, .trials = kTrials, .seed = kSeed,
                      .workers = workers};
    a1.push_back(noma::to_csv_string(noma::run_a1_sweep(kReference, a)));
    noma::SweepSpec i{.kind = noma::SweepKind::Interference, .target_user = 2, .grid = {0.0, 1.0, 0.02},
                      .trials = kTrials, .seed = kSeed, .workers = workers};
    interference.push_back(noma::to_csv_string(noma::run_interference_sweep(kReference, i)));
  }
  const bool same = a1[0] == a1[1] && a1[0] == a1[2] && interference[0] == interference[1] &&
                    interference[0] == interference[2];
  std::ostringstream d;
  d << "a1 sweep " << a1[0].size() << " bytes, interference sweep " << interference[0].size()
    << " bytes, identical at 1/2/8 workers: " << (same ? "yes" : "no");
  return {same, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 fixed allocation identities (K<=16, 4 rates)", fixed_allocation_identities},
      {"2 NOMA = OMA per trial under the fixed allocation", noma_equals_oma_per_trial},
      {"3 certain outage when A_n exceeds 2^-nR0", certain_outage_over_limit},
      {"4 Monte Carlo vs order-statistics oracle", oracle_agreement},
      {"5 single-user outage 1 - 1/e", single_user},
      {"6 a1 sweep crossing and monotonicity", a1_sweep_structure},
      {"7 byte-identical CSV across worker counts", deterministic_csv},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
