#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "noma/config.hpp"

// Closed-form power-allocation math for downlink NOMA with a common QoS rate.
//
// Users are indexed 0..K-1 in ascending order of channel gain. The one-based
// user number n is index + 1, which matters wherever the rate enters as
// 2^(-n R0).

namespace noma {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kUnitSumTolerance = 1e-12;

/// A_n = sum_{l > n} a_l, so the last entry is exactly zero.
template <typename Derived>
Vector<typename Derived::Scalar> interference_tails(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = a.size();
  Vector<Scalar> tails(k);
  Scalar acc(0);
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    tails(i) = acc;
    acc += a(i);
  }
  return tails;
}

template <typename Scalar>
class PowerAllocation {
 public:
  /// Coefficients summing to one within kUnitSumTolerance.
  static PowerAllocation normalized(Vector<Scalar> a) {
    check_non_negative(a);
    if (std::abs(static_cast<double>(a.sum()) - 1.0) > sum_tolerance())
      throw ParameterError("power coefficients must sum to 1");
    return PowerAllocation(std::move(a), false);
  }

  /// Coefficients whose sum may fall short of one (power held in reserve).
  static PowerAllocation partial(Vector<Scalar> a) {
    check_non_negative(a);
    if (static_cast<double>(a.sum()) > 1.0 + sum_tolerance())
      throw ParameterError("power coefficients must not sum above 1");
    return PowerAllocation(std::move(a), true);
  }

  Eigen::Index users() const { return coefficients_.size(); }
  const Vector<Scalar>& coefficients() const { return coefficients_; }
  const Vector<Scalar>& tails() const { return tails_; }
  Scalar coefficient(Eigen::Index user) const { return coefficients_(user); }
  Scalar tail(Eigen::Index user) const { return tails_(user); }
  bool is_partial() const { return partial_; }

  template <typename NewScalar>
  PowerAllocation<NewScalar> cast() const {
    Vector<NewScalar> a = coefficients_.template cast<NewScalar>();
    return partial_ ? PowerAllocation<NewScalar>::partial(std::move(a))
                    : PowerAllocation<NewScalar>::normalized(std::move(a));
  }

 private:
  PowerAllocation(Vector<Scalar> a, bool partial)
      : coefficients_(std::move(a)), tails_(interference_tails(coefficients_)), partial_(partial) {}

  // 1e-12 for double and wider; a few ulps for float
  static double sum_tolerance() {
    return std::max(kUnitSumTolerance, 16.0 * static_cast<double>(std::numeric_limits<Scalar>::epsilon()));
  }

  static void check_non_negative(const Vector<Scalar>& a) {
    if (a.size() == 0) throw ParameterError("allocation needs at least one user");
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (!(a(i) >= Scalar(0))) throw ParameterError("power coefficients must be non-negative");
  }

  Vector<Scalar> coefficients_;
  Vector<Scalar> tails_;
  bool partial_;
};

using Allocation = PowerAllocation<double>;

/// The fixed allocation that makes every SIC step of a user the same event
/// as its own decode: a_n = 2^((K-n)R0) (2^R0 - 1) / (2^(K R0) - 1).
template <typename Scalar = double>
PowerAllocation<Scalar> qos_fixed_allocation(int K, Scalar R0) {
  if (K < 1) throw ParameterError("user count K must be >= 1");
  if (!(R0 > Scalar(0))) throw ParameterError("rate R0 must be > 0");
  using std::exp2;
  const Scalar step = exp2(R0) - Scalar(1);
  const Scalar total = exp2(Scalar(K) * R0) - Scalar(1);
  Vector<Scalar> a(K);
  for (int i = 0; i < K; ++i) a(i) = exp2(Scalar(K - 1 - i) * R0) * step / total;
  return PowerAllocation<Scalar>::normalized(std::move(a));
}

/// Interference limits 2^(-n R0), n = 1..K.
template <typename Scalar = double>
Vector<Scalar> interference_limits(int K, Scalar R0) {
  using std::exp2;
  Vector<Scalar> limits(K);
  for (int i = 0; i < K; ++i) limits(i) = exp2(-Scalar(i + 1) * R0);
  return limits;
}

/// a_m - (2^R0 - 1) A_m; the decode of user m's message is possible only
/// when this is positive.
template <typename Scalar>
Vector<Scalar> decode_margins(const PowerAllocation<Scalar>& alloc, Scalar R0) {
  using std::exp2;
  const Scalar step = exp2(R0) - Scalar(1);
  return alloc.coefficients() - step * alloc.tails();
}

enum class FeasibilityStatus { Feasible, CertainOutage };

template <typename Scalar>
struct FeasibilityVerdict {
  FeasibilityStatus status = FeasibilityStatus::Feasible;
  std::vector<Eigen::Index> violating_users;  // zero-based
  Vector<Scalar> limits;

  bool feasible() const { return status == FeasibilityStatus::Feasible; }
};

template <typename Scalar>
FeasibilityVerdict<Scalar> feasibility_check(const PowerAllocation<Scalar>& alloc, Scalar R0) {
  const auto k = static_cast<int>(alloc.users());
  FeasibilityVerdict<Scalar> verdict;
  verdict.limits = interference_limits<Scalar>(k, R0);
  const Vector<Scalar> margins = decode_margins(alloc, R0);
  for (int i = 0; i < k; ++i) {
    if (alloc.tail(i) > verdict.limits(i) || !(margins(i) > Scalar(0)))
      verdict.violating_users.push_back(i);
  }
  verdict.status = verdict.violating_users.empty() ? FeasibilityStatus::Feasible
                                                   : FeasibilityStatus::CertainOutage;
  return verdict;
}

/// Gain thresholds t_m = (2^R0 - 1) / (xi (a_m - (2^R0 - 1) A_m)).
/// Any receiver decodes user m's message iff its gain exceeds t_m. A
/// non-positive margin yields +inf: that message can never be decoded.
template <typename Scalar>
Vector<Scalar> decode_thresholds(const PowerAllocation<Scalar>& alloc, Scalar R0, Scalar xi) {
  using std::exp2;
  const Scalar step = exp2(R0) - Scalar(1);
  const Vector<Scalar> margins = decode_margins(alloc, R0);
  Vector<Scalar> t(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    t(i) = margins(i) > Scalar(0) ? step / (xi * margins(i))
                                  : std::numeric_limits<Scalar>::infinity();
  }
  return t;
}

/// Gain a user needs to reach R0 in a 1/K orthogonal slot: (2^(K R0) - 1) / xi.
template <typename Scalar = double>
Scalar oma_threshold(int K, Scalar R0, Scalar xi) {
  if (K < 1) throw ParameterError("user count K must be >= 1");
  if (!(R0 > Scalar(0)) || !(xi > Scalar(0))) throw ParameterError("R0 and xi must be > 0");
  using std::exp2;
  return (exp2(Scalar(K) * R0) - Scalar(1)) / xi;
}

}  // namespace noma
