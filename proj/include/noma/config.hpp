#pragma once

#include <stdexcept>
#include <string>

namespace noma {

/// Raised for out-of-range or malformed parameters (CLI exit code 1).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for missing, unreadable or malformed files (CLI exit code 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full parameterization of one downlink experiment.
struct SystemConfig {
  int K = 4;          // users
  int M = 1;          // transmit antennas
  int N = 4;          // receive antennas per user
  double R0 = 1.0;    // QoS rate, bits/s/Hz
  double xi = 3.0;    // transmit SNR, linear
  double beta = 1.0;  // per-entry channel variance

  void validate() const {
    if (K < 1) throw ParameterError("user count K must be >= 1");
    if (M < 1) throw ParameterError("transmit antenna count M must be >= 1");
    if (N < 1) throw ParameterError("receive antenna count N must be >= 1");
    if (!(R0 > 0.0)) throw ParameterError("rate R0 must be > 0");
    if (!(xi > 0.0)) throw ParameterError("SNR xi must be > 0");
    if (!(beta > 0.0)) throw ParameterError("channel variance beta must be > 0");
  }
};

}  // namespace noma
