#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "noma/allocation.hpp"
#include "noma/config.hpp"

// Outage sweeps, their CSV tables and gnuplot scripts.

namespace noma {

enum class SweepKind { A1, Interference };

/// start, start + step, ... up to stop, all inside [0, 1].
struct Grid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;

  void validate() const;
  std::vector<double> points() const;
};

struct SweepSpec {
  SweepKind kind = SweepKind::A1;
  int target_user = 1;  // one-based, interference sweep only
  Grid grid;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate(const SystemConfig& cfg) const;
};

/// Budget left to users n..K while users 1..n-1 stay just inside their
/// limits: (1 - eps) 2^(-(n-1) R0), or all of it for n = 1.
inline constexpr double kReserveSlack = 1e-3;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const CsvTable&) const = default;
};

const std::vector<std::string>& a1_sweep_header();
const std::vector<std::string>& interference_sweep_header();

void write_csv(std::ostream& out, const CsvTable& table);
std::string to_csv_string(const CsvTable& table);
CsvTable parse_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

/// Shortest text that parses back to the same double.
std::string format_coefficient(double value);
/// Six significant digits.
std::string format_probability(double value);

/// a_1 = a1 with the remaining 1 - a1 split over users 2..K in the fixed QoS
/// allocation's geometric ratios 2^R0 : 1, so a1 = a_1^QoS reproduces it.
Allocation a1_sweep_allocation(int K, double a1, double R0);

double interference_budget(int target_user, double R0, double slack = kReserveSlack);

/// User n (one-based) receives budget - tail, user K receives `tail`, the
/// rest receive nothing. Users below n hold the reserved power outside the
/// vector, so the result is a partial allocation for n >= 2.
Allocation interference_allocation(int K, int target_user, double tail, double R0,
                                   double slack = kReserveSlack);

CsvTable run_a1_sweep(const SystemConfig& cfg, const SweepSpec& spec);
CsvTable run_interference_sweep(const SystemConfig& cfg, const SweepSpec& spec);

/// Kind of sweep a CSV header belongs to; throws IoError for any other header.
SweepKind detect_sweep_kind(const std::vector<std::string>& header);

/// Writes <csv stem>.plot next to the CSV and returns its path.
std::filesystem::path emit_plot_script(const std::filesystem::path& csv_path, SweepKind kind);

}  // namespace noma
