// noma: power-allocation limits, fixed QoS allocation and outage sweeps for
// downlink NOMA. Exit codes: 0 success, 1 parameter error, 2 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "noma/allocation.hpp"
#include "noma/config_file.hpp"
#include "noma/oracle.hpp"
#include "noma/outage.hpp"
#include "noma/sweep.hpp"

namespace {

constexpr int kExitParameter = 1;
constexpr int kExitIo = 2;

/// Six decimals with trailing zeros dropped: 0.533333, 0.0625, 5.
std::string decimal(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
  }
  return s == "-0" ? "0" : s;
}

std::string join(const noma::Vector<double>& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += decimal(v(i));
  }
  return out;
}

noma::Allocation parse_allocation(const std::string& text, int K) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw noma::ParameterError("bad coefficient '" + item + "' in --alloc");
    }
  }
  if (static_cast<int>(values.size()) != K)
    throw noma::ParameterError("--alloc needs exactly K coefficients");
  noma::Vector<double> a = Eigen::Map<noma::Vector<double>>(values.data(), K);
  if (std::abs(a.sum() - 1.0) <= noma::kUnitSumTolerance) return noma::Allocation::normalized(a);
  return noma::Allocation::partial(a);
}

struct Overrides {
  std::vector<std::function<void(noma::RunSettings&)>> setters;

  template <typename T>
  void add(CLI::App& app, const std::string& flag, T& storage, std::function<void(noma::RunSettings&, T)> apply,
           const std::string& help) {
    CLI::Option* opt = app.add_option(flag, storage, help);
    setters.push_back([opt, &storage, apply](noma::RunSettings& s) {
      if (opt->count() > 0) apply(s, storage);
    });
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Downlink NOMA power allocation and outage tools"};
  app.require_subcommand(1);

  std::string config_path;
  std::string alloc_text;
  std::string out_path;
  int rank = 0;
  bool cross_check = false;

  int K = 0, M = 0, N = 0, target = 0;
  double R0 = 0, xi = 0, beta = 0, grid_start = 0, grid_stop = 0, grid_step = 0;
  std::uint64_t trials = 0, seed = 0;
  unsigned workers = 0;

  auto* alloc_cmd = app.add_subcommand("alloc", "print the fixed QoS power allocation");
  auto* limits_cmd = app.add_subcommand("limits", "print the interference limits 2^(-n R0)");
  auto* thresholds_cmd = app.add_subcommand("thresholds", "print per-user decode gain thresholds");
  auto* analytic_cmd = app.add_subcommand("analytic", "closed-form per-rank outage at the OMA threshold");
  auto* estimate_cmd = app.add_subcommand("estimate", "Monte Carlo outage estimate for one allocation");
  auto* a1_cmd = app.add_subcommand("a1-sweep", "outage versus a_1 (CSV)");
  auto* interference_cmd = app.add_subcommand("interference-sweep", "outage versus interference power A_n (CSV)");
  auto* plot_cmd = app.add_subcommand("plot", "write a gnuplot script next to a sweep CSV");

  Overrides overrides;
  for (CLI::App* cmd : {alloc_cmd, limits_cmd, thresholds_cmd, analytic_cmd, estimate_cmd, a1_cmd,
                        interference_cmd}) {
    cmd->add_option("--config", config_path, "flat key = value config file");
    overrides.add<int>(*cmd, "--users,-K", K, [](noma::RunSettings& s, int v) { s.system.K = v; }, "user count K");
    overrides.add<int>(*cmd, "--tx-antennas,-M", M, [](noma::RunSettings& s, int v) { s.system.M = v; }, "transmit antennas M");
    overrides.add<int>(*cmd, "--rx-antennas,-N", N, [](noma::RunSettings& s, int v) { s.system.N = v; }, "receive antennas N");
    overrides.add<double>(*cmd, "--rate", R0, [](noma::RunSettings& s, double v) { s.system.R0 = v; }, "QoS rate R0 (bits/s/Hz)");
    overrides.add<double>(*cmd, "--snr", xi, [](noma::RunSettings& s, double v) { s.system.xi = v; }, "transmit SNR xi (linear)");
    overrides.add<double>(*cmd, "--beta", beta, [](noma::RunSettings& s, double v) { s.system.beta = v; }, "channel variance beta");
  }
  for (CLI::App* cmd : {estimate_cmd, a1_cmd, interference_cmd}) {
    overrides.add<std::uint64_t>(*cmd, "--trials", trials, [](noma::RunSettings& s, std::uint64_t v) { s.sweep.trials = v; }, "Monte Carlo trials");
    overrides.add<std::uint64_t>(*cmd, "--seed", seed, [](noma::RunSettings& s, std::uint64_t v) { s.sweep.seed = v; }, "RNG seed");
    overrides.add<unsigned>(*cmd, "--workers", workers, [](noma::RunSettings& s, unsigned v) { s.sweep.workers = v; }, "worker threads");
  }
  for (CLI::App* cmd : {a1_cmd, interference_cmd}) {
    overrides.add<double>(*cmd, "--grid-start", grid_start, [](noma::RunSettings& s, double v) { s.sweep.grid.start = v; }, "first grid value");
    overrides.add<double>(*cmd, "--grid-stop", grid_stop, [](noma::RunSettings& s, double v) { s.sweep.grid.stop = v; }, "last grid value");
    overrides.add<double>(*cmd, "--grid-step", grid_step, [](noma::RunSettings& s, double v) { s.sweep.grid.step = v; }, "grid step");
    cmd->add_option("--out", out_path, "CSV path; a .plot script is written alongside");
  }
  overrides.add<int>(*interference_cmd, "--target-user", target, [](noma::RunSettings& s, int v) { s.sweep.target_user = v; }, "user n (1..K-1)");
  for (CLI::App* cmd : {thresholds_cmd, estimate_cmd})
    cmd->add_option("--alloc", alloc_text, "comma-separated coefficients a_1..a_K (default: fixed QoS allocation)");
  analytic_cmd->add_option("--rank", rank, "print only this rank (1..K)");
  estimate_cmd->add_flag("--cross-check", cross_check, "verify threshold decisions against capacities");
  std::string plot_csv;
  plot_cmd->add_option("csv", plot_csv, "sweep CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParameter;
  }

  try {
    if (plot_cmd->parsed()) {
      const noma::CsvTable table = noma::read_csv_file(plot_csv);
      const auto script = noma::emit_plot_script(plot_csv, noma::detect_sweep_kind(table.header));
      std::cout << script.string() << '\n';
      return 0;
    }

    noma::RunSettings settings;
    if (!config_path.empty()) noma::apply_key_values(settings, noma::read_key_values_file(config_path));
    for (const auto& set : overrides.setters) set(settings);
    const noma::SystemConfig& cfg = settings.system;
    cfg.validate();

    auto allocation = [&] {
      return alloc_text.empty() ? noma::qos_fixed_allocation(cfg.K, cfg.R0)
                                : parse_allocation(alloc_text, cfg.K);
    };

    if (alloc_cmd->parsed()) {
      std::cout << join(noma::qos_fixed_allocation(cfg.K, cfg.R0).coefficients()) << '\n';
    } else if (limits_cmd->parsed()) {
      std::cout << join(noma::interference_limits(cfg.K, cfg.R0)) << '\n';
    } else if (thresholds_cmd->parsed()) {
      const noma::Allocation alloc = allocation();
      std::cout << join(noma::decode_thresholds(alloc, cfg.R0, cfg.xi)) << '\n';
      const auto verdict = noma::feasibility_check(alloc, cfg.R0);
      if (!verdict.feasible()) {
        std::cerr << "certain outage for users:";
        for (auto u : verdict.violating_users) std::cerr << ' ' << u + 1;
        std::cerr << '\n';
      }
    } else if (analytic_cmd->parsed()) {
      const noma::Vector<double> p = noma::analytic_oma_outage(cfg);
      if (rank != 0) {
        if (rank < 1 || rank > cfg.K) throw noma::ParameterError("--rank must lie in 1..K");
        std::cout << decimal(p(rank - 1)) << '\n';
      } else {
        std::cout << join(p) << '\n';
      }
    } else if (estimate_cmd->parsed()) {
      const noma::Allocation alloc = allocation();
      const auto report = noma::estimate_outage(
          cfg, alloc, settings.sweep.trials, noma::RngSpec{settings.sweep.seed},
          {.workers = settings.sweep.workers, .cross_check = cross_check});
      std::cout << "user,noma_outage,oma_outage,ci\n";
      for (int n = 0; n < cfg.K; ++n)
        std::cout << n + 1 << ',' << noma::format_probability(report.per_user_noma(n)) << ','
                  << noma::format_probability(report.per_user_oma(n)) << ','
                  << noma::format_probability(report.ci_halfwidth(n)) << '\n';
    } else {
      const bool a1 = a1_cmd->parsed();
      settings.sweep.kind = a1 ? noma::SweepKind::A1 : noma::SweepKind::Interference;
      const noma::CsvTable table = a1 ? noma::run_a1_sweep(cfg, settings.sweep)
                                      : noma::run_interference_sweep(cfg, settings.sweep);
      if (out_path.empty()) {
        noma::write_csv(std::cout, table);
      } else {
        noma::write_csv_file(out_path, table);
        noma::emit_plot_script(out_path, settings.sweep.kind);
      }
    }
  } catch (const noma::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const noma::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParameter;
  }
  return 0;
}
