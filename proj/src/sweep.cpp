#include "noma/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "noma/channel.hpp"
#include "noma/outage.hpp"

namespace noma {
namespace {

constexpr double kGridTolerance = 1e-12;

std::vector<std::string> config_echo(const SystemConfig& cfg, const SweepSpec& spec) {
  return {std::to_string(cfg.K),         std::to_string(cfg.M),
          std::to_string(cfg.N),         format_coefficient(cfg.R0),
          format_coefficient(cfg.xi),    format_coefficient(cfg.beta),
          std::to_string(spec.seed),     std::to_string(spec.trials)};
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double_field(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw IoError("malformed number in CSV: '" + text + "'");
  return value;
}

struct PreparedSweep {
  GainMatrix gains;
  EvaluationOptions options;
};

PreparedSweep prepare(const SystemConfig& cfg, const SweepSpec& spec) {
  cfg.validate();
  spec.validate(cfg);
  return {sample_gain_matrix(cfg, RngSpec{spec.seed}, spec.trials, spec.workers),
          EvaluationOptions{.workers = spec.workers}};
}

}  // namespace

void Grid::validate() const {
  if (!(start >= 0.0 && stop <= 1.0 && start <= stop))
    throw ParameterError("grid must satisfy 0 <= start <= stop <= 1");
  if (!(step > 0.0)) throw ParameterError("grid step must be > 0");
}

std::vector<double> Grid::points() const {
  validate();
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // snap to 12 decimals so 0.07 prints as 0.07, not 0.07000000000000001
    const double x = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
    out.push_back(std::clamp(x, start, stop));
  }
  return out;
}

void SweepSpec::validate(const SystemConfig& cfg) const {
  grid.validate();
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (kind == SweepKind::Interference && (target_user < 1 || target_user >= cfg.K))
    throw ParameterError("interference sweep needs 1 <= target_user < K");
}

const std::vector<std::string>& a1_sweep_header() {
  static const std::vector<std::string> header{"a1", "user", "noma_outage", "oma_outage", "ci",
                                               "K",  "M",    "N",           "R0",         "xi",
                                               "beta", "seed", "trials"};
  return header;
}

const std::vector<std::string>& interference_sweep_header() {
  static const std::vector<std::string> header{
      "A_n", "target_user", "own_outage", "sic_K_to_n_outage", "boundary", "K", "M",
      "N",   "R0",          "xi",         "beta",              "seed",     "trials"};
  return header;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

std::string to_csv_string(const CsvTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw IoError("CSV is empty");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != table.header.size())
      throw IoError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                    std::to_string(table.header.size()));
    table.rows.push_back(std::move(fields));
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in);
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out, table);
  if (!out) throw IoError("write failed for " + path.string());
}

std::string format_coefficient(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_probability(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

Allocation a1_sweep_allocation(int K, double a1, double R0) {
  if (K < 1) throw ParameterError("user count K must be >= 1");
  if (!(a1 >= 0.0 && a1 <= 1.0)) throw ParameterError("a1 must lie in [0, 1]");
  if (!(R0 > 0.0)) throw ParameterError("rate R0 must be > 0");
  Vector<double> a = Vector<double>::Zero(K);
  a(0) = a1;
  if (K == 1) return Allocation::partial(std::move(a));
  Vector<double> weights(K - 1);
  for (int i = 1; i < K; ++i) weights(i - 1) = std::exp2(static_cast<double>(K - 1 - i) * R0);
  a.tail(K - 1) = (1.0 - a1) * weights / weights.sum();
  return Allocation::normalized(std::move(a));
}

double interference_budget(int target_user, double R0, double slack) {
  if (target_user < 1) throw ParameterError("target user must be >= 1");
  if (target_user == 1) return 1.0;
  return (1.0 - slack) * std::exp2(-static_cast<double>(target_user - 1) * R0);
}

Allocation interference_allocation(int K, int target_user, double tail, double R0, double slack) {
  if (target_user < 1 || target_user >= K)
    throw ParameterError("interference sweep needs 1 <= target_user < K");
  const double budget = interference_budget(target_user, R0, slack);
  if (!(tail >= 0.0 && tail <= budget))
    throw ParameterError("tail power must lie in [0, budget]");
  Vector<double> a = Vector<double>::Zero(K);
  a(target_user - 1) = budget - tail;
  a(K - 1) = tail;
  if (target_user == 1) return Allocation::normalized(std::move(a));
  return Allocation::partial(std::move(a));
}

CsvTable run_a1_sweep(const SystemConfig& cfg, const SweepSpec& spec) {
  const PreparedSweep prepared = prepare(cfg, spec);
  const double qos_a1 = qos_fixed_allocation(cfg.K, cfg.R0).coefficient(0);

  std::vector<double> points = spec.grid.points();
  std::erase_if(points, [&](double a) { return std::abs(a - qos_a1) <= kGridTolerance; });
  points.insert(std::upper_bound(points.begin(), points.end(), qos_a1), qos_a1);

  const auto echo = config_echo(cfg, spec);
  CsvTable table{a1_sweep_header(), {}};
  for (const double a1 : points) {
    const Allocation alloc =
        a1 == qos_a1 ? qos_fixed_allocation(cfg.K, cfg.R0) : a1_sweep_allocation(cfg.K, a1, cfg.R0);
    const OutageCounts counts = count_outages(prepared.gains, alloc, cfg, prepared.options);
    for (int n = 0; n < cfg.K; ++n) {
      std::vector<std::string> row{
          format_coefficient(a1),
          std::to_string(n + 1),
          format_probability(static_cast<double>(counts.own_signal(n)) / counts.trials),
          format_probability(static_cast<double>(counts.oma(n)) / counts.trials),
          format_probability(wilson_interval(counts.own_signal(n), counts.trials).half_width)};
      row.insert(row.end(), echo.begin(), echo.end());
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

CsvTable run_interference_sweep(const SystemConfig& cfg, const SweepSpec& spec) {
  const PreparedSweep prepared = prepare(cfg, spec);
  const int n = spec.target_user;
  const double budget = interference_budget(n, cfg.R0);
  const double boundary = std::exp2(-static_cast<double>(n) * cfg.R0);

  const auto echo = config_echo(cfg, spec);
  CsvTable table{interference_sweep_header(), {}};
  for (const double tail : spec.grid.points()) {
    // no non-negative a_n exists past the budget
    if (tail > budget) break;
    const Allocation alloc = interference_allocation(cfg.K, n, tail, cfg.R0);
    const OutageCounts counts = count_outages(prepared.gains, alloc, cfg, prepared.options);
    const double trials = static_cast<double>(counts.trials);
    std::vector<std::string> row{
        format_coefficient(tail),
        std::to_string(n),
        format_probability(static_cast<double>(counts.decode_step(n - 1, n - 1)) / trials),
        format_probability(static_cast<double>(counts.decode_step(cfg.K - 1, n - 1)) / trials),
        format_coefficient(boundary)};
    row.insert(row.end(), echo.begin(), echo.end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

SweepKind detect_sweep_kind(const std::vector<std::string>& header) {
  if (header == a1_sweep_header()) return SweepKind::A1;
  if (header == interference_sweep_header()) return SweepKind::Interference;
  throw IoError("CSV header matches no known sweep");
}

std::filesystem::path emit_plot_script(const std::filesystem::path& csv_path, SweepKind kind) {
  if (!std::filesystem::exists(csv_path)) throw IoError("no such CSV: " + csv_path.string());
  const CsvTable table = read_csv_file(csv_path);
  if (detect_sweep_kind(table.header) != kind) throw IoError("CSV header does not match sweep kind");
  if (table.rows.empty()) throw IoError("CSV has no data rows");

  const auto column = [&](const std::string& name) {
    const auto& h = table.header;
    return static_cast<std::size_t>(std::find(h.begin(), h.end(), name) - h.begin());
  };
  const auto& first = table.rows.front();
  const int K = static_cast<int>(parse_double_field(first[column("K")]));
  const double R0 = parse_double_field(first[column("R0")]);
  if (K < 1 || !(R0 > 0.0)) throw IoError("CSV carries an invalid configuration");

  const std::string data = csv_path.filename().string();
  std::ostringstream s;
  s << "# gnuplot script; run from this directory: gnuplot -p " << csv_path.stem().string()
    << ".plot\n"
    << "set datafile separator ','\n"
    << "set key outside right\n"
    << "set ylabel 'outage probability'\n"
    << "set yrange [0:1.05]\n";

  if (kind == SweepKind::A1) {
    const double qos_a1 = qos_fixed_allocation(K, R0).coefficient(0);
    s << "set xlabel 'a_1'\n"
      << "set title 'Outage versus a_1 (K=" << K << ", R_0=" << format_coefficient(R0) << ")'\n"
      << "set arrow from " << format_coefficient(qos_a1) << ", graph 0 to "
      << format_coefficient(qos_a1) << ", graph 1 nohead dashtype 3\n"
      << "plot \\\n";
    for (int n = 1; n <= K; ++n)
      s << "  '" << data << "' skip 1 using 1:($2==" << n << " ? $3 : 1/0) with lines lc " << n
        << " title 'user " << n << " NOMA', \\\n";
    for (int n = 1; n <= K; ++n)
      s << "  '" << data << "' skip 1 using 1:($2==" << n << " ? $4 : 1/0) with lines lc " << n
        << " dashtype 2 title 'user " << n << " OMA'" << (n < K ? ", \\" : "") << "\n";
  } else {
    const double boundary = parse_double_field(first[column("boundary")]);
    const std::string n = first[column("target_user")];
    s << "set xlabel 'A_n'\n"
      << "set title 'Outage versus interference power (user " << n << ")'\n"
      << "set arrow from " << format_coefficient(boundary) << ", graph 0 to "
      << format_coefficient(boundary) << ", graph 1 nohead dashtype 3\n"
      << "plot \\\n"
      << "  '" << data << "' skip 1 using 1:3 with lines title 'user " << n << " own signal', \\\n"
      << "  '" << data << "' skip 1 using 1:4 with lines dashtype 2 title 'user K decoding user "
      << n << "'\n";
  }

  std::filesystem::path script = csv_path;
  script.replace_extension(".plot");
  std::ofstream out(script, std::ios::binary);
  if (!out) throw IoError("cannot write " + script.string());
  out << s.str();
  if (!out) throw IoError("write failed for " + script.string());
  return script;
}

}  // namespace noma
