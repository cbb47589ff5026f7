#include "noma/config_file.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace noma {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParameterError("bad value for " + key + ": '" + text + "'");
  return value;
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParameterError("config line " + std::to_string(line_no) + ": empty key or value");
    values[key] = value;
  }
  return values;
}

KeyValues read_key_values_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_key_values(in);
}

void apply_key_values(RunSettings& settings, const KeyValues& values) {
  SystemConfig& sys = settings.system;
  SweepSpec& sweep = settings.sweep;
  for (const auto& [key, value] : values) {
    if (key == "K") sys.K = parse_number<int>(key, value);
    else if (key == "M") sys.M = parse_number<int>(key, value);
    else if (key == "N") sys.N = parse_number<int>(key, value);
    else if (key == "R0") sys.R0 = parse_number<double>(key, value);
    else if (key == "xi") sys.xi = parse_number<double>(key, value);
    else if (key == "beta") sys.beta = parse_number<double>(key, value);
    else if (key == "trials") sweep.trials = parse_number<std::uint64_t>(key, value);
    else if (key == "seed") sweep.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "workers") sweep.workers = parse_number<unsigned>(key, value);
    else if (key == "target_user") sweep.target_user = parse_number<int>(key, value);
    else if (key == "grid_start") sweep.grid.start = parse_number<double>(key, value);
    else if (key == "grid_stop") sweep.grid.stop = parse_number<double>(key, value);
    else if (key == "grid_step") sweep.grid.step = parse_number<double>(key, value);
    else if (key == "sweep") {
      if (value == "a1") sweep.kind = SweepKind::A1;
      else if (value == "interference") sweep.kind = SweepKind::Interference;
      else throw ParameterError("sweep must be 'a1' or 'interference'");
    } else {
      throw ParameterError("unknown config key '" + key + "'");
    }
  }
}

}  // namespace noma
