#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "noma/config.hpp"
#include "noma/sweep.hpp"

namespace noma {

/// Everything a CLI run needs: the system, the sweep and the run controls.
struct RunSettings {
  SystemConfig system;
  SweepSpec sweep;
};

using KeyValues = std::map<std::string, std::string>;

/// Flat `key = value` text; `#` starts a comment, blank lines are ignored.
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values_file(const std::filesystem::path& path);

/// Recognised keys: K M N R0 xi beta trials seed workers sweep target_user
/// grid_start grid_stop grid_step. Unknown keys are rejected.
void apply_key_values(RunSettings& settings, const KeyValues& values);

}  // namespace noma
