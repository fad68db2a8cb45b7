#pragma once

#include "qew/core_state.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qew::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Subcommand { eels, pinem, two_electron, classical_limit, oracle_check, kinematics, fiber_solve, fiber_sweep };
enum class Format { csv, json };

std::string subcommand_name(Subcommand s);
Subcommand parse_subcommand(const std::string& name); // throws ValidationError
const std::vector<Subcommand>& all_subcommands();

enum class ParamType { real, integer, integer_or_auto, real_list, choice, boolean };

struct ParamSpec {
  std::string key; // flag name without the leading dashes
  ParamType type;
  std::string default_value;
  std::string help;
  std::vector<std::string> choices; // for ParamType::choice
};

const std::vector<ParamSpec>& schema(Subcommand s);

struct RunConfig {
  Subcommand subcommand = Subcommand::eels;
  std::map<std::string, std::string> parameters; // only explicitly set keys
  std::string output_path;                       // empty: stdout
  Format format = Format::csv;
};

// Unknown keys and malformed values throw ValidationError.
void validate(const RunConfig& config);

RunConfig preset(const std::string& name); // throws ValidationError for unknown names
const std::vector<std::string>& preset_names();

// Rebuilds the configuration recorded in an output's metadata block.
RunConfig config_from_metadata(const Metadata& meta);

struct RunOutcome {
  int exit_code = 0; // 0 ok, 1 validation error, 2 numerical failure
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  std::string error;
};

// Writes artifacts to config.output_path (one file per list entry, suffixed
// _0, _1, ... when there are several) or to `out`. Diagnostics go to `err`.
RunOutcome run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace qew::cli
