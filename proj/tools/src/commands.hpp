#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace iselect::cli {

/// Parsed command line of one subcommand. Unset flags fall back to the
/// config, then to defaults.
struct Invocation {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> qmin;
  std::optional<double> qmax;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> nmax;
  std::optional<std::uint64_t> between;
};

struct Outcome {
  std::string out;
  std::size_t rows = 0;
  std::string note;
};

Outcome run_two_mode(const Invocation& inv);
Outcome run_velocity_select(const Invocation& inv);
Outcome run_cool_compete(const Invocation& inv);
Outcome run_hydrogen_scan(const Invocation& inv);
Outcome run_antiresonance(const Invocation& inv);
Outcome run_cool_mc(const Invocation& inv);

}  // namespace iselect::cli
