#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mevsim/dynamics.hpp"

namespace mevsim::cli {

// Exit codes: 0 success, 2 config error, 3 precondition error,
// 4 witness search exhaustion.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kPreconditionError = 3,
  kSearchExhausted = 4,
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<bool> svg;
  // Dotted-path assignments, raw JSON on the right-hand side.
  std::vector<std::pair<std::string, std::string>> sets;
};

// Loads the config file, applies overrides, validates the schema for the
// command and materializes defaults. Throws ConfigError.
nlohmann::json load_effective_config(const std::string& command,
                                     const std::filesystem::path& config_path,
                                     const Overrides& overrides);

ToleranceDistribution parse_distribution(const nlohmann::json& j,
                                         const std::string& context);
MarketInstance parse_market(const nlohmann::json& j, const std::string& context);
UpdateRule parse_rule(const nlohmann::json& j, const std::string& context);

// Full command run: load + validate config, dispatch, write outputs and the
// effective-config echo into the output directory.
int run_command(const std::string& command,
                const std::filesystem::path& config_path,
                const Overrides& overrides);

}  // namespace mevsim::cli
