#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace wsndet::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kParseError = 2, kValidationError = 3 };

const std::vector<std::string>& subcommands();

/// Loads defaults, then the config file, then each "section.key=value"
/// override in order, and runs the subcommand. Never throws.
int run(const std::string& subcommand, const std::optional<std::filesystem::path>& config_path,
        const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err);

}  // namespace wsndet::cli
