#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace infent::cli {

/// key = value pairs in file order. '#' starts a comment, [section] headers
/// are ignored, values may be quoted. Keys may carry a leading "--".
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// Merges a config file named by --config into the argument list. File keys
/// become "--key=value" unless the flag already appears on the command line;
/// "lambda" and "r" count as one flag. A "command" key supplies the
/// subcommand when none of `commands` is present.
std::vector<std::string> merge_config(std::vector<std::string> args, const std::vector<std::string>& commands);

}  // namespace infent::cli
