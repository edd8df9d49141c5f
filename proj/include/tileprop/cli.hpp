#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace tileprop {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Runs the command-line tool. `args` excludes the program name. Errors are
/// reported on `err` as a single JSON line {"error": ..., "kind": ...}.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads `key=value` lines; blank lines and `#` comments are ignored.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

/// Sorted ids (file stems) of the scenes in a directory, i.e. of its *.pgm files.
std::vector<std::string> list_scene_ids(const std::filesystem::path& dir);

}  // namespace tileprop
