#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rnforge/cli/space_file.hpp"

namespace rnforge::cli {

enum ExitCode : int { kExitOk = 0, kExitVerificationFailed = 1, kExitInputError = 2 };

/// Runs one command line (without the program name), writing the JSON
/// report to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Number of random subsets checked when a space is too large to sweep.
inline constexpr std::uint64_t kSampledSubsets = 10000;
/// Environment variable holding the seed for sampled verification.
inline constexpr const char* kSeedVariable = "RNFORGE_SEED";

/// Bundled example files.
SpaceFile example_three_atom();
SpaceFile example_eight_atom();
SpaceFile example_null_atom();

/// Writes three_atom.json, eight_atom.json and null_atom.json into `dir`
/// (created if missing). Throws InputError on I/O failure.
std::vector<std::filesystem::path> emit_example_files(const std::filesystem::path& dir);

std::string sha256_hex(std::string_view data);

}  // namespace rnforge::cli
