#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mems::cli {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;
constexpr int kIo = 3;
constexpr int kNumerical = 4;

/// Runs one command. args[0] is the command name, followed by options.
/// Outputs go to the configured out_dir; a one-line report goes to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mems::cli
