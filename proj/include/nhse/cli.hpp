#pragma once

#include "nhse/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nhse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O and other unexpected failures
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

enum class OutputFormat { Csv, Svg, Both };

struct CommandContext {
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::Both;
  int threads = 0;  // 0: hardware concurrency
};

struct CommandResult {
  std::string summary;             // one line, no trailing newline
  std::vector<std::string> files;  // paths written, in order
};

CommandResult cmd_spectrum(const RunConfig& config, const CommandContext& ctx);
CommandResult cmd_gbz(const RunConfig& config, const CommandContext& ctx);
CommandResult cmd_evolve(const RunConfig& config, const CommandContext& ctx);
CommandResult cmd_project(const RunConfig& config, const CommandContext& ctx);
CommandResult cmd_phase_diagram(const RunConfig& config, const CommandContext& ctx);
CommandResult cmd_sweep(const RunConfig& config, const CommandContext& ctx);

/// Full command line front end. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nhse::cli
