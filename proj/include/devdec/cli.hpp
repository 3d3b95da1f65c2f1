#ifndef DEVDEC_CLI_HPP
#define DEVDEC_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace devdec::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kInputError = 2 };

struct CliConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string tensor;  ///< verify: original tensor file
  std::optional<int> order;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
  std::string format;  ///< json|text; empty selects the command's default
  std::string variant = "fitted";
  bool report_diff = false;
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatch on an already parsed configuration.
int execute(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace devdec::cli

#endif  // DEVDEC_CLI_HPP
