#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ged::cli {

enum class CliCommand { Serve, Check, Graph };
enum class GraphKind { Factor, Level };
enum class OutputFormat { Csv, Dot };

struct CliConfig {
  CliCommand command = CliCommand::Serve;
  std::string input_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> output_path;  // default: stdout
  GraphKind graph_kind = GraphKind::Factor;
  OutputFormat format = OutputFormat::Csv;
};

// Entry point behind the ged binary; args exclude the program name.
// Exit codes: 0 success, 1 parse/validation failure (diagnostics on the
// error stream as FILE:LINE:COL: message), 2 I/O failure. Never throws.
int run(const std::vector<std::string>& args);

}  // namespace ged::cli
