#pragma once

#include <string>
#include <vector>

#include "aniso_dbvp/config.hpp"
#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/report.hpp"

namespace adbvp {

enum ExitCode : int { exit_ok = 0, exit_hypothesis_failed = 1, exit_no_convergence = 2, exit_config_error = 3 };

struct CommandOutput {
  int exit_code = exit_ok;
  std::string body;  ///< JSON document or CSV table
};

const std::vector<std::string>& command_names();

/// Runs one subcommand on a loaded configuration. Throws Error for bad input.
CommandOutput run_command(const ConfigDocument& doc, const std::string& command);

/// Exit code for an Error category.
int exit_code_for(Errc code);

/// Machine-readable error object.
Json error_object(Errc code, const std::string& message, std::optional<std::size_t> offset = std::nullopt);

/// Printed-versus-recomputed table for ex3.3 / ex3.10; null for other ids.
Json discrepancy_section(const std::string& example_id, const ProblemInstance& inst);

}  // namespace adbvp
