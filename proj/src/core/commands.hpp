#pragma once

#include <string>

#include "json.hpp"

namespace samplan::commands {

inline constexpr int kSchemaVersion = 1;

// Executes one request and returns
//   { "schema_version", "command", "config": <resolved request>,
//     "report": <command summary>, "artifacts": { filename: content } }.
// Commands: rates, smith, rmse, od, sweep, plan, simulate, fixture.
// Throws ConfigError for bad requests, DataError for bad inputs.
nlohmann::json run_command(const nlohmann::json& request);

// Convenience wrapper over JSON-in/JSON-out strings.
std::string run_command_text(const std::string& request_text);

}  // namespace samplan::commands
