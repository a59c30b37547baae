#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "isingrep/estimators.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/models.hpp"

namespace isingrep {

/// Malformed or incomplete experiment configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Host exceeds the size cap of an exact routine.
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The published experiment schema (schemas/experiment.schema.json).
const nlohmann::json& experiment_schema();

/// Validates `instance` against a JSON schema using the keywords type, enum,
/// required, properties, additionalProperties, items, minItems, maxItems,
/// minimum and maximum. Returns one message per violation.
std::vector<std::string> schema_violations(const nlohmann::json& instance, const nlohmann::json& schema);

/// Schema validation plus the checks a schema cannot express; throws ConfigError.
void validate_config(const nlohmann::json& config);

/// FNV-1a of the compact serialisation, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

struct HostInstance {
  MultiGraph graph;
  int d = 0;
  int n = 0;
};

/// One host per entry of "ns" (or the single "n").
std::vector<HostInstance> build_hosts(const nlohmann::json& host);

/// Exactly one of beta, p, x must be present.
ModelParams params_from_config(const nlohmann::json& model);

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

enum class Command { enumerate_check, torus_scan, mixing_scan, sample };

Command command_from_string(const std::string& s);
std::string to_string(Command c);

/// Validates the configuration and runs the command. Configuration and cap
/// errors are reported through exceptions.
CommandResult run_command(Command c, const nlohmann::json& config);

CommandResult cmd_enumerate_check(const nlohmann::json& config);
CommandResult cmd_torus_scan(const nlohmann::json& config);
CommandResult cmd_mixing_scan(const nlohmann::json& config);
CommandResult cmd_sample(const nlohmann::json& config);

}  // namespace isingrep
