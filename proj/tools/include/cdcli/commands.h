#pragma once

#include <optional>
#include <string>

#include "cdcli/config.h"

namespace cdcli {

struct CommandOptions {
	Command command = Command::simulate;
	std::optional<std::string> config_path;
	Overrides overrides;
	/// Worker cap for ensembles; 0 = hardware concurrency. Never changes results.
	unsigned threads = 0;
};

/// Runs one subcommand and writes its files under the output directory.
/// Errors propagate as cd::Error subclasses.
void run_command(const CommandOptions& options);

/// Same, from an already parsed document (relative paths resolve against the
/// working directory).
void run_command(const CommandOptions& options, const json& doc);

/// 2 for configuration errors, 3 for everything else.
int exit_code_for(const std::exception& e);

} // namespace cdcli
