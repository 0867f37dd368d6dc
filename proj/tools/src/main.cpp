#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cdcli/commands.h"

namespace {

void setup_logging() {
	auto logger = spdlog::stderr_color_mt("cdsim");
	spdlog::set_default_logger(logger);
	spdlog::set_pattern("[%l] %v");
	spdlog::set_level(spdlog::level::info);
	if (const char* env = std::getenv("CD_LOG")) {
		const auto level = spdlog::level::from_str(env);
		if (level == spdlog::level::off && std::string_view(env) != "off")
			spdlog::warn("unknown CD_LOG level '{}', keeping info", env);
		else
			spdlog::set_level(level);
	}
}

} // namespace

int main(int argc, char** argv) {
	setup_logging();

	CLI::App app{"Collective-change simulator"};
	app.require_subcommand(1);

	cdcli::CommandOptions options;
	std::string config;
	std::uint64_t seed = 0;
	long long runs = 0;
	std::string out;

	struct Sub {
		const char* name;
		const char* help;
		cdcli::Command command;
	};
	const Sub subs[] = {
	    {"simulate", "run one trajectory", cdcli::Command::simulate},
	    {"ensemble", "run many seeded trajectories and summarize", cdcli::Command::ensemble},
	    {"thresholds", "sweep adoption thresholds", cdcli::Command::thresholds},
	    {"nash", "enumerate pure equilibria on a small graph", cdcli::Command::nash},
	    {"controlset", "search a committed set that triggers collective change", cdcli::Command::controlset},
	    {"graph-info", "summarize a network", cdcli::Command::graph_info},
	};
	std::vector<CLI::App*> commands;
	for (const auto& s : subs) {
		CLI::App* sub = app.add_subcommand(s.name, s.help);
		sub->add_option("--config", config, "JSON run configuration");
		sub->add_option("--seed", seed, "master seed (overrides the config)");
		if (s.command == cdcli::Command::ensemble)
			sub->add_option("--runs", runs, "number of runs (overrides the config)");
		sub->add_option("--out", out, "output directory (overrides the config)");
		sub->add_option("--threads", options.threads, "worker cap, 0 = all cores");
		sub->callback([&options, &config, &seed, &runs, &out, sub, cmd = s.command] {
			options.command = cmd;
			if (sub->count("--config"))
				options.config_path = config;
			if (sub->count("--seed"))
				options.overrides.seed = seed;
			if (cmd == cdcli::Command::ensemble && sub->count("--runs"))
				options.overrides.runs = runs;
			if (sub->count("--out"))
				options.overrides.out = out;
		});
		commands.push_back(sub);
	}

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		app.exit(e);
		return 2;
	}

	try {
		cdcli::run_command(options);
	} catch (const std::exception& e) {
		spdlog::error("{}", e.what());
		return cdcli::exit_code_for(e);
	}
	return 0;
}
