#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cd/dynamics.h"
#include "cd/graph.h"
#include "cd/montecarlo.h"

namespace cdcli {

using json = nlohmann::json;

enum class Command { simulate, ensemble, thresholds, nash, controlset, graph_info };

std::string_view to_string(Command c);

/// Values given on the command line; they override the config file.
struct Overrides {
	std::optional<std::uint64_t> seed;
	std::optional<long long> runs;
	std::optional<std::string> out;
};

struct ThresholdSweep {
	int k = 3;
	std::vector<double> alpha{0.0};
	std::vector<double> u_t{0.0};
	std::vector<double> u_v{0.0};
	double tol = 1e-10;
};

struct ControlSetQuery {
	cd::Ranking ranking = cd::Ranking::eigenvector;
	/// Set when the committed section lists nodes explicitly.
	std::optional<std::vector<cd::node_t>> explicit_nodes;
};

/// Fully resolved run configuration. `resolved` holds every field with its
/// default filled in and replays the run when fed back as a config file.
struct RunConfig {
	Command command = Command::simulate;
	json resolved;
	std::uint64_t seed = 0;
	std::string output = "out";

	cd::SimulationConfig sim;
	/// Static influence layer (also the communication layer unless one is given).
	std::shared_ptr<const cd::Graph> graph;
	/// The same layer before row normalization; rankings use it.
	std::shared_ptr<const cd::Graph> raw_graph;
	std::vector<std::string> labels;

	std::size_t runs = 100;
	cd::ChangeCriterion criterion;
	ThresholdSweep thresholds;
	ControlSetQuery controlset;
};

/// Parses `doc` for `command`. Relative file paths resolve against `base_dir`.
/// Throws cd::ConfigError with the offending field path.
RunConfig parse_run_config(const json& doc, Command command, const std::filesystem::path& base_dir,
                           const Overrides& overrides = {});

/// Reads and parses a JSON config file.
RunConfig load_run_config(const std::filesystem::path& file, Command command, const Overrides& overrides = {});

} // namespace cdcli
