#include "cdcli/commands.h"

#include <filesystem>

#include <spdlog/spdlog.h>

#include "cd/analysis.h"
#include "cd/coevolution.h"
#include "cd/errors.h"
#include "cdcli/io.h"

namespace cdcli {

namespace fs = std::filesystem;

namespace {

json node_list(const std::vector<cd::node_t>& nodes) {
	json a = json::array();
	for (auto v : nodes)
		a.push_back(v);
	return a;
}

json game_json(const RunConfig& rc) { return rc.resolved.value("game", json::object()); }

/// Writes the resolved config and returns its hash.
std::string emit_resolved(const RunConfig& rc, const fs::path& out) {
	const std::string text = dump_json(rc.resolved);
	write_file(out / "resolved_config.json", text);
	return fnv1a_hex(text);
}

void cmd_simulate(const RunConfig& rc, const fs::path& out) {
	const std::string hash = emit_resolved(rc, out);
	const cd::Trajectory traj = cd::simulate(rc.sim, rc.seed);
	const bool opinions = std::holds_alternative<cd::CoevolutionParams>(rc.sim.game);
	write_file(out / "trajectory.csv", trajectory_csv(traj, opinions));
	json meta = {
	    {"seed", rc.seed},
	    {"config_hash", hash},
	    {"n", rc.sim.num_nodes()},
	    {"steps", traj.zeta.size() - 1},
	    {"absorbed_at", traj.absorbed_at ? json(*traj.absorbed_at) : json(nullptr)},
	    {"final_zeta", traj.zeta.back()},
	    {"committed_nodes", node_list(rc.sim.committed)},
	};
	write_file(out / "trajectory.json", dump_json(meta));
	spdlog::info("simulate: {} steps, final zeta {}, wrote {}", traj.zeta.size() - 1,
	             format_number(traj.zeta.back()), (out / "trajectory.csv").string());
}

void cmd_ensemble(const RunConfig& rc, const fs::path& out, unsigned threads) {
	const std::string hash = emit_resolved(rc, out);
	const cd::EnsembleResult r = cd::run_ensemble(rc.sim, rc.runs, rc.seed, rc.criterion, threads);
	write_file(out / "envelope.csv", envelope_csv(r));
	json times = json::array();
	for (const auto& t : r.change_times)
		times.push_back(t ? json(*t) : json(nullptr));
	json summary = {
	    {"runs", r.runs},
	    {"master_seed", r.master_seed},
	    {"config_hash", hash},
	    {"seeds", r.seeds},
	    {"change_probability", r.change_probability},
	    {"mean_change_time", r.mean_change_time ? json(*r.mean_change_time) : json(nullptr)},
	    {"change_times", times},
	    {"criterion", {{"threshold", rc.criterion.threshold}, {"sustain", rc.criterion.sustain}}},
	    {"committed_nodes", node_list(rc.sim.committed)},
	};
	write_file(out / "summary.json", dump_json(summary));
	spdlog::info("ensemble: {} runs, change probability {}", r.runs, format_number(r.change_probability));
}

void cmd_thresholds(const RunConfig& rc, const fs::path& out) {
	emit_resolved(rc, out);
	const auto& sw = rc.thresholds;
	std::vector<ThresholdRow> rows;
	std::vector<UStarRow> stars;
	for (double alpha : sw.alpha)
		for (double u_v : sw.u_v) {
			stars.push_back({sw.k, alpha, u_v, cd::u_star(sw.k, alpha, sw.tol, u_v)});
			for (double u_t : sw.u_t)
				rows.push_back({sw.k, alpha, u_t, u_v, cd::zeta_star_uv(sw.k, alpha, u_t, u_v)});
		}
	write_file(out / "thresholds.csv", thresholds_csv(rows));
	write_file(out / "u_star.csv", u_star_csv(stars));
	spdlog::info("thresholds: {} rows", rows.size());
}

void cmd_nash(const RunConfig& rc, const fs::path& out) {
	const std::string hash = emit_resolved(rc, out);
	cd::ActionGame game;
	if (const auto* c = std::get_if<cd::CoordinationParams>(&rc.sim.game))
		game = *c;
	else
		game = std::get<cd::PggParams>(rc.sim.game);
	const auto eq = cd::find_nash_bruteforce(*rc.graph, game);
	json report = {
	    {"n", rc.graph->num_nodes()},
	    {"game", game_json(rc)},
	    {"config_hash", hash},
	    {"count", eq.size()},
	    {"equilibria", eq},
	};
	if (!rc.labels.empty())
		report["labels"] = rc.labels;
	write_file(out / "nash.json", dump_json(report));
	spdlog::info("nash: {} pure equilibria", eq.size());
}

void cmd_controlset(const RunConfig& rc, const fs::path& out) {
	emit_resolved(rc, out);
	const auto& net = std::get<cd::StaticNetwork>(rc.sim.network);
	const cd::CoevolutionRule rule(net.a_layer, net.w_layer, std::get<cd::CoevolutionParams>(rc.sim.game));
	json report;
	if (rc.controlset.explicit_nodes) {
		const auto& nodes = *rc.controlset.explicit_nodes;
		const auto res = cd::reach_collective_change(rule, nodes);
		report = {
		    {"committed_nodes", node_list(nodes)},
		    {"changed", res.changed},
		    {"rounds", res.rounds},
		    {"final_zeta", res.final_state.zeta()},
		    {"ranking_used", "explicit"},
		};
	} else {
		const auto ranking = cd::rank_nodes(*rc.raw_graph, rc.controlset.ranking, rc.seed);
		const auto res = cd::min_control_set_greedy(rule, ranking);
		report = {
		    {"committed_nodes", node_list(res.committed)},
		    {"changed", res.changed},
		    {"rounds", res.rounds},
		    {"final_zeta", res.final_zeta},
		    {"ranking_used", std::string(cd::to_string(rc.controlset.ranking))},
		};
		if (!res.changed)
			spdlog::warn("controlset: no prefix of the ranking produces collective change");
	}
	write_file(out / "controlset.json", dump_json(report));
	spdlog::info("controlset: {} committed, changed = {}", report["committed_nodes"].size(),
	             report["changed"].get<bool>());
}

void cmd_graph_info(const RunConfig& rc, const fs::path& out) {
	const std::string hash = emit_resolved(rc, out);
	const cd::Graph& g = *rc.graph;
	std::size_t sccs = 0;
	cd::strongly_connected_components(g, &sccs);
	json info = {
	    {"n", g.num_nodes()},
	    {"arcs", g.num_arcs()},
	    {"config_hash", hash},
	    {"row_stochastic", g.row_stochastic()},
	    {"weakly_connected", cd::weakly_connected(g)},
	    {"strongly_connected_components", sccs},
	    {"globally_reachable_node", cd::has_globally_reachable_node(g)},
	};
	std::vector<double> out_weight(g.num_nodes());
	std::vector<std::size_t> degree(g.num_nodes());
	for (cd::node_t i = 0; i < g.num_nodes(); ++i) {
		out_weight[i] = g.out_weight(i);
		degree[i] = g.out_degree(i);
	}
	info["out_degree"] = degree;
	info["out_weight"] = out_weight;
	info["eigenvector_centrality"] =
	    info["weakly_connected"].get<bool>() ? json(cd::eigenvector_centrality(*rc.raw_graph)) : json(nullptr);
	info["social_power"] = g.row_stochastic() && info["globally_reachable_node"].get<bool>()
	                           ? json(cd::social_power(g))
	                           : json(nullptr);
	if (!rc.labels.empty())
		info["labels"] = rc.labels;
	write_file(out / "graph_info.json", dump_json(info));
	spdlog::info("graph-info: {} nodes, {} arcs", g.num_nodes(), g.num_arcs());
}

void dispatch(const CommandOptions& options, const RunConfig& rc) {
	const fs::path out(rc.output);
	switch (options.command) {
	case Command::simulate: cmd_simulate(rc, out); break;
	case Command::ensemble: cmd_ensemble(rc, out, options.threads); break;
	case Command::thresholds: cmd_thresholds(rc, out); break;
	case Command::nash: cmd_nash(rc, out); break;
	case Command::controlset: cmd_controlset(rc, out); break;
	case Command::graph_info: cmd_graph_info(rc, out); break;
	}
}

} // namespace

void run_command(const CommandOptions& options) {
	if (!options.config_path) {
		if (options.command != Command::thresholds)
			throw cd::ConfigError("--config", "a config file is required for this command");
		run_command(options, json::object());
		return;
	}
	dispatch(options, load_run_config(*options.config_path, options.command, options.overrides));
}

void run_command(const CommandOptions& options, const json& doc) {
	dispatch(options, parse_run_config(doc, options.command, fs::current_path(), options.overrides));
}

int exit_code_for(const std::exception& e) { return dynamic_cast<const cd::ConfigError*>(&e) ? 2 : 3; }

} // namespace cdcli
