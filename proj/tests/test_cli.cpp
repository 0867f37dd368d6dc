#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cd/errors.h"
#include "cdcli/commands.h"
#include "cdcli/config.h"
#include "cdcli/io.h"

using namespace cdcli;
using cd::ConfigError;
namespace fs = std::filesystem;

namespace {

const std::string data_dir = CD_TEST_DATA;

std::string slurp(const fs::path& p) {
	std::ifstream in(p, std::ios::binary);
	std::ostringstream s;
	s << in.rdbuf();
	return s.str();
}

class CliTest : public ::testing::Test {
protected:
	void SetUp() override {
		dir_ = fs::temp_directory_path() /
		       ("cdcli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
		fs::remove_all(dir_);
		fs::create_directories(dir_);
	}
	void TearDown() override { fs::remove_all(dir_); }

	CommandOptions opts(Command c, const std::string& sub, unsigned threads = 1) const {
		CommandOptions o;
		o.command = c;
		o.threads = threads;
		o.overrides.out = (dir_ / sub).string();
		return o;
	}

	fs::path dir_;
};

json two_triangle_doc() {
	return json::parse(R"({"game": {"type": "coordination", "alpha": 0},
	  "network": {"source": "file", "path": ")" +
	                   data_dir + R"(/two_triangle.txt"}})");
}

json logit_doc() {
	return json::parse(R"({
	  "game": {"type": "coordination", "alpha": 0.5},
	  "network": {"source": "generator", "model": "ring", "n": 20},
	  "revision": {"protocol": "logit", "sigma": 2},
	  "initial": {"zeta0": 0.3},
	  "committed": {"nodes": [0, 5]},
	  "horizon": 40, "seed": 11})");
}

std::string config_error_path(const json& doc, Command c, Overrides o = {}) {
	try {
		parse_run_config(doc, c, fs::current_path(), o);
	} catch (const ConfigError& e) {
		return e.path();
	}
	return "<none>";
}

} // namespace

TEST(Config, UnknownKeysCarryTheirPath) {
	auto doc = two_triangle_doc();
	doc["game"]["alfa"] = 1;
	EXPECT_EQ(config_error_path(doc, Command::nash), "game.alfa");
	doc = two_triangle_doc();
	doc["colour"] = "red";
	EXPECT_EQ(config_error_path(doc, Command::nash), "colour");
}

TEST(Config, BadValues) {
	auto doc = logit_doc();
	doc["game"]["alpha"] = -1.5;
	EXPECT_EQ(config_error_path(doc, Command::simulate), "game.alpha");
	doc = logit_doc();
	doc["revision"]["schedule"] = "whenever";
	EXPECT_EQ(config_error_path(doc, Command::simulate), "revision.schedule");
	doc = logit_doc();
	doc["committed"]["nodes"] = {0, 99};
	EXPECT_EQ(config_error_path(doc, Command::simulate), "committed.nodes[1]");
	doc = logit_doc();
	doc["horizon"] = "long";
	EXPECT_EQ(config_error_path(doc, Command::simulate), "horizon");
	doc = logit_doc();
	doc.erase("network");
	EXPECT_EQ(config_error_path(doc, Command::simulate).rfind("network", 0), 0u);
}

TEST(Config, RunsMustBePositive) {
	Overrides o;
	o.runs = -1;
	EXPECT_EQ(config_error_path(logit_doc(), Command::ensemble, o), "runs");
	auto doc = logit_doc();
	doc["runs"] = 0;
	EXPECT_EQ(config_error_path(doc, Command::ensemble), "runs");
}

TEST(Config, DefaultsAndOverrides) {
	Overrides o;
	o.seed = 99;
	o.runs = 7;
	const auto rc = parse_run_config(logit_doc(), Command::ensemble, fs::current_path(), o);
	EXPECT_EQ(rc.seed, 99u);
	EXPECT_EQ(rc.runs, 7u);
	EXPECT_EQ(rc.resolved["seed"], 99);
	EXPECT_EQ(rc.resolved["runs"], 7);
	EXPECT_DOUBLE_EQ(rc.criterion.threshold, 0.95);
	EXPECT_EQ(rc.criterion.sustain, 50u);
	EXPECT_EQ(rc.sim.committed, (std::vector<cd::node_t>{0, 5}));
	EXPECT_FALSE(rc.resolved.contains("output"));
}

TEST(Config, ResolvedConfigIsAFixedPoint) {
	const auto rc = parse_run_config(logit_doc(), Command::simulate, fs::current_path());
	const auto again = parse_run_config(rc.resolved, Command::simulate, fs::current_path());
	EXPECT_EQ(dump_json(rc.resolved), dump_json(again.resolved));
}

TEST(Config, LabelledFileAndLabelNodes) {
	auto doc = json::parse(R"({"game": {"type": "coevolution"},
	  "network": {"source": "file", "path": ")" +
	                       data_dir + R"(/labelled.txt", "labels": true, "undirected": true},
	  "committed": {"nodes": ["ann"]}})");
	const auto rc = parse_run_config(doc, Command::controlset, fs::current_path());
	ASSERT_EQ(rc.labels.size(), 3u);
	ASSERT_TRUE(rc.controlset.explicit_nodes.has_value());
	EXPECT_EQ(rc.labels[(*rc.controlset.explicit_nodes)[0]], "ann");
}

TEST(Config, MissingFileIsConfigError) {
	EXPECT_THROW(load_run_config("/nonexistent/cfg.json", Command::simulate), ConfigError);
}

TEST_F(CliTest, ExitCodes) {
	const ConfigError ce("x", "y");
	const cd::DomainError de("z");
	const cd::FileError fe("w");
	EXPECT_EQ(exit_code_for(ce), 2);
	EXPECT_EQ(exit_code_for(de), 3);
	EXPECT_EQ(exit_code_for(fe), 3);

	auto doc = json::parse(R"({"game": {"type": "coordination"},
	  "network": {"source": "file", "path": "/nonexistent/edges.txt"}})");
	try {
		run_command(opts(Command::graph_info, "g"), doc);
		FAIL() << "expected an error";
	} catch (const std::exception& e) {
		EXPECT_EQ(exit_code_for(e), 3);
	}
}

TEST_F(CliTest, SimulateWritesFilesAndEchoesCommitted) {
	run_command(opts(Command::simulate, "s"), logit_doc());
	const auto meta = json::parse(slurp(dir_ / "s" / "trajectory.json"));
	EXPECT_EQ(meta["committed_nodes"], json({0, 5}));
	EXPECT_EQ(meta["seed"], 11);
	EXPECT_EQ(meta["steps"], 40);
	const auto csv = slurp(dir_ / "s" / "trajectory.csv");
	EXPECT_EQ(csv.rfind("t,zeta", 0), 0u);
	EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 42);
	EXPECT_TRUE(fs::exists(dir_ / "s" / "resolved_config.json"));
}

TEST_F(CliTest, EnsembleSingleRun) {
	auto o = opts(Command::ensemble, "e");
	o.overrides.runs = 1;
	run_command(o, logit_doc());
	const auto summary = json::parse(slurp(dir_ / "e" / "summary.json"));
	EXPECT_EQ(summary["runs"], 1);
	EXPECT_EQ(summary["seeds"].size(), 1u);
	EXPECT_EQ(summary["committed_nodes"], json({0, 5}));
	const auto env = slurp(dir_ / "e" / "envelope.csv");
	EXPECT_EQ(env.rfind("t,q025,q500,q975,mean_zeta\n", 0), 0u);
}

TEST_F(CliTest, NashAndGraphInfo) {
	run_command(opts(Command::nash, "n"), two_triangle_doc());
	EXPECT_EQ(json::parse(slurp(dir_ / "n" / "nash.json"))["count"], 4);
	run_command(opts(Command::graph_info, "g"), two_triangle_doc());
	const auto info = json::parse(slurp(dir_ / "g" / "graph_info.json"));
	EXPECT_EQ(info["n"], 6);
	EXPECT_TRUE(info["row_stochastic"].get<bool>());
	EXPECT_TRUE(info["weakly_connected"].get<bool>());
}

TEST_F(CliTest, ThresholdsWithoutConfig) {
	auto o = opts(Command::thresholds, "t");
	run_command(o);
	const auto csv = slurp(dir_ / "t" / "thresholds.csv");
	EXPECT_EQ(csv.rfind("k,alpha,u_t,u_v,zeta_star\n3,0,0,0,0.5", 0), 0u);
	const auto stars = slurp(dir_ / "t" / "u_star.csv");
	EXPECT_EQ(stars.rfind("k,alpha,u_v,u_star\n3,0,0,0.111111", 0), 0u);
}

TEST_F(CliTest, ControlsetExplicitAndRanked) {
	auto doc = json::parse(R"({"game": {"type": "coevolution", "gamma": 0, "beta": 20, "lambda": 1},
	  "network": {"source": "generator", "model": "complete", "n": 6}})");
	run_command(opts(Command::controlset, "ranked"), doc);
	const auto ranked = json::parse(slurp(dir_ / "ranked" / "controlset.json"));
	EXPECT_EQ(ranked["committed_nodes"].size(), 1u);
	EXPECT_TRUE(ranked["changed"].get<bool>());
	EXPECT_EQ(ranked["ranking_used"], "eigenvector");
	doc["committed"] = {{"nodes", {2, 3}}};
	run_command(opts(Command::controlset, "explicit"), doc);
	const auto expl = json::parse(slurp(dir_ / "explicit" / "controlset.json"));
	EXPECT_EQ(expl["committed_nodes"], json({2, 3}));
	EXPECT_EQ(expl["ranking_used"], "explicit");
	EXPECT_TRUE(expl["changed"].get<bool>());
}

TEST_F(CliTest, ReplayIsByteIdentical) {
	auto o = opts(Command::ensemble, "a", 1);
	o.overrides.runs = 6;
	run_command(o, logit_doc());
	const json resolved = json::parse(slurp(dir_ / "a" / "resolved_config.json"));
	run_command(opts(Command::ensemble, "b", 4), resolved);
	for (const char* f : {"resolved_config.json", "summary.json", "envelope.csv"})
		EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}

TEST(Io, FormatAndHash) {
	EXPECT_EQ(format_number(0.0), "0");
	EXPECT_EQ(format_number(-0.0), "0");
	EXPECT_EQ(format_number(0.1), "0.1");
	EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
	EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
	EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}
