#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numeric>

#include "cd/analysis.h"
#include "cd/dynamics.h"
#include "cd/errors.h"
#include "support.h"

using namespace cd;

namespace {

std::vector<node_t> all_nodes(std::size_t n) {
	std::vector<node_t> v(n);
	std::iota(v.begin(), v.end(), node_t{0});
	return v;
}

SimulationConfig static_config(const Graph& raw) {
	SimulationConfig c;
	c.network = StaticNetwork{std::make_shared<Graph>(row_normalize(raw)), nullptr};
	return c;
}

} // namespace

TEST(BestResponseCoordination, ThresholdAndTie) {
	const auto g = row_normalize(generators::complete(5));
	PopulationState z(5, -1);
	z.x = {1, 1, -1, -1, -1};
	const auto all = all_nodes(5);
	// node 4 sees (1+1-1-1)/4 = 0: tie at alpha = 0 keeps the current action.
	auto next = step_best_response_coordination(g, 0.0, z, all);
	EXPECT_EQ(next.x[4], -1);
	EXPECT_EQ(next.x[0], -1); // sees -1/2
	// alpha = 2 lowers the threshold to -1/2.
	next = step_best_response_coordination(g, 2.0, z, all);
	EXPECT_EQ(next.x[4], 1);
	EXPECT_EQ(next.x[0], 1);
}

TEST(BestResponseCoordination, CommittedStayPut) {
	const auto g = row_normalize(generators::complete(4));
	PopulationState z(4, -1);
	z.commit(std::vector<node_t>{0});
	const auto next = step_best_response_coordination(g, 0.0, z, all_nodes(4));
	EXPECT_EQ(next.x[0], 1);
	EXPECT_EQ(next.x[1], -1);
}

TEST(BestResponseCoordination, AgreesWithGenericRule) {
	rng_t rng(21);
	for (int trial = 0; trial < 200; ++trial) {
		const std::size_t n = 3 + uniform_index(rng, 15);
		const auto g = row_normalize(cdtest::er_with_ring(n, 0.4, rng));
		const double alpha = -0.9 + 3.0 * uniform01(rng);
		PopulationState z(n, -1);
		for (auto& v : z.x)
			v = uniform01(rng) < 0.5 ? -1 : 1;
		const auto all = all_nodes(n);
		const auto a = step_best_response_coordination(g, alpha, z, all);
		const auto b = step_best_response(g, CoordinationParams{alpha}, TieRule::keep_current, z, all, rng);
		EXPECT_EQ(a.x, b.x);
	}
}

TEST(BestResponse, TieRules) {
	const auto g = row_normalize(generators::complete(3));
	PopulationState z(3, -1);
	z.x = {1, -1, 1};
	rng_t rng(1);
	const std::vector<node_t> only{0};
	// node 0 sees one +1 and one -1.
	EXPECT_EQ(step_best_response(g, CoordinationParams{0.0}, TieRule::keep_current, z, only, rng).x[0], 1);
	z.x[0] = -1;
	EXPECT_EQ(step_best_response(g, CoordinationParams{0.0}, TieRule::keep_current, z, only, rng).x[0], -1);
	EXPECT_EQ(step_best_response(g, CoordinationParams{0.0}, TieRule::prefer_plus, z, only, rng).x[0], 1);
	int plus = 0;
	for (int rep = 0; rep < 2000; ++rep)
		plus += step_best_response(g, CoordinationParams{0.0}, TieRule::uniform, z, only, rng).x[0] == 1;
	EXPECT_NEAR(plus / 2000.0, 0.5, 0.05);
}

TEST(Logit, Probability) {
	EXPECT_DOUBLE_EQ(logit_plus_probability(0.0, 3.0), 0.5);
	EXPECT_NEAR(logit_plus_probability(1.0, 2.0), 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
	EXPECT_NEAR(logit_plus_probability(1.0, 2.0, true), 1.0 / (1.0 + std::exp(2.0)), 1e-15);
	EXPECT_DOUBLE_EQ(logit_plus_probability(1.0, 0.0), 0.5);
	EXPECT_EQ(logit_plus_probability(1e6, 1.0), 1.0);
	EXPECT_EQ(logit_plus_probability(-1e6, 1.0), 0.0);
	for (double gap = -3.0; gap <= 3.0; gap += 0.25)
		EXPECT_NEAR(logit_plus_probability(gap, 1.7) + logit_plus_probability(-gap, 1.7), 1.0, 1e-15);
}

TEST(Logit, EmpiricalFrequency) {
	const auto g = row_normalize(generators::complete(3));
	PopulationState z(3, -1);
	z.x = {-1, 1, 1};
	rng_t rng(5);
	const Logit logit{{0.8}, false};
	const std::vector<node_t> only{0};
	const double p = logit_plus_probability(1.0, 0.8);
	int plus = 0;
	const int reps = 20000;
	for (int rep = 0; rep < reps; ++rep)
		plus += step_logit(g, CoordinationParams{0.0}, logit, z, only, rng).x[0] == 1;
	EXPECT_NEAR(plus / double(reps), p, 4.0 * std::sqrt(p * (1 - p) / reps));
}

TEST(TrendMixed, FollowsTrendWhenUtIsOne) {
	const ContactParams cp{3, 0.0, true, true};
	PopulationState z(10, -1);
	z.x[0] = 1;
	rng_t rng(2);
	const auto all = all_nodes(10);
	auto up = step_trend_mixed(cp, 1.0, 0.0, z, 0.0, all, rng);
	EXPECT_DOUBLE_EQ(up.zeta(), 1.0);
	auto down = step_trend_mixed(cp, 1.0, 0.0, z, 0.5, all, rng);
	EXPECT_DOUBLE_EQ(down.zeta(), 0.0);
	auto flat = step_trend_mixed(cp, 1.0, 0.0, z, 0.1, all, rng);
	EXPECT_EQ(flat.x, z.x);
}

TEST(TrendMixed, MeanFieldOneStep) {
	// With u_t = 0 the expected next zeta is pi(zeta) for a large population.
	const std::size_t n = 20000;
	const ContactParams cp{3, 0.0, true, true};
	PopulationState z(n, -1);
	for (std::size_t i = 0; i < n * 3 / 10; ++i)
		z.x[i] = 1;
	rng_t rng(3);
	const auto next = step_trend_mixed(cp, 0.0, 0.0, z, z.zeta(), all_nodes(n), rng);
	const double p = pi_k_alpha(0.3, 3, 0.0);
	EXPECT_NEAR(next.zeta(), p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(LinearAverage, PreservesConsensusAndMean) {
	const auto w = row_normalize(generators::ring(6));
	const std::vector<double> c(6, 0.3);
	for (double v : linear_average_step(w, c))
		EXPECT_NEAR(v, 0.3, 1e-15);
	std::vector<double> y{1, 0, 0, 0, 0, -1};
	const auto next = linear_average_step(w, y);
	EXPECT_NEAR(std::accumulate(next.begin(), next.end(), 0.0), 0.0, 1e-15);
	EXPECT_NEAR(next[0], -0.5, 1e-15);
}

TEST(InitialState, AdopterCountAndCommitted) {
	auto c = static_config(generators::complete(20));
	c.initial.zeta0 = 0.25;
	c.committed = {3, 7};
	rng_t rng(1);
	const auto z = initial_state(c, rng);
	EXPECT_DOUBLE_EQ(z.zeta(), 7.0 / 20.0);
	EXPECT_TRUE(z.is_committed(3));
	EXPECT_EQ(z.x[7], 1);
	for (std::size_t i = 0; i < 20; ++i)
		EXPECT_EQ(z.y[i], z.x[i]);
}

TEST(InitialState, NestedAdopterSets) {
	auto c = static_config(generators::complete(50));
	c.initial.zeta0 = 0.1;
	rng_t r1(8), r2(8);
	const auto small = initial_state(c, r1);
	c.initial.zeta0 = 0.3;
	const auto large = initial_state(c, r2);
	for (std::size_t i = 0; i < 50; ++i)
		if (small.x[i] == 1)
			EXPECT_EQ(large.x[i], 1);
}

TEST(InitialState, ActionsFromOpinions) {
	auto c = static_config(generators::complete(4));
	c.initial.opinions = OpinionInit::explicit_values;
	c.initial.y = {0.5, -0.5, 0.0, 1.0};
	c.initial.actions_from_opinions = true;
	rng_t rng(1);
	const auto z = initial_state(c, rng);
	EXPECT_EQ(z.x, (std::vector<int>{1, -1, -1, 1}));
}

TEST(Simulate, AbsorbsAtConsensus) {
	auto c = static_config(generators::complete(10));
	c.committed = {0, 1, 2, 3, 4, 5};
	c.horizon = 50;
	const auto t = simulate(c, 1);
	ASSERT_TRUE(t.absorbed_at.has_value());
	EXPECT_EQ(*t.absorbed_at, 1u);
	EXPECT_DOUBLE_EQ(t.zeta.back(), 1.0);
	EXPECT_EQ(t.zeta.size(), 2u);
}

TEST(Simulate, AbsorbedInitialState) {
	auto c = static_config(generators::ring(8));
	const auto t = simulate(c, 4);
	ASSERT_TRUE(t.absorbed_at.has_value());
	EXPECT_EQ(*t.absorbed_at, 0u);
	EXPECT_EQ(t.zeta, std::vector<double>{0.0});
}

TEST(Simulate, LogitRunsToHorizon) {
	auto c = static_config(generators::complete(10));
	c.revision.protocol = Logit{{2.0}, false};
	c.horizon = 30;
	const auto t = simulate(c, 1);
	EXPECT_FALSE(t.absorbed_at.has_value());
	EXPECT_EQ(t.zeta.size(), 31u);
}

TEST(Simulate, SnapshotsIncludeLastStep) {
	auto c = static_config(generators::complete(10));
	c.revision.protocol = Logit{{2.0}, false};
	c.horizon = 25;
	c.snapshot_stride = 10;
	const auto t = simulate(c, 1);
	EXPECT_EQ(t.snapshot_times, (std::vector<std::size_t>{0, 10, 20, 25}));
	EXPECT_EQ(t.x_snapshots.size(), 4u);
	EXPECT_EQ(t.x_snapshots.back(), t.final_state.x);
}

TEST(Simulate, SeedDeterminism) {
	auto c = static_config(generators::ring(30));
	c.revision.protocol = Logit{{1.0}, false};
	c.revision.schedule = Schedule::async_uniform;
	c.horizon = 500;
	EXPECT_EQ(simulate(c, 77).zeta, simulate(c, 77).zeta);
	EXPECT_NE(simulate(c, 77).zeta, simulate(c, 78).zeta);
}

TEST(Simulate, FixedSequenceSchedule) {
	auto c = static_config(generators::complete(4));
	c.committed = {0, 1, 2};
	c.revision.schedule = Schedule::fixed_sequence;
	c.revision.sequence = {3};
	c.horizon = 5;
	const auto t = simulate(c, 1);
	EXPECT_DOUBLE_EQ(t.zeta.back(), 1.0);
}

TEST(Simulate, TemporalTrendRun) {
	SimulationConfig c;
	c.network = TemporalNetwork{500, ContactParams{}};
	c.revision.protocol = TrendMixed{0.2, InitialTrend::rising};
	c.initial.zeta0 = 0.02;
	c.horizon = 400;
	const auto t = simulate(c, 3);
	ASSERT_TRUE(t.absorbed_at.has_value());
	EXPECT_DOUBLE_EQ(t.zeta.back(), 1.0);
}

TEST(SimulationConfigValidation, Errors) {
	auto c = static_config(generators::complete(4));
	c.committed = {9};
	EXPECT_THROW(c.validate(), ConfigError);
	c.committed = {1, 1};
	EXPECT_THROW(c.validate(), ConfigError);
	c.committed.clear();
	c.initial.zeta0 = 1.5;
	EXPECT_THROW(c.validate(), ConfigError);
	c.initial.zeta0 = 0.0;
	c.revision.protocol = TrendMixed{};
	EXPECT_THROW(c.validate(), ConfigError);
	c.revision.protocol = BestResponse{};
	c.game = CoordinationParams{-1.0};
	EXPECT_THROW(c.validate(), ConfigError);
	SimulationConfig empty;
	EXPECT_THROW(empty.validate(), ConfigError);
}

TEST(Names, RoundTrip) {
	for (auto t : {TieRule::keep_current, TieRule::prefer_plus, TieRule::uniform})
		EXPECT_EQ(parse_tie_rule(to_string(t)), t);
	for (auto s : {Schedule::synchronous, Schedule::async_uniform, Schedule::fixed_sequence})
		EXPECT_EQ(parse_schedule(to_string(s)), s);
	EXPECT_FALSE(parse_schedule("sometimes").has_value());
}
