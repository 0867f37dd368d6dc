#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <numeric>

#include "cd/analysis.h"
#include "cd/dynamics.h"
#include "cd/errors.h"
#include "cd/games.h"

using namespace cd;

namespace {

// Node 0 listens to five unit-weight neighbours: two play +1, three play -1.
Graph example_node() {
	std::vector<Edge> e;
	for (node_t j = 1; j <= 5; ++j) {
		e.push_back({0, j, 1.0});
		e.push_back({j, 0, 1.0});
	}
	return Graph::from_edges(6, e);
}

const std::vector<int> example_x{-1, 1, 1, -1, -1, -1};

} // namespace

TEST(MatrixPayoff, FullCoordination) {
	const auto g = row_normalize(generators::complete(4));
	const std::vector<int> x(4, 1);
	EXPECT_DOUBLE_EQ(network_matrix_payoff(g, MatrixGame::coordination(0.0), 0, 1, x), 1.0);
	EXPECT_DOUBLE_EQ(coordination_payoff(g, {0.0}, 0, 1, x), 1.0);
}

TEST(MatrixPayoff, TwoVersusThreeNeighbours) {
	const auto g = example_node();
	for (double alpha : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
		const auto m = MatrixGame::coordination(alpha);
		EXPECT_DOUBLE_EQ(network_matrix_payoff(g, m, 0, 1, example_x), 2.0 * (1.0 + alpha));
		EXPECT_DOUBLE_EQ(network_matrix_payoff(g, m, 0, -1, example_x), 3.0);
		EXPECT_DOUBLE_EQ(coordination_payoff(g, {alpha}, 0, 1, example_x), 2.0 * (1.0 + alpha));
		EXPECT_DOUBLE_EQ(coordination_payoff(g, {alpha}, 0, -1, example_x), 3.0);
	}
}

TEST(MatrixPayoff, ZeroRowAndRange) {
	const auto g = Graph::from_edges(3, {{0, 1, 1.0}});
	const std::vector<int> x{1, 1, 1};
	EXPECT_DOUBLE_EQ(network_matrix_payoff(g, MatrixGame::coordination(0.0), 2, 1, x), 0.0);
	EXPECT_THROW(network_matrix_payoff(g, MatrixGame::coordination(0.0), 7, 1, x), DomainError);
}

TEST(CoordinationPayoff, ExampleTieAndStrict) {
	const auto g = example_node();
	EXPECT_DOUBLE_EQ(coordination_payoff(g, {0.5}, 0, 1, example_x), 3.0);
	EXPECT_DOUBLE_EQ(coordination_payoff(g, {0.5}, 0, -1, example_x), 3.0);
	EXPECT_DOUBLE_EQ(coordination_payoff(g, {1.0}, 0, 1, example_x), 4.0);
	EXPECT_DOUBLE_EQ(coordination_payoff(g, {1.0}, 0, -1, example_x), 3.0);
}

TEST(CoordinationPayoff, AgreesWithMatrixFormOnRandomGraphs) {
	rng_t rng(3);
	std::vector<int> x(8);
	for (int trial = 0; trial < 1000; ++trial) {
		const auto g = row_normalize(generators::complete(8)).scaled(1.0);
		const auto er = generators::erdos_renyi(8, 0.5, rng);
		const double alpha = -0.9 + 3.0 * uniform01(rng);
		for (auto& v : x)
			v = uniform01(rng) < 0.5 ? -1 : 1;
		const auto& graph = trial % 2 ? er : g;
		for (node_t i = 0; i < 8; ++i)
			for (int a : {-1, 1})
				EXPECT_NEAR(coordination_payoff(graph, {alpha}, i, a, x),
				            network_matrix_payoff(graph, MatrixGame::coordination(alpha), i, a, x), 1e-12);
	}
}

TEST(PggPayoff, ConsensusIdentities) {
	for (double r : {1.5, 2.0, 3.3, 7.0}) {
		const PggParams p{r};
		const std::vector<int> defect(10, -1), coop(10, 1);
		EXPECT_EQ(pgg_payoff(p, 0, -1, defect), 0.0);
		EXPECT_EQ(pgg_payoff(p, 0, 1, coop), r - 1.0);
	}
}

TEST(PggPayoff, FreeRider) {
	std::vector<int> x(10, 1);
	x[0] = -1;
	EXPECT_NEAR(pgg_payoff(PggParams{5.0}, 0, -1, x), 4.5, 1e-12);
}

TEST(PggPayoff, EmptyPopulationIsDomainError) {
	EXPECT_THROW(pgg_payoff(PggParams{2.0}, 0, 1, std::vector<int>{}), DomainError);
}

TEST(PggPayoff, DefectionDominates) {
	rng_t rng(8);
	for (int trial = 0; trial < 500; ++trial) {
		const std::size_t n = 2 + uniform_index(rng, 30);
		const double r = 1.0 + (static_cast<double>(n) - 1.0) * (0.01 + 0.98 * uniform01(rng));
		std::vector<int> x(n);
		for (auto& v : x)
			v = uniform01(rng) < 0.5 ? -1 : 1;
		const node_t i = uniform_index(rng, n);
		const double gap = pgg_payoff({r}, i, -1, x) - pgg_payoff({r}, i, 1, x);
		EXPECT_NEAR(gap, 1.0 - r / static_cast<double>(n), 1e-12);
		EXPECT_GT(gap, 0.0);
		const auto br = best_response_actions(PggParams{r}, generators::complete(n), i, x);
		ASSERT_EQ(br.size(), 1u);
		EXPECT_EQ(br[0], -1);
	}
}

TEST(OpinionPayoff, Values) {
	const auto w = Graph::from_edges(3, {{0, 1, 0.5}, {0, 2, 0.5}});
	EXPECT_DOUBLE_EQ(opinion_payoff(w, 0, 0.3, std::vector<double>{0.0, 0.3, 0.3}), 0.0);
	EXPECT_DOUBLE_EQ(opinion_payoff(w, 0, 0.0, std::vector<double>{0.0, -1.0, 1.0}), -0.5);
	// Vertex of the quadratic sits at the weighted mean.
	const std::vector<double> y{0.0, -0.2, 0.8};
	const double mean = 0.5 * (-0.2) + 0.5 * 0.8;
	for (double s = -1.0; s <= 1.0; s += 0.05)
		EXPECT_LE(opinion_payoff(w, 0, s, y), opinion_payoff(w, 0, mean, y) + 1e-15);
}

TEST(CoevolutionPayoff, Examples) {
	const auto a = row_normalize(generators::complete(3));
	CoevolutionParams p;
	p.gamma = {2.0};
	p.beta = {1.0};
	p.lambda = {3.0};
	PopulationState z(3, -1);
	EXPECT_DOUBLE_EQ(coevolution_payoff(a, a, p, 0, -1, -1.0, z), 2.0);
	// (a, s) = (+1, -1) pays the consistency penalty -lambda/2 * 4.
	p.gamma = {0.0};
	p.beta = {0.0};
	EXPECT_DOUBLE_EQ(coevolution_payoff(a, a, p, 0, 1, -1.0, z), -2.0 * 3.0);
	EXPECT_THROW(coevolution_payoff(a, a, p, 0, 1, 1.5, z), DomainError);
}

TEST(CoevolutionPayoff, SingleNeighbour) {
	const auto g = Graph::from_edges(2, {{0, 1, 1.0}, {1, 0, 1.0}});
	CoevolutionParams p;
	PopulationState z(2, -1);
	z.x[1] = 1;
	z.y[1] = 1.0;
	EXPECT_DOUBLE_EQ(coevolution_payoff(g, g, p, 0, 1, 1.0, z), 1.0);
	EXPECT_DOUBLE_EQ(coevolution_payoff(g, g, p, 0, -1, -1.0, z), -2.0);
}

TEST(CoevolutionPayoff, ConventionSwitch) {
	CoevolutionParams p;
	p.beta = {2.0};
	p.lambda = {0.25};
	EXPECT_DOUBLE_EQ(p.beta_of(0), 2.0);
	p.convention = OpinionWeightConvention::beta_times_one_minus_lambda;
	EXPECT_DOUBLE_EQ(p.beta_of(0), 1.5);
}

TEST(CoevolutionParamsValidation, Rejects) {
	CoevolutionParams p;
	p.beta = {0.0};
	p.lambda = {0.0};
	EXPECT_THROW(p.validate(3), DomainError);
	p.beta = {1.0, 2.0};
	p.lambda = {1.0};
	EXPECT_THROW(p.validate(3), DomainError);
	p.beta = {-1.0};
	EXPECT_THROW(p.validate(3), DomainError);
}

TEST(BestResponseSet, ExampleNode) {
	const auto g = example_node();
	const std::array<int, 2> actions{-1, 1};
	auto payoff = [&](double alpha) {
		return [&g, alpha](int a) { return coordination_payoff(g, {alpha}, 0, a, example_x); };
	};
	EXPECT_EQ(best_response_set<int>(actions, payoff(0.6)), std::vector<int>{1});
	EXPECT_EQ(best_response_set<int>(actions, payoff(0.5)), (std::vector<int>{-1, 1}));
	EXPECT_EQ(best_response_set<int>(actions, payoff(0.2)), std::vector<int>{-1});
}

TEST(NashCharacterization, FixedPointsMatchBruteForce) {
	rng_t rng(17);
	for (int trial = 0; trial < 40; ++trial) {
		const std::size_t n = 4 + uniform_index(rng, 7);
		Graph raw = generators::erdos_renyi(n, 0.5, rng);
		bool isolated = false;
		for (node_t i = 0; i < n; ++i)
			isolated |= raw.out_degree(i) == 0;
		if (isolated)
			continue;
		const auto g = row_normalize(raw);
		const double alpha = -0.8 + 2.5 * uniform01(rng);
		const auto eq = find_nash_bruteforce(g, CoordinationParams{alpha});
		std::vector<node_t> all(n);
		std::iota(all.begin(), all.end(), node_t{0});
		std::size_t fixed = 0;
		for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
			PopulationState z(n, -1);
			for (node_t i = 0; i < n; ++i)
				z.x[i] = (mask >> i) & 1U ? 1 : -1;
			const auto next = step_best_response_coordination(g, alpha, z, all);
			const bool is_fixed = next.x == z.x;
			const bool is_nash = std::find(eq.begin(), eq.end(), z.x) != eq.end();
			EXPECT_EQ(is_fixed, is_nash);
			fixed += is_fixed;
		}
		EXPECT_EQ(fixed, eq.size());
		// Consensus profiles are always equilibria.
		EXPECT_NE(std::find(eq.begin(), eq.end(), std::vector<int>(n, -1)), eq.end());
		EXPECT_NE(std::find(eq.begin(), eq.end(), std::vector<int>(n, 1)), eq.end());
	}
}

TEST(PopulationStateTest, CommitAndZeta) {
	PopulationState z(4, -1);
	z.commit(std::vector<node_t>{1, 3});
	EXPECT_DOUBLE_EQ(z.zeta(), 0.5);
	EXPECT_TRUE(z.is_committed(1));
	EXPECT_DOUBLE_EQ(z.y[3], 1.0);
	z.y[0] = 2.0;
	EXPECT_THROW(z.validate(), DomainError);
}
