#include "cd/games.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cd/errors.h"

namespace cd {

MatrixGame MatrixGame::coordination(double alpha) {
	if (!(alpha > -1.0))
		throw DomainError("relative advantage alpha must exceed -1");
	MatrixGame g;
	g.m = {{{1.0, 0.0}, {0.0, 1.0 + alpha}}};
	return g;
}

double CoevolutionParams::beta_of(std::size_t i) const {
	const double b = beta.size() == 1 ? beta[0] : beta.at(i);
	if (convention == OpinionWeightConvention::beta_times_one_minus_lambda)
		return b * (1.0 - lambda_of(i));
	return b;
}

void CoevolutionParams::validate(std::size_t n) const {
	auto check = [n](const std::vector<double>& v, const char* name) {
		if (v.size() != 1 && v.size() != n)
			throw DomainError(std::string(name) + " must have length 1 or " + std::to_string(n));
		for (double e : v)
			if (!(e >= 0.0) || !std::isfinite(e))
				throw DomainError(std::string(name) + " entries must be finite and nonnegative");
	};
	check(gamma, "gamma");
	check(beta, "beta");
	check(lambda, "lambda");
	for (std::size_t i = 0; i < n; ++i) {
		const double b = beta_of(i);
		if (b < 0.0)
			throw DomainError("effective opinion weight of agent " + std::to_string(i) +
			                  " is negative (lambda > 1 under beta*(1-lambda) convention)");
		if (!(b + lambda_of(i) > 0.0))
			throw DomainError("beta + lambda must be positive for agent " + std::to_string(i));
	}
	if (const auto* c = std::get_if<CoordinationParams>(&inner); c && !(c->alpha > -1.0))
		throw DomainError("relative advantage alpha must exceed -1");
}

void PopulationState::commit(std::span<const node_t> nodes) {
	for (node_t v : nodes) {
		if (v >= size())
			throw DomainError("committed node " + std::to_string(v) + " out of range");
		committed[v] = 1;
		x[v] = 1;
		y[v] = 1.0;
	}
}

double zeta_of(std::span<const int> x) noexcept {
	if (x.empty())
		return 0.0;
	const auto adopters = std::count(x.begin(), x.end(), 1);
	return static_cast<double>(adopters) / static_cast<double>(x.size());
}

double PopulationState::zeta() const noexcept { return zeta_of(x); }

void PopulationState::validate() const {
	if (y.size() != x.size() || committed.size() != x.size())
		throw DomainError("population state vectors differ in length");
	for (std::size_t i = 0; i < x.size(); ++i) {
		if (x[i] != 1 && x[i] != -1)
			throw DomainError("action of agent " + std::to_string(i) + " is not +-1");
		if (!(y[i] >= -1.0 && y[i] <= 1.0))
			throw DomainError("opinion of agent " + std::to_string(i) + " outside [-1,1]");
	}
}

namespace {
void check_node(const Graph& g, node_t i) {
	if (i >= g.num_nodes())
		throw DomainError("node " + std::to_string(i) + " out of range");
}
} // namespace

double network_matrix_payoff(const Graph& g, const MatrixGame& game, node_t i, int a,
                             std::span<const int> x) {
	check_node(g, i);
	double f = 0.0;
	for (const auto& arc : g.out(i))
		f += arc.weight * game(a, x[arc.target]);
	return f;
}

double coordination_payoff(const Graph& g, const CoordinationParams& params, node_t i, int a,
                           std::span<const int> x) {
	check_node(g, i);
	// Only same-strategy neighbours pay: 1 + alpha for +1, 1 for -1.
	double f = 0.0;
	for (const auto& arc : g.out(i))
		if (x[arc.target] == a)
			f += arc.weight;
	return a > 0 ? (1.0 + params.alpha) * f : f;
}

double pgg_payoff(const PggParams& params, std::size_t n, long sum_others, int a) {
	if (n == 0)
		throw DomainError("public goods game needs at least one player");
	// Cooperators including i: (n + sum_others + a) / 2, an integer.
	const long cooperators = (static_cast<long>(n) + sum_others + a) / 2;
	const double zeta = static_cast<double>(cooperators) / static_cast<double>(n);
	return params.pool(zeta) - (a > 0 ? 1.0 : 0.0);
}

double pgg_payoff(const PggParams& params, node_t i, int a, std::span<const int> x) {
	if (x.empty())
		throw DomainError("public goods game needs at least one player");
	if (i >= x.size())
		throw DomainError("node " + std::to_string(i) + " out of range");
	const long total = std::accumulate(x.begin(), x.end(), 0L);
	return pgg_payoff(params, x.size(), total - x[i], a);
}

double opinion_payoff(const Graph& w, node_t i, double s, std::span<const double> y) {
	check_node(w, i);
	double f = 0.0;
	for (const auto& arc : w.out(i)) {
		const double d = s - y[arc.target];
		f += arc.weight * d * d;
	}
	return -0.5 * f;
}

double action_payoff(const ActionGame& game, const Graph& a_layer, node_t i, int a,
                     std::span<const int> x) {
	if (const auto* c = std::get_if<CoordinationParams>(&game))
		return coordination_payoff(a_layer, *c, i, a, x);
	return pgg_payoff(std::get<PggParams>(game), i, a, x);
}

double coevolution_payoff(const Graph& a_layer, const Graph& w_layer, const CoevolutionParams& params,
                          node_t i, int a, double s, const PopulationState& z) {
	if (!(s >= -1.0 && s <= 1.0))
		throw DomainError("opinion candidate outside [-1,1]");
	if (a != 1 && a != -1)
		throw DomainError("action must be +1 or -1");
	const double inner = action_payoff(params.inner, a_layer, i, a, z.x);
	const double gap = static_cast<double>(a) - s;
	return params.gamma_of(i) * inner + params.beta_of(i) * opinion_payoff(w_layer, i, s, z.y) -
	       0.5 * params.lambda_of(i) * gap * gap;
}

std::vector<std::size_t> argmax_set(std::span<const double> payoffs, double tol) {
	std::vector<std::size_t> result;
	if (payoffs.empty())
		return result;
	const double best = *std::max_element(payoffs.begin(), payoffs.end());
	for (std::size_t k = 0; k < payoffs.size(); ++k)
		if (payoffs[k] >= best - tol)
			result.push_back(k);
	return result;
}

std::vector<int> best_response_actions(const ActionGame& game, const Graph& a_layer, node_t i,
                                       std::span<const int> x) {
	static constexpr std::array<int, 2> actions{-1, 1};
	return best_response_set<int>(actions, [&](int a) { return action_payoff(game, a_layer, i, a, x); });
}

} // namespace cd
