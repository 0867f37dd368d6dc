#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "cd/graph.h"

namespace cd {

/// Payoff tie tolerance used by every best-response comparison.
inline constexpr double tie_tolerance = 1e-12;

/// 2x2 payoff matrix over the strategies {-1, +1}.
struct MatrixGame {
	// m[index(a)][index(b)], index(-1) = 0, index(+1) = 1.
	std::array<std::array<double, 2>, 2> m{};

	static constexpr std::size_t index(int a) noexcept { return a > 0 ? 1 : 0; }
	double operator()(int a, int b) const noexcept { return m[index(a)][index(b)]; }

	/// diag(1, 1 + alpha).
	static MatrixGame coordination(double alpha);
};

struct CoordinationParams {
	double alpha = 0.0;
};

/// Linear public goods game. The pool is rho(zeta) = r * zeta.
struct PggParams {
	double r = 2.0;

	double pool(double zeta) const noexcept { return r * zeta; }
};

using ActionGame = std::variant<CoordinationParams, PggParams>;

enum class OpinionWeightConvention { beta, beta_times_one_minus_lambda };

/// Per-agent weights of the coevolutionary payoff. Vectors of length 1 are
/// broadcast to every agent.
struct CoevolutionParams {
	std::vector<double> gamma{1.0};
	std::vector<double> beta{1.0};
	std::vector<double> lambda{1.0};
	ActionGame inner = CoordinationParams{};
	OpinionWeightConvention convention = OpinionWeightConvention::beta;

	double gamma_of(std::size_t i) const { return gamma.size() == 1 ? gamma[0] : gamma.at(i); }
	double lambda_of(std::size_t i) const { return lambda.size() == 1 ? lambda[0] : lambda.at(i); }
	/// Coefficient of the opinion-disagreement term after applying `convention`.
	double beta_of(std::size_t i) const;

	/// Throws DomainError unless every weight is nonnegative, vectors have
	/// length 1 or n, and beta_i + lambda_i > 0.
	void validate(std::size_t n) const;
};

/// Joint action/opinion state of the population.
struct PopulationState {
	std::vector<int> x;
	std::vector<double> y;
	std::vector<std::uint8_t> committed;

	PopulationState() = default;
	/// Everyone at x = y = `action`, nobody committed.
	explicit PopulationState(std::size_t n, int action = -1)
	    : x(n, action), y(n, static_cast<double>(action)), committed(n, 0) {}

	std::size_t size() const noexcept { return x.size(); }
	bool is_committed(std::size_t i) const noexcept { return committed[i] != 0; }
	/// Pins `nodes` at x = y = +1.
	void commit(std::span<const node_t> nodes);

	/// Fraction of agents playing +1.
	double zeta() const noexcept;
	/// Throws DomainError if some |x_i| != 1, y_i outside [-1,1], or sizes differ.
	void validate() const;
};

double zeta_of(std::span<const int> x) noexcept;

/// sum_j a_ij m(a, x_j).
double network_matrix_payoff(const Graph& g, const MatrixGame& game, node_t i, int a,
                             std::span<const int> x);

double coordination_payoff(const Graph& g, const CoordinationParams& params, node_t i, int a,
                           std::span<const int> x);

/// Payoff given the number n of players and the sum of the other players'
/// actions.
double pgg_payoff(const PggParams& params, std::size_t n, long sum_others, int a);
double pgg_payoff(const PggParams& params, node_t i, int a, std::span<const int> x);

/// -1/2 sum_j w_ij (s - y_j)^2.
double opinion_payoff(const Graph& w, node_t i, double s, std::span<const double> y);

/// Payoff of the action game alone; `a_layer` is ignored for the PGG.
double action_payoff(const ActionGame& game, const Graph& a_layer, node_t i, int a,
                     std::span<const int> x);

/// gamma_i * inner(a) - 1/2 beta_i sum_j w_ij (s - y_j)^2 - 1/2 lambda_i (a - s)^2.
double coevolution_payoff(const Graph& a_layer, const Graph& w_layer, const CoevolutionParams& params,
                          node_t i, int a, double s, const PopulationState& z);

/// Indices of the maximal entries of `payoffs` (ties within `tol`).
std::vector<std::size_t> argmax_set(std::span<const double> payoffs, double tol = tie_tolerance);

/// Best-response set over a finite strategy set.
template <typename Strategy, typename Payoff>
std::vector<Strategy> best_response_set(std::span<const Strategy> candidates, Payoff&& payoff,
                                        double tol = tie_tolerance) {
	std::vector<double> values;
	values.reserve(candidates.size());
	for (const auto& s : candidates)
		values.push_back(payoff(s));
	std::vector<Strategy> result;
	for (auto k : argmax_set(values, tol))
		result.push_back(candidates[k]);
	return result;
}

/// Best-response actions of agent i in an action game, ascending.
std::vector<int> best_response_actions(const ActionGame& game, const Graph& a_layer, node_t i,
                                       std::span<const int> x);

} // namespace cd
