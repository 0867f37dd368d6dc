#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "cd/coevolution.h"
#include "cd/games.h"
#include "cd/graph.h"
#include "cd/rng.h"
#include "cd/tempnet.h"

namespace cd {

enum class TieRule { keep_current, prefer_plus, uniform };
enum class Schedule { synchronous, async_uniform, fixed_sequence };
/// How the trend rule sees the step before t = 0: `flat` sets
/// zeta(-1) = zeta(0), `rising` sets zeta(-1) = 0 (the innovation is new).
enum class InitialTrend { flat, rising };

struct BestResponse {
	TieRule tie = TieRule::keep_current;
};

/// Logit (log-linear) choice with per-agent rationality sigma_i >= 0.
struct Logit {
	std::vector<double> sigma{1.0};
	/// Use exp(-sigma f) instead of exp(+sigma f).
	bool negative_exponent = false;

	double sigma_of(std::size_t i) const { return sigma.size() == 1 ? sigma[0] : sigma.at(i); }
};

/// With probability u_t follow the population trend, otherwise best-respond
/// (coordination game) to k freshly drawn contacts.
struct TrendMixed {
	double u_t = 0.0;
	InitialTrend initial_trend = InitialTrend::flat;
};

using Protocol = std::variant<BestResponse, Logit, TrendMixed>;

struct RevisionSpec {
	Protocol protocol = BestResponse{};
	Schedule schedule = Schedule::synchronous;
	/// Activation order for Schedule::fixed_sequence, cycled.
	std::vector<node_t> sequence;
};

/// Threshold-form best response of the coordination game on a row-stochastic
/// graph: +1 above the threshold -alpha/(2+alpha), -1 below, keep on a tie.
PopulationState step_best_response_coordination(const Graph& g, double alpha, const PopulationState& z,
                                                std::span<const node_t> active);

/// Generic myopic best response for an action game.
PopulationState step_best_response(const Graph& a_layer, const ActionGame& game, TieRule tie,
                                   const PopulationState& z, std::span<const node_t> active, rng_t& rng);

/// P[+1] for a payoff gap f(+1) - f(-1) under logit choice.
double logit_plus_probability(double gap, double sigma, bool negative_exponent = false);

PopulationState step_logit(const Graph& a_layer, const ActionGame& game, const Logit& logit,
                           const PopulationState& z, std::span<const node_t> active, rng_t& rng);

/// Trend-mixed revision on activity-driven contacts. `zeta_prev` is zeta(t-1).
PopulationState step_trend_mixed(const ContactParams& contacts, double u_t, double alpha,
                                 const PopulationState& z, double zeta_prev, std::span<const node_t> active,
                                 rng_t& rng);

/// One step of linear averaging y <- W y.
std::vector<double> linear_average_step(const Graph& w, std::span<const double> y);

struct StaticNetwork {
	std::shared_ptr<const Graph> a_layer;
	/// Communication layer; defaults to a_layer when null.
	std::shared_ptr<const Graph> w_layer;
};

struct TemporalNetwork {
	std::size_t n = 0;
	ContactParams contacts;
};

using NetworkSource = std::variant<StaticNetwork, TemporalNetwork>;

using GameSpec = std::variant<CoordinationParams, PggParams, CoevolutionParams>;

enum class OpinionInit { match_actions, uniform, explicit_values };

struct InitialCondition {
	/// Fraction of the population (rounded to a count) that starts at +1,
	/// drawn among non-committed agents.
	double zeta0 = 0.0;
	/// Draw adopters at random (a single seeded permutation, so larger zeta0
	/// extends the same adopter set) or take them from `adopters`.
	bool explicit_adopters = false;
	std::vector<node_t> adopters;
	OpinionInit opinions = OpinionInit::match_actions;
	std::vector<double> y;
	/// Set x_i = sign(y_i) (ties to -1) after opinions are drawn.
	bool actions_from_opinions = false;
};

struct SimulationConfig {
	GameSpec game = CoordinationParams{};
	NetworkSource network = StaticNetwork{};
	RevisionSpec revision;
	InitialCondition initial;
	std::vector<node_t> committed;
	std::size_t horizon = 100;
	/// Record full x/y every `snapshot_stride` steps and at the last step;
	/// 0 disables snapshots.
	std::size_t snapshot_stride = 0;

	std::size_t num_nodes() const;
	/// Throws ConfigError describing the first inconsistency.
	void validate() const;
};

struct Trajectory {
	std::vector<double> zeta;
	std::vector<std::size_t> snapshot_times;
	std::vector<std::vector<int>> x_snapshots;
	std::vector<std::vector<double>> y_snapshots;
	/// Step at which an absorbing state was first observed.
	std::optional<std::size_t> absorbed_at;
	std::uint64_t seed = 0;
	PopulationState final_state;
};

/// Builds the initial population state using the first draws of `rng`.
PopulationState initial_state(const SimulationConfig& config, rng_t& rng);

/// Runs the configured dynamics for at most `horizon` steps. Stops early at
/// an absorbing state: a fixed point of deterministic dynamics, or an exact
/// consensus for trend-mixed revision. Logit runs always reach the horizon.
Trajectory simulate(const SimulationConfig& config, std::uint64_t seed);

std::optional<TieRule> parse_tie_rule(std::string_view s);
std::optional<Schedule> parse_schedule(std::string_view s);
std::string_view to_string(TieRule t);
std::string_view to_string(Schedule s);

} // namespace cd
