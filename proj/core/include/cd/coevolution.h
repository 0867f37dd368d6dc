#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cd/games.h"
#include "cd/graph.h"

namespace cd {

/// Coevolutionary action/opinion update on an influence layer A (actions)
/// and a communication layer W (opinions).
struct CoevolutionRule {
	std::shared_ptr<const Graph> a_layer;
	std::shared_ptr<const Graph> w_layer;
	CoevolutionParams params;

	CoevolutionRule() = default;
	/// Uses `a` for both layers when `w` is null.
	CoevolutionRule(std::shared_ptr<const Graph> a, std::shared_ptr<const Graph> w, CoevolutionParams p);

	std::size_t size() const noexcept { return a_layer ? a_layer->num_nodes() : 0; }
	void validate() const;
};

/// Switching discriminant delta_i: positive favours +1, negative -1.
///
/// gamma_i * (inner(+1) - inner(-1)) + 2 beta_i lambda_i / (beta_i + lambda_i) * sum_j w_ij y_j.
/// For the coordination game with alpha = 0 and stochastic A the first term
/// is gamma_i sum_j a_ij x_j; for the linear PGG it is gamma_i (r/n - 1).
double discriminant(const CoevolutionRule& rule, node_t i, const PopulationState& z);

/// Closed-form joint best response (action, opinion) of agent i; ties on a
/// zero discriminant keep the current action.
std::pair<int, double> joint_best_response(const CoevolutionRule& rule, node_t i, const PopulationState& z);

/// Synchronous update of the `active` non-committed agents (reads z, writes a copy).
PopulationState coevolution_step(const CoevolutionRule& rule, const PopulationState& z,
                                 std::span<const node_t> active);

/// Whether the closed-form update of agent i maximizes the coevolutionary
/// payoff over {-1,+1} x [-1,1]. nullopt for committed agents.
std::optional<bool> joint_best_response_check(const CoevolutionRule& rule, node_t i,
                                              const PopulationState& z, double tol = 1e-10);

/// beta_i lambda_i / (beta_i + lambda_i) > gamma_i (1 - r/n) for every agent.
/// Only meaningful for the public goods inner game; throws DomainError otherwise.
bool all_cooperation_equilibrium_check(const CoevolutionRule& rule);

struct CollectiveChangeResult {
	bool changed = false;
	std::size_t rounds = 0;
	PopulationState final_state;
};

/// Runs synchronous sweeps from x = y = -1 with `committed` pinned at +1
/// until the state stops moving (max |dy| < 1e-10, no action flip) or every
/// action is +1. Every sweep must be entrywise non-decreasing; a decrease
/// beyond 1e-12 throws InvariantError.
CollectiveChangeResult reach_collective_change(const CoevolutionRule& rule, std::span<const node_t> committed,
                                               std::size_t max_rounds = 1000000);

/// Smallest number of committed nodes, placed on nodes 0..c-1, that yields
/// collective change. On a complete graph placement is irrelevant.
std::size_t critical_count(const CoevolutionRule& rule);
double critical_mass(const CoevolutionRule& rule);

struct ControlSetResult {
	std::vector<node_t> committed;
	bool changed = false;
	std::size_t rounds = 0;
	double final_zeta = 0.0;
};

/// Smallest prefix of `ranking` (at most n - 1 nodes) whose commitment leads
/// to collective change. Prefixes are nested and the dynamics monotone, so
/// the first successful prefix is found by bisection. On failure the result
/// holds the longest prefix tried with changed = false.
ControlSetResult min_control_set_greedy(const CoevolutionRule& rule, std::span<const node_t> ranking);

} // namespace cd
