#include "cd/coevolution.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "cd/errors.h"

namespace cd {

CoevolutionRule::CoevolutionRule(std::shared_ptr<const Graph> a, std::shared_ptr<const Graph> w,
                                 CoevolutionParams p)
    : a_layer(std::move(a)), w_layer(w ? std::move(w) : a_layer), params(std::move(p)) {}

void CoevolutionRule::validate() const {
	if (!a_layer || !w_layer)
		throw DomainError("coevolution rule needs both network layers");
	if (a_layer->num_nodes() != w_layer->num_nodes())
		throw DomainError("influence and communication layers differ in size");
	params.validate(a_layer->num_nodes());
}

namespace {

double opinion_pull(const CoevolutionRule& rule, node_t i, const PopulationState& z) {
	double s = 0.0;
	for (const auto& arc : rule.w_layer->out(i))
		s += arc.weight * z.y[arc.target];
	return s;
}

double inner_gap(const CoevolutionRule& rule, node_t i, const PopulationState& z) {
	if (const auto* pgg = std::get_if<PggParams>(&rule.params.inner))
		return pgg->r / static_cast<double>(z.size()) - 1.0;
	const double alpha = std::get<CoordinationParams>(rule.params.inner).alpha;
	double ax = 0.0, mass = 0.0;
	for (const auto& arc : rule.a_layer->out(i)) {
		ax += arc.weight * z.x[arc.target];
		mass += arc.weight;
	}
	// (1+alpha) * mass_plus - mass_minus, with mass_plus = (mass + ax)/2.
	return ((2.0 + alpha) * ax + alpha * mass) / 2.0;
}

} // namespace

double discriminant(const CoevolutionRule& rule, node_t i, const PopulationState& z) {
	const double beta = rule.params.beta_of(i);
	const double lambda = rule.params.lambda_of(i);
	if (!(beta + lambda > 0.0))
		throw DomainError("beta + lambda must be positive for agent " + std::to_string(i));
	return rule.params.gamma_of(i) * inner_gap(rule, i, z) +
	       2.0 * beta * lambda / (beta + lambda) * opinion_pull(rule, i, z);
}

std::pair<int, double> joint_best_response(const CoevolutionRule& rule, node_t i, const PopulationState& z) {
	const double delta = discriminant(rule, i, z);
	const int x = delta > tie_tolerance ? 1 : (delta < -tie_tolerance ? -1 : z.x[i]);
	const double beta = rule.params.beta_of(i);
	const double lambda = rule.params.lambda_of(i);
	const double y = (beta * opinion_pull(rule, i, z) + lambda * x) / (beta + lambda);
	return {x, std::clamp(y, -1.0, 1.0)};
}

PopulationState coevolution_step(const CoevolutionRule& rule, const PopulationState& z,
                                 std::span<const node_t> active) {
	PopulationState next = z;
	for (node_t i : active) {
		if (z.is_committed(i))
			continue;
		auto [x, y] = joint_best_response(rule, i, z);
		next.x[i] = x;
		next.y[i] = y;
	}
	return next;
}

std::optional<bool> joint_best_response_check(const CoevolutionRule& rule, node_t i,
                                              const PopulationState& z, double tol) {
	if (z.is_committed(i))
		return std::nullopt;
	const auto [x, y] = joint_best_response(rule, i, z);
	const double beta = rule.params.beta_of(i);
	const double lambda = rule.params.lambda_of(i);
	const double pull = opinion_pull(rule, i, z);
	auto payoff = [&](int a, double s) {
		return coevolution_payoff(*rule.a_layer, *rule.w_layer, rule.params, i, a, s, z);
	};
	const double best_plus = payoff(1, (beta * pull + lambda) / (beta + lambda));
	const double best_minus = payoff(-1, (beta * pull - lambda) / (beta + lambda));
	const double chosen = payoff(x, y);
	return chosen >= std::max(best_plus, best_minus) - tol;
}

bool all_cooperation_equilibrium_check(const CoevolutionRule& rule) {
	const auto* pgg = std::get_if<PggParams>(&rule.params.inner);
	if (!pgg)
		throw DomainError("all-cooperation condition applies to the public goods inner game");
	const std::size_t n = rule.size();
	const double shortfall = 1.0 - pgg->r / static_cast<double>(n);
	for (std::size_t i = 0; i < n; ++i) {
		const double b = rule.params.beta_of(i);
		const double l = rule.params.lambda_of(i);
		if (!(b * l / (b + l) > rule.params.gamma_of(i) * shortfall))
			return false;
	}
	return true;
}

CollectiveChangeResult reach_collective_change(const CoevolutionRule& rule, std::span<const node_t> committed,
                                               std::size_t max_rounds) {
	rule.validate();
	const std::size_t n = rule.size();
	PopulationState z(n, -1);
	z.commit(committed);

	std::vector<node_t> everyone(n);
	for (node_t i = 0; i < n; ++i)
		everyone[i] = i;

	CollectiveChangeResult result;
	auto all_plus = [&] { return std::all_of(z.x.begin(), z.x.end(), [](int v) { return v == 1; }); };
	for (std::size_t round = 0; round < max_rounds; ++round) {
		if (all_plus()) {
			result.changed = true;
			break;
		}
		PopulationState next = coevolution_step(rule, z, everyone);
		double max_dy = 0.0;
		bool flipped = false;
		for (node_t i = 0; i < n; ++i) {
			const double dy = next.y[i] - z.y[i];
			if (next.x[i] < z.x[i] || dy < -1e-12) {
				std::ostringstream msg;
				msg << "non-monotone sweep at round " << round << ", agent " << i << ": x " << z.x[i]
				    << " -> " << next.x[i] << ", y " << z.y[i] << " -> " << next.y[i];
				throw InvariantError(msg.str());
			}
			flipped |= next.x[i] != z.x[i];
			max_dy = std::max(max_dy, std::abs(dy));
		}
		if (!flipped && max_dy < 1e-10)
			break;
		z = std::move(next);
		result.rounds = round + 1;
		if (result.rounds == max_rounds)
			throw IterationError("collective-change sweep did not settle in " + std::to_string(max_rounds) +
			                     " rounds");
	}
	result.changed = all_plus();
	result.final_state = std::move(z);
	return result;
}

std::size_t critical_count(const CoevolutionRule& rule) {
	const std::size_t n = rule.size();
	std::vector<node_t> nodes(n);
	for (node_t i = 0; i < n; ++i)
		nodes[i] = i;
	auto works = [&](std::size_t c) {
		return reach_collective_change(rule, std::span<const node_t>(nodes.data(), c)).changed;
	};
	std::size_t lo = 0, hi = n; // works(hi) holds trivially
	while (hi - lo > 1) {
		const std::size_t mid = lo + (hi - lo) / 2;
		(works(mid) ? hi : lo) = mid;
	}
	return works(lo) ? lo : hi;
}

double critical_mass(const CoevolutionRule& rule) {
	return static_cast<double>(critical_count(rule)) / static_cast<double>(rule.size());
}

ControlSetResult min_control_set_greedy(const CoevolutionRule& rule, std::span<const node_t> ranking) {
	if (ranking.empty())
		throw DomainError("empty candidate ranking");
	const std::size_t n = rule.size();
	const std::size_t max_len = std::min(ranking.size(), n > 1 ? n - 1 : n);

	auto run = [&](std::size_t len) { return reach_collective_change(rule, ranking.first(len)); };
	auto fill = [&](std::size_t len, const CollectiveChangeResult& r) {
		ControlSetResult out;
		out.committed.assign(ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(len));
		out.changed = r.changed;
		out.rounds = r.rounds;
		out.final_zeta = r.final_state.zeta();
		return out;
	};

	auto longest = run(max_len);
	if (!longest.changed)
		return fill(max_len, longest);
	std::size_t lo = 0, hi = max_len;
	while (hi - lo > 1) {
		const std::size_t mid = lo + (hi - lo) / 2;
		(run(mid).changed ? hi : lo) = mid;
	}
	return fill(hi, run(hi));
}

} // namespace cd
