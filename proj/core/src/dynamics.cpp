#include "cd/dynamics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cd/errors.h"

namespace cd {

namespace {

int decide(double gap, double tol, int current, TieRule tie, rng_t* rng) {
	if (gap > tol)
		return 1;
	if (gap < -tol)
		return -1;
	switch (tie) {
	case TieRule::keep_current: return current;
	case TieRule::prefer_plus: return 1;
	case TieRule::uniform: return uniform01(*rng) < 0.5 ? -1 : 1;
	}
	return current;
}

double weighted_action_sum(const Graph& g, node_t i, std::span<const int> x) {
	double s = 0.0;
	for (const auto& a : g.out(i))
		s += a.weight * x[a.target];
	return s;
}

double coordination_threshold(double alpha) { return -alpha / (2.0 + alpha); }

/// f(+1) - f(-1) for agent i; `total` is sum_j x_j (used by the PGG).
double action_gap(const ActionGame& game, const Graph& a_layer, node_t i, std::span<const int> x, long total) {
	if (const auto* c = std::get_if<CoordinationParams>(&game))
		return coordination_payoff(a_layer, *c, i, 1, x) - coordination_payoff(a_layer, *c, i, -1, x);
	const auto& pgg = std::get<PggParams>(game);
	const long others = total - x[i];
	return pgg_payoff(pgg, x.size(), others, 1) - pgg_payoff(pgg, x.size(), others, -1);
}

long action_total(std::span<const int> x) { return std::accumulate(x.begin(), x.end(), 0L); }

} // namespace

PopulationState step_best_response_coordination(const Graph& g, double alpha, const PopulationState& z,
                                                std::span<const node_t> active) {
	PopulationState next = z;
	const double thr = coordination_threshold(alpha);
	for (node_t i : active) {
		if (z.is_committed(i))
			continue;
		next.x[i] = decide(weighted_action_sum(g, i, z.x) - thr, tie_tolerance, z.x[i], TieRule::keep_current,
		                   nullptr);
	}
	return next;
}

PopulationState step_best_response(const Graph& a_layer, const ActionGame& game, TieRule tie,
                                   const PopulationState& z, std::span<const node_t> active, rng_t& rng) {
	PopulationState next = z;
	const long total = action_total(z.x);
	for (node_t i : active) {
		if (z.is_committed(i))
			continue;
		next.x[i] = decide(action_gap(game, a_layer, i, z.x, total), tie_tolerance, z.x[i], tie, &rng);
	}
	return next;
}

double logit_plus_probability(double gap, double sigma, bool negative_exponent) {
	const double t = (negative_exponent ? -sigma : sigma) * gap;
	if (t >= 0.0)
		return 1.0 / (1.0 + std::exp(-t));
	const double e = std::exp(t);
	return e / (1.0 + e);
}

PopulationState step_logit(const Graph& a_layer, const ActionGame& game, const Logit& logit,
                           const PopulationState& z, std::span<const node_t> active, rng_t& rng) {
	PopulationState next = z;
	const long total = action_total(z.x);
	for (node_t i : active) {
		if (z.is_committed(i))
			continue;
		const double p = logit_plus_probability(action_gap(game, a_layer, i, z.x, total), logit.sigma_of(i),
		                                        logit.negative_exponent);
		next.x[i] = uniform01(rng) < p ? 1 : -1;
	}
	return next;
}

PopulationState step_trend_mixed(const ContactParams& contacts, double u_t, double alpha,
                                 const PopulationState& z, double zeta_prev, std::span<const node_t> active,
                                 rng_t& rng) {
	PopulationState next = z;
	const ContactSampler sampler = contacts.u_v == 0.0 ? ContactSampler(z.size(), contacts)
	                                                   : ContactSampler(contacts, z.x);
	const double zeta = z.zeta();
	const double thr = coordination_threshold(alpha);
	const double inv_k = 1.0 / static_cast<double>(contacts.k);
	std::vector<node_t> drawn(contacts.k);
	for (node_t i : active) {
		if (z.is_committed(i))
			continue;
		if (uniform01(rng) < u_t) {
			if (zeta > zeta_prev)
				next.x[i] = 1;
			else if (zeta < zeta_prev)
				next.x[i] = -1;
			continue;
		}
		sampler.draw(i, drawn, rng);
		double s = 0.0;
		for (node_t j : drawn)
			s += z.x[j];
		next.x[i] = decide(s * inv_k - thr, tie_tolerance, z.x[i], TieRule::keep_current, nullptr);
	}
	return next;
}

std::vector<double> linear_average_step(const Graph& w, std::span<const double> y) {
	std::vector<double> next(w.num_nodes(), 0.0);
	for (node_t i = 0; i < w.num_nodes(); ++i)
		for (const auto& a : w.out(i))
			next[i] += a.weight * y[a.target];
	return next;
}

std::size_t SimulationConfig::num_nodes() const {
	if (const auto* t = std::get_if<TemporalNetwork>(&network))
		return t->n;
	const auto& s = std::get<StaticNetwork>(network);
	return s.a_layer ? s.a_layer->num_nodes() : 0;
}

void SimulationConfig::validate() const {
	const std::size_t n = num_nodes();
	if (n == 0)
		throw ConfigError("network", "population is empty");
	const bool temporal = std::holds_alternative<TemporalNetwork>(network);
	const bool trend = std::holds_alternative<TrendMixed>(revision.protocol);
	const bool coevolution = std::holds_alternative<CoevolutionParams>(game);

	if (trend && !temporal)
		throw ConfigError("revision.protocol", "trend_mixed revision needs a temporal network");
	if (temporal && !trend)
		throw ConfigError("network.source", "temporal networks are only driven by trend_mixed revision");
	if (trend && !std::holds_alternative<CoordinationParams>(game))
		throw ConfigError("game.type", "trend_mixed revision is defined for the coordination game");
	if (coevolution) {
		const auto* br = std::get_if<BestResponse>(&revision.protocol);
		if (!br || br->tie != TieRule::keep_current)
			throw ConfigError("revision.protocol",
			                  "coevolution runs use best response with the keep_current tie rule");
		try {
			std::get<CoevolutionParams>(game).validate(n);
		} catch (const DomainError& e) {
			throw ConfigError("game", e.what());
		}
	}
	if (const auto* c = std::get_if<CoordinationParams>(&game); c && !(c->alpha > -1.0))
		throw ConfigError("game.alpha", "must exceed -1");
	if (const auto* p = std::get_if<PggParams>(&game)) {
		if (!std::isfinite(p->r) || p->r < 0.0)
			throw ConfigError("game.r", "must be finite and nonnegative");
	}
	if (temporal) {
		try {
			std::get<TemporalNetwork>(network).contacts.validate(n);
		} catch (const DomainError& e) {
			throw ConfigError("network", e.what());
		}
	} else {
		const auto& s = std::get<StaticNetwork>(network);
		if (s.w_layer && s.w_layer->num_nodes() != n)
			throw ConfigError("network.w_path", "communication layer size differs from influence layer");
	}
	if (const auto* t = std::get_if<TrendMixed>(&revision.protocol); t && !(t->u_t >= 0.0 && t->u_t <= 1.0))
		throw ConfigError("revision.u_t", "must lie in [0,1]");
	if (const auto* l = std::get_if<Logit>(&revision.protocol)) {
		if (l->sigma.size() != 1 && l->sigma.size() != n)
			throw ConfigError("revision.sigma", "must be a scalar or have one entry per agent");
		for (double s : l->sigma)
			if (!(s >= 0.0) || !std::isfinite(s))
				throw ConfigError("revision.sigma", "entries must be finite and nonnegative");
	}
	if (revision.schedule == Schedule::fixed_sequence) {
		if (revision.sequence.empty())
			throw ConfigError("revision.sequence", "fixed_sequence schedule needs a non-empty sequence");
		for (node_t v : revision.sequence)
			if (v >= n)
				throw ConfigError("revision.sequence", "node " + std::to_string(v) + " out of range");
	}

	std::vector<char> pinned(n, 0);
	for (node_t v : committed) {
		if (v >= n)
			throw ConfigError("committed", "node " + std::to_string(v) + " out of range");
		if (pinned[v])
			throw ConfigError("committed", "node " + std::to_string(v) + " listed twice");
		pinned[v] = 1;
	}
	const auto& init = initial;
	if (!(init.zeta0 >= 0.0 && init.zeta0 <= 1.0))
		throw ConfigError("initial.zeta0", "must lie in [0,1]");
	const auto wanted = static_cast<std::size_t>(std::llround(init.zeta0 * static_cast<double>(n)));
	if (!init.explicit_adopters && wanted > n - committed.size())
		throw ConfigError("initial.zeta0", "more initial adopters than non-committed agents");
	for (node_t v : init.adopters)
		if (v >= n)
			throw ConfigError("initial.adopters", "node " + std::to_string(v) + " out of range");
	if (init.opinions == OpinionInit::explicit_values) {
		if (init.y.size() != n)
			throw ConfigError("initial.y", "needs one opinion per agent");
		for (double v : init.y)
			if (!(v >= -1.0 && v <= 1.0))
				throw ConfigError("initial.y", "opinions must lie in [-1,1]");
	}
}

PopulationState initial_state(const SimulationConfig& config, rng_t& rng) {
	const std::size_t n = config.num_nodes();
	PopulationState z(n, -1);

	// One permutation of all nodes regardless of the committed set, so that
	// runs differing only in commitment share their random draws.
	std::vector<node_t> perm(n);
	std::iota(perm.begin(), perm.end(), node_t{0});
	std::shuffle(perm.begin(), perm.end(), rng);

	std::vector<char> pinned(n, 0);
	for (node_t v : config.committed)
		pinned[v] = 1;

	const auto& init = config.initial;
	if (init.explicit_adopters) {
		for (node_t v : init.adopters)
			z.x[v] = 1;
	} else {
		auto wanted = static_cast<std::size_t>(std::llround(init.zeta0 * static_cast<double>(n)));
		for (node_t v : perm) {
			if (wanted == 0)
				break;
			if (pinned[v])
				continue;
			z.x[v] = 1;
			--wanted;
		}
	}

	switch (init.opinions) {
	case OpinionInit::match_actions:
		for (node_t i = 0; i < n; ++i)
			z.y[i] = z.x[i];
		break;
	case OpinionInit::uniform:
		for (node_t i = 0; i < n; ++i)
			z.y[i] = 2.0 * uniform01(rng) - 1.0;
		break;
	case OpinionInit::explicit_values:
		z.y = init.y;
		break;
	}
	if (init.actions_from_opinions)
		for (node_t i = 0; i < n; ++i)
			z.x[i] = z.y[i] > 0.0 ? 1 : -1;

	z.commit(config.committed);
	return z;
}

namespace {

/// Resolved per-run machinery shared by the stepping loop and the absorption test.
class Engine {
public:
	explicit Engine(const SimulationConfig& config) : config_(config), n_(config.num_nodes()) {
		if (const auto* s = std::get_if<StaticNetwork>(&config.network)) {
			a_layer_ = s->a_layer;
			w_layer_ = s->w_layer ? s->w_layer : s->a_layer;
		}
		if (const auto* c = std::get_if<CoevolutionParams>(&config.game))
			rule_ = CoevolutionRule(a_layer_, w_layer_, *c);
		if (const auto* c = std::get_if<CoordinationParams>(&config.game))
			action_game_ = *c;
		else if (const auto* p = std::get_if<PggParams>(&config.game))
			action_game_ = *p;
		if (const auto* br = std::get_if<BestResponse>(&config.revision.protocol); br && a_layer_)
			threshold_form_ = std::holds_alternative<CoordinationParams>(config.game) && br->tie == TieRule::keep_current &&
			        a_layer_->row_stochastic();
	}

	bool coevolution() const { return rule_.has_value(); }

	PopulationState step(const PopulationState& z, std::span<const node_t> active, double zeta_prev,
	                     rng_t& rng) const {
		if (rule_)
			return coevolution_step(*rule_, z, active);
		return std::visit(
		    [&](const auto& protocol) -> PopulationState {
			    using P = std::decay_t<decltype(protocol)>;
			    if constexpr (std::is_same_v<P, BestResponse>) {
				    if (threshold_form_)
					    return step_best_response_coordination(*a_layer_, alpha(), z, active);
				    return step_best_response(*a_layer_, *action_game_, protocol.tie, z, active, rng);
			    } else if constexpr (std::is_same_v<P, Logit>) {
				    return step_logit(*a_layer_, *action_game_, protocol, z, active, rng);
			    } else {
				    const auto& net = std::get<TemporalNetwork>(config_.network);
				    return step_trend_mixed(net.contacts, protocol.u_t, alpha(), z, zeta_prev, active, rng);
			    }
		    },
		    config_.revision.protocol);
	}

	/// Whether `z` can never change again.
	bool absorbing(const PopulationState& z) const {
		if (std::holds_alternative<Logit>(config_.revision.protocol))
			return false;
		if (std::holds_alternative<TrendMixed>(config_.revision.protocol))
			return std::all_of(z.x.begin(), z.x.end(), [&](int v) { return v == z.x[0]; });
		if (rule_) {
			for (node_t i = 0; i < n_; ++i) {
				if (z.is_committed(i))
					continue;
				auto [x, y] = joint_best_response(*rule_, i, z);
				if (x != z.x[i] || std::abs(y - z.y[i]) >= 1e-10)
					return false;
			}
			return true;
		}
		const auto tie = std::get<BestResponse>(config_.revision.protocol).tie;
		const long total = action_total(z.x);
		const double thr = coordination_threshold(alpha());
		for (node_t i = 0; i < n_; ++i) {
			if (z.is_committed(i))
				continue;
			const double gap = threshold_form_ ? weighted_action_sum(*a_layer_, i, z.x) - thr
			                         : action_gap(*action_game_, *a_layer_, i, z.x, total);
			if (std::abs(gap) <= tie_tolerance && tie == TieRule::uniform)
				return false;
			if (decide(gap, tie_tolerance, z.x[i], tie == TieRule::uniform ? TieRule::keep_current : tie,
			           nullptr) != z.x[i])
				return false;
		}
		return true;
	}

	/// Fixed points are checked every step for synchronous runs and once per
	/// n activations otherwise; consensus-only protocols are checked every step.
	bool check_now(std::size_t t) const {
		if (config_.revision.schedule == Schedule::synchronous ||
		    std::holds_alternative<TrendMixed>(config_.revision.protocol))
			return true;
		return t % n_ == 0;
	}

private:
	double alpha() const {
		if (const auto* c = std::get_if<CoordinationParams>(&config_.game))
			return c->alpha;
		return 0.0;
	}

	const SimulationConfig& config_;
	std::size_t n_;
	std::shared_ptr<const Graph> a_layer_;
	std::shared_ptr<const Graph> w_layer_;
	std::optional<CoevolutionRule> rule_;
	std::optional<ActionGame> action_game_;
	bool threshold_form_ = false;
};

} // namespace

Trajectory simulate(const SimulationConfig& config, std::uint64_t seed) {
	config.validate();
	const std::size_t n = config.num_nodes();
	rng_t rng(seed);
	Trajectory traj;
	traj.seed = seed;

	PopulationState z = initial_state(config, rng);
	const Engine engine(config);

	auto record = [&](std::size_t t) {
		traj.zeta.push_back(z.zeta());
		if (config.snapshot_stride > 0 && t % config.snapshot_stride == 0) {
			traj.snapshot_times.push_back(t);
			traj.x_snapshots.push_back(z.x);
			traj.y_snapshots.push_back(z.y);
		}
	};
	record(0);

	double zeta_prev = z.zeta();
	if (const auto* tm = std::get_if<TrendMixed>(&config.revision.protocol);
	    tm && tm->initial_trend == InitialTrend::rising)
		zeta_prev = 0.0;

	if (engine.absorbing(z)) {
		traj.absorbed_at = 0;
		traj.final_state = std::move(z);
		return traj;
	}

	std::vector<node_t> everyone(n);
	std::iota(everyone.begin(), everyone.end(), node_t{0});
	node_t single = 0;

	for (std::size_t t = 0; t < config.horizon; ++t) {
		std::span<const node_t> active;
		switch (config.revision.schedule) {
		case Schedule::synchronous:
			active = everyone;
			break;
		case Schedule::async_uniform:
			single = uniform_index(rng, n);
			active = {&single, 1};
			break;
		case Schedule::fixed_sequence:
			single = config.revision.sequence[t % config.revision.sequence.size()];
			active = {&single, 1};
			break;
		}
		const double zeta_now = z.zeta();
		PopulationState next = engine.step(z, active, zeta_prev, rng);
		zeta_prev = zeta_now;
		z = std::move(next);
		record(t + 1);
		if (engine.check_now(t + 1) && engine.absorbing(z)) {
			traj.absorbed_at = t + 1;
			break;
		}
	}
	if (config.snapshot_stride > 0 && traj.snapshot_times.back() + 1 != traj.zeta.size()) {
		traj.snapshot_times.push_back(traj.zeta.size() - 1);
		traj.x_snapshots.push_back(z.x);
		traj.y_snapshots.push_back(z.y);
	}
	traj.final_state = std::move(z);
	return traj;
}

std::optional<TieRule> parse_tie_rule(std::string_view s) {
	if (s == "keep_current")
		return TieRule::keep_current;
	if (s == "prefer_plus")
		return TieRule::prefer_plus;
	if (s == "uniform")
		return TieRule::uniform;
	return std::nullopt;
}

std::optional<Schedule> parse_schedule(std::string_view s) {
	if (s == "synchronous")
		return Schedule::synchronous;
	if (s == "async_uniform")
		return Schedule::async_uniform;
	if (s == "fixed_sequence")
		return Schedule::fixed_sequence;
	return std::nullopt;
}

std::string_view to_string(TieRule t) {
	switch (t) {
	case TieRule::keep_current: return "keep_current";
	case TieRule::prefer_plus: return "prefer_plus";
	case TieRule::uniform: return "uniform";
	}
	return "?";
}

std::string_view to_string(Schedule s) {
	switch (s) {
	case Schedule::synchronous: return "synchronous";
	case Schedule::async_uniform: return "async_uniform";
	case Schedule::fixed_sequence: return "fixed_sequence";
	}
	return "?";
}

} // namespace cd
