#include "cdcli/config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "cd/errors.h"

namespace cdcli {

using cd::ConfigError;
using cd::node_t;

std::string_view to_string(Command c) {
	switch (c) {
	case Command::simulate: return "simulate";
	case Command::ensemble: return "ensemble";
	case Command::thresholds: return "thresholds";
	case Command::nash: return "nash";
	case Command::controlset: return "controlset";
	case Command::graph_info: return "graph-info";
	}
	return "?";
}

namespace {

const json empty_object = json::object();

/// Cursor over one JSON object. Reads fields, writes them (or their
/// defaults) into the resolved tree and rejects keys nobody asked for.
class Section {
public:
	Section(const json& in, json& out, std::string path) : in_(in), out_(out), path_(std::move(path)) {
		if (!in_.is_object())
			throw ConfigError(path_, "expected an object");
		if (!out_.is_object())
			out_ = json::object();
	}

	std::string at(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

	bool has(const std::string& key) const { return in_.contains(key); }

	const json* raw(const std::string& key) {
		seen_.insert(key);
		auto it = in_.find(key);
		return it == in_.end() ? nullptr : &*it;
	}

	double number(const std::string& key, std::optional<double> def = std::nullopt) {
		const json* v = raw(key);
		double d;
		if (!v) {
			if (!def)
				throw ConfigError(at(key), "required field missing");
			d = *def;
		} else {
			if (!v->is_number())
				throw ConfigError(at(key), "expected a number");
			d = v->get<double>();
			if (!std::isfinite(d))
				throw ConfigError(at(key), "expected a finite number");
		}
		out_[key] = d;
		return d;
	}

	long long integer(const std::string& key, std::optional<long long> def = std::nullopt) {
		const json* v = raw(key);
		long long i;
		if (!v) {
			if (!def)
				throw ConfigError(at(key), "required field missing");
			i = *def;
		} else {
			i = as_integer(*v, at(key));
		}
		out_[key] = i;
		return i;
	}

	std::size_t count(const std::string& key, std::optional<std::size_t> def = std::nullopt) {
		const long long i = integer(key, def ? std::optional<long long>(static_cast<long long>(*def)) : std::nullopt);
		if (i < 0)
			throw ConfigError(at(key), "must be nonnegative");
		return static_cast<std::size_t>(i);
	}

	bool boolean(const std::string& key, bool def) {
		const json* v = raw(key);
		bool b = def;
		if (v) {
			if (!v->is_boolean())
				throw ConfigError(at(key), "expected true or false");
			b = v->get<bool>();
		}
		out_[key] = b;
		return b;
	}

	std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) {
		const json* v = raw(key);
		std::string s;
		if (!v) {
			if (!def)
				throw ConfigError(at(key), "required field missing");
			s = *def;
		} else {
			if (!v->is_string())
				throw ConfigError(at(key), "expected a string");
			s = v->get<std::string>();
		}
		out_[key] = s;
		return s;
	}

	template <typename E, typename Parse>
	E choice(const std::string& key, std::optional<std::string> def, Parse parse, std::string_view allowed) {
		const std::string s = string(key, std::move(def));
		const std::optional<E> e = parse(s);
		if (!e)
			throw ConfigError(at(key), "unknown value '" + s + "', expected one of " + std::string(allowed));
		return *e;
	}

	/// A number or an array of numbers.
	std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def = std::nullopt) {
		const json* v = raw(key);
		std::vector<double> out;
		if (!v) {
			if (!def)
				throw ConfigError(at(key), "required field missing");
			out = *def;
		} else if (v->is_number()) {
			out = {v->get<double>()};
		} else if (v->is_array()) {
			for (std::size_t j = 0; j < v->size(); ++j) {
				if (!(*v)[j].is_number())
					throw ConfigError(at(key) + "[" + std::to_string(j) + "]", "expected a number");
				out.push_back((*v)[j].get<double>());
			}
		} else {
			throw ConfigError(at(key), "expected a number or an array of numbers");
		}
		for (double d : out)
			if (!std::isfinite(d))
				throw ConfigError(at(key), "expected finite numbers");
		out_[key] = out.size() == 1 && (!v || v->is_number()) ? json(out[0]) : json(out);
		return out;
	}

	/// Number, array, or {"from", "to", "step"}; always resolved to an array.
	std::vector<double> range(const std::string& key, std::vector<double> def) {
		const json* v = raw(key);
		std::vector<double> out;
		if (!v) {
			out = std::move(def);
		} else if (v->is_object()) {
			json scratch;
			Section r(*v, scratch, at(key));
			const double from = r.number("from");
			const double to = r.number("to");
			const double step = r.number("step");
			r.finish();
			if (!(step > 0.0))
				throw ConfigError(at(key) + ".step", "must be positive");
			if (to < from)
				throw ConfigError(at(key), "empty range");
			const auto m = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
			for (std::size_t j = 0; j <= m; ++j)
				out.push_back(from + static_cast<double>(j) * step);
		} else {
			out_.erase(key);
			seen_.erase(key);
			out = numbers(key);
		}
		if (out.empty())
			throw ConfigError(at(key), "empty range");
		out_[key] = out;
		return out;
	}

	/// Node references: integers, or labels when `labels` is nonempty.
	std::vector<node_t> nodes(const std::string& key, std::size_t n, const std::vector<std::string>& labels,
	                          bool required = false) {
		const json* v = raw(key);
		std::vector<node_t> out;
		if (!v) {
			if (required)
				throw ConfigError(at(key), "required field missing");
			out_[key] = json::array();
			return out;
		}
		if (!v->is_array())
			throw ConfigError(at(key), "expected an array of nodes");
		std::unordered_map<std::string, node_t> by_label;
		for (std::size_t i = 0; i < labels.size(); ++i)
			by_label.emplace(labels[i], i);
		json echoed = json::array();
		for (std::size_t j = 0; j < v->size(); ++j) {
			const json& e = (*v)[j];
			const std::string where = at(key) + "[" + std::to_string(j) + "]";
			node_t node;
			if (e.is_string() && !labels.empty()) {
				auto it = by_label.find(e.get<std::string>());
				if (it == by_label.end())
					throw ConfigError(where, "unknown node label '" + e.get<std::string>() + "'");
				node = it->second;
			} else {
				const long long i = as_integer(e, where);
				if (i < 0 || static_cast<std::size_t>(i) >= n)
					throw ConfigError(where, "node index out of range [0, " + std::to_string(n) + ")");
				node = static_cast<node_t>(i);
			}
			out.push_back(node);
			echoed.push_back(e);
		}
		out_[key] = echoed;
		return out;
	}

	Section child(const std::string& key) {
		const json* v = raw(key);
		return Section(v ? *v : empty_object, out_[key], at(key));
	}

	/// Overwrites the resolved value of an already-read key.
	void set(const std::string& key, json value) { out_[key] = std::move(value); }

	void finish() const {
		for (const auto& [key, value] : in_.items())
			if (!seen_.count(key))
				throw ConfigError(at(key), "unknown key");
	}

private:
	static long long as_integer(const json& v, const std::string& where) {
		if (v.is_number_integer())
			return v.get<long long>();
		if (v.is_number_float()) {
			const double d = v.get<double>();
			if (std::floor(d) == d && std::abs(d) < 9e15)
				return static_cast<long long>(d);
		}
		throw ConfigError(where, "expected an integer");
	}

	const json& in_;
	json& out_;
	std::string path_;
	std::set<std::string> seen_;
};

const std::set<std::string> known_sections = {"game",    "network", "revision",   "initial", "committed",
                                              "horizon", "snapshot_stride", "criterion", "runs",
                                              "seed",    "output",  "thresholds", "controlset"};

/// Master seed, resolved on first use: command line, then config, then a
/// fresh random one that is logged and recorded.
class SeedSource {
public:
	SeedSource(const json& doc, json& resolved, const Overrides& o) : doc_(doc), resolved_(resolved), o_(o) {}

	std::uint64_t get() {
		if (seed_)
			return *seed_;
		if (o_.seed) {
			seed_ = *o_.seed;
		} else if (doc_.contains("seed")) {
			const json& v = doc_["seed"];
			if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
				throw ConfigError("seed", "expected a nonnegative integer");
			seed_ = v.get<std::uint64_t>();
		} else {
			std::random_device rd;
			seed_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
			spdlog::info("no seed given, using {}", *seed_);
		}
		resolved_["seed"] = *seed_;
		return *seed_;
	}

	bool used() const { return seed_.has_value(); }

private:
	const json& doc_;
	json& resolved_;
	const Overrides& o_;
	std::optional<std::uint64_t> seed_;
};

std::optional<std::string> pick(std::string_view s, std::initializer_list<std::string_view> options) {
	for (auto o : options)
		if (s == o)
			return std::string(s);
	return std::nullopt;
}

cd::ActionGame parse_action_game(Section& s, const std::string& type) {
	if (type == "coordination") {
		const double alpha = s.number("alpha", 0.0);
		if (!(alpha > -1.0))
			throw ConfigError(s.at("alpha"), "must exceed -1");
		return cd::CoordinationParams{alpha};
	}
	const double r = s.number("r", 2.0);
	if (!(r > 0.0))
		throw ConfigError(s.at("r"), "must be positive");
	return cd::PggParams{r};
}

cd::GameSpec parse_game(Section s) {
	const std::string type = s.choice<std::string>(
	    "type", std::nullopt, [](std::string_view v) { return pick(v, {"coordination", "pgg", "coevolution"}); },
	    "coordination, pgg, coevolution");
	cd::GameSpec game;
	if (type != "coevolution") {
		const auto g = parse_action_game(s, type);
		if (const auto* c = std::get_if<cd::CoordinationParams>(&g))
			game = *c;
		else
			game = std::get<cd::PggParams>(g);
	} else {
		cd::CoevolutionParams p;
		Section inner = s.child("inner");
		const std::string inner_type = inner.choice<std::string>(
		    "type", "coordination", [](std::string_view v) { return pick(v, {"coordination", "pgg"}); },
		    "coordination, pgg");
		p.inner = parse_action_game(inner, inner_type);
		inner.finish();
		p.gamma = s.numbers("gamma", std::vector<double>{1.0});
		p.beta = s.numbers("beta", std::vector<double>{1.0});
		p.lambda = s.numbers("lambda", std::vector<double>{1.0});
		p.convention = s.choice<cd::OpinionWeightConvention>(
		    "opinion_weight_convention", "beta",
		    [](std::string_view v) -> std::optional<cd::OpinionWeightConvention> {
			    if (v == "beta")
				    return cd::OpinionWeightConvention::beta;
			    if (v == "beta_times_one_minus_lambda")
				    return cd::OpinionWeightConvention::beta_times_one_minus_lambda;
			    return std::nullopt;
		    },
		    "beta, beta_times_one_minus_lambda");
		game = p;
	}
	s.finish();
	return game;
}

struct LoadedNetwork {
	cd::NetworkSource source;
	std::shared_ptr<const cd::Graph> a_layer;
	std::shared_ptr<const cd::Graph> raw;
	std::vector<std::string> labels;
};

std::filesystem::path resolve_path(const std::string& p, const std::filesystem::path& base) {
	std::filesystem::path path(p);
	if (path.is_relative())
		path = std::filesystem::absolute(base / path);
	return path.lexically_normal();
}

struct Layer {
	std::shared_ptr<const cd::Graph> raw;
	std::shared_ptr<const cd::Graph> used;
};

Layer finish_graph(cd::Graph g, bool normalize) {
	Layer l;
	l.raw = std::make_shared<const cd::Graph>(std::move(g));
	l.used = normalize ? std::make_shared<const cd::Graph>(cd::row_normalize(*l.raw)) : l.raw;
	return l;
}

Layer load_file_layer(Section& s, const std::filesystem::path& base,
                                                 std::vector<std::string>* labels, bool allow_labels) {
	const std::string path = resolve_path(s.string("path"), base).string();
	s.set("path", path);
	cd::EdgeListOptions opts;
	opts.undirected = s.boolean("undirected", false);
	opts.keep_self_loops = s.boolean("keep_self_loops", false);
	opts.labels = allow_labels ? s.boolean("labels", false) : false;
	const bool normalize = s.boolean("normalize", true);
	auto doc = cd::load_edge_list_file(path, opts);
	if (labels)
		*labels = std::move(doc.labels);
	return finish_graph(std::move(doc.graph), normalize);
}

LoadedNetwork parse_network(Section s, const std::filesystem::path& base, SeedSource& seed, bool static_only) {
	LoadedNetwork net;
	const std::string source = s.choice<std::string>(
	    "source", std::nullopt, [](std::string_view v) { return pick(v, {"file", "generator", "temporal"}); },
	    "file, generator, temporal");
	if (source == "temporal") {
		if (static_only)
			throw ConfigError(s.at("source"), "this command needs a static network");
		cd::TemporalNetwork t;
		t.n = s.count("n");
		t.contacts.k = s.count("k", 3);
		t.contacts.u_v = s.number("u_v", 0.0);
		t.contacts.include_self = s.boolean("include_self", true);
		t.contacts.with_replacement = s.boolean("with_replacement", true);
		if (t.n < 2)
			throw ConfigError(s.at("n"), "need at least two agents");
		if (t.contacts.k == 0)
			throw ConfigError(s.at("k"), "must be positive");
		if (!(t.contacts.u_v >= 0.0))
			throw ConfigError(s.at("u_v"), "must be nonnegative");
		if (!t.contacts.with_replacement && t.contacts.k > t.n - (t.contacts.include_self ? 0 : 1))
			throw ConfigError(s.at("k"), "too many contacts to draw without replacement");
		net.source = t;
		s.finish();
		return net;
	}

	std::shared_ptr<const cd::Graph> w;
	if (source == "file") {
		const Layer a = load_file_layer(s, base, &net.labels, true);
		net.a_layer = a.used;
		net.raw = a.raw;
		if (s.has("communication")) {
			if (!net.labels.empty())
				throw ConfigError(s.at("communication"), "a separate communication layer needs integer node ids");
			Section c = s.child("communication");
			w = load_file_layer(c, base, nullptr, false).used;
			c.finish();
			if (w->num_nodes() != net.a_layer->num_nodes())
				throw ConfigError(s.at("communication"), "layer sizes differ: " +
				                                             std::to_string(w->num_nodes()) + " vs " +
				                                             std::to_string(net.a_layer->num_nodes()));
		}
	} else {
		const std::string model = s.choice<std::string>(
		    "model", std::nullopt,
		    [](std::string_view v) {
			    return pick(v, {"complete", "star", "ring", "two_triangle", "erdos_renyi", "small_world", "two_block"});
		    },
		    "complete, star, ring, two_triangle, erdos_renyi, small_world, two_block");
		cd::Graph g;
		if (model == "two_triangle") {
			g = cd::generators::two_triangle();
		} else if (model == "star") {
			g = cd::generators::star(s.count("leaves"));
		} else {
			const std::size_t n = s.count("n");
			if (n == 0)
				throw ConfigError(s.at("n"), "must be positive");
			if (model == "complete") {
				g = cd::generators::complete(n, s.boolean("self_loops", false));
			} else if (model == "ring") {
				g = cd::generators::ring(n);
			} else {
				const auto gseed = s.has("seed") ? static_cast<std::uint64_t>(s.integer("seed"))
				                                 : static_cast<std::uint64_t>(s.integer("seed", static_cast<long long>(seed.get())));
				cd::rng_t rng(gseed);
				auto prob = [&](const char* key) {
					const double p = s.number(key);
					if (!(p >= 0.0 && p <= 1.0))
						throw ConfigError(s.at(key), "must lie in [0,1]");
					return p;
				};
				if (model == "erdos_renyi") {
					g = cd::generators::erdos_renyi(n, prob("p"), rng);
				} else if (model == "small_world") {
					const std::size_t half = s.count("half_degree", 2);
					if (half == 0 || 2 * half >= n)
						throw ConfigError(s.at("half_degree"), "must satisfy 0 < 2*half_degree < n");
					g = cd::generators::small_world(n, half, prob("p"), rng);
				} else {
					const double p_in = prob("p_in");
					const double p_out = prob("p_out");
					g = cd::generators::two_block(n, p_in, p_out, rng);
				}
			}
		}
		const Layer a = finish_graph(std::move(g), s.boolean("normalize", true));
		net.a_layer = a.used;
		net.raw = a.raw;
	}
	s.finish();
	net.source = cd::StaticNetwork{net.a_layer, w};
	return net;
}

cd::RevisionSpec parse_revision(Section s, bool coevolution, std::size_t n) {
	cd::RevisionSpec rev;
	const std::string protocol = s.choice<std::string>(
	    "protocol", "best_response", [](std::string_view v) { return pick(v, {"best_response", "logit", "trend"}); },
	    "best_response, logit, trend");
	if (protocol == "best_response") {
		cd::BestResponse br;
		br.tie = s.choice<cd::TieRule>("tie", "keep_current", cd::parse_tie_rule, "keep_current, prefer_plus, uniform");
		rev.protocol = br;
	} else if (protocol == "logit") {
		cd::Logit l;
		l.sigma = s.numbers("sigma", std::vector<double>{1.0});
		if (l.sigma.empty() || (l.sigma.size() != 1 && l.sigma.size() != n))
			throw ConfigError(s.at("sigma"), "expected one value or one per agent");
		for (double v : l.sigma)
			if (v < 0.0)
				throw ConfigError(s.at("sigma"), "rationality must be nonnegative");
		l.negative_exponent = s.boolean("negative_exponent", false);
		rev.protocol = l;
	} else {
		cd::TrendMixed t;
		t.u_t = s.number("u_t", 0.0);
		if (!(t.u_t >= 0.0 && t.u_t <= 1.0))
			throw ConfigError(s.at("u_t"), "must lie in [0,1]");
		t.initial_trend = s.choice<cd::InitialTrend>(
		    "initial_trend", "flat",
		    [](std::string_view v) -> std::optional<cd::InitialTrend> {
			    if (v == "flat")
				    return cd::InitialTrend::flat;
			    if (v == "rising")
				    return cd::InitialTrend::rising;
			    return std::nullopt;
		    },
		    "flat, rising");
		rev.protocol = t;
	}
	rev.schedule = s.choice<cd::Schedule>("schedule", coevolution ? "async_uniform" : "synchronous",
	                                      cd::parse_schedule, "synchronous, async_uniform, fixed_sequence");
	if (rev.schedule == cd::Schedule::fixed_sequence) {
		rev.sequence = s.nodes("sequence", n, {}, true);
		if (rev.sequence.empty())
			throw ConfigError(s.at("sequence"), "must not be empty");
	}
	s.finish();
	return rev;
}

cd::InitialCondition parse_initial(Section s, std::size_t n, const std::vector<std::string>& labels) {
	cd::InitialCondition init;
	if (s.has("adopters")) {
		if (s.has("zeta0"))
			throw ConfigError(s.at("zeta0"), "give either zeta0 or adopters, not both");
		init.explicit_adopters = true;
		init.adopters = s.nodes("adopters", n, labels);
	} else {
		init.zeta0 = s.number("zeta0", 0.0);
		if (!(init.zeta0 >= 0.0 && init.zeta0 <= 1.0))
			throw ConfigError(s.at("zeta0"), "must lie in [0,1]");
	}
	init.opinions = s.choice<cd::OpinionInit>(
	    "opinions", "match_actions",
	    [](std::string_view v) -> std::optional<cd::OpinionInit> {
		    if (v == "match_actions")
			    return cd::OpinionInit::match_actions;
		    if (v == "uniform")
			    return cd::OpinionInit::uniform;
		    if (v == "explicit")
			    return cd::OpinionInit::explicit_values;
		    return std::nullopt;
	    },
	    "match_actions, uniform, explicit");
	if (init.opinions == cd::OpinionInit::explicit_values) {
		init.y = s.numbers("y");
		if (init.y.size() != n)
			throw ConfigError(s.at("y"), "expected " + std::to_string(n) + " opinions, got " +
			                                 std::to_string(init.y.size()));
		for (double v : init.y)
			if (v < -1.0 || v > 1.0)
				throw ConfigError(s.at("y"), "opinions must lie in [-1,1]");
	}
	init.actions_from_opinions = s.boolean("actions_from_opinions", false);
	s.finish();
	return init;
}

std::vector<node_t> parse_committed(Section s, std::size_t n, const std::vector<std::string>& labels,
                                    const cd::Graph* graph, SeedSource& seed) {
	if (s.has("top")) {
		if (s.has("nodes"))
			throw ConfigError(s.at("nodes"), "give either nodes or top, not both");
		const std::size_t top = s.count("top");
		if (top > n)
			throw ConfigError(s.at("top"), "exceeds the number of agents");
		const cd::Ranking ranking = s.choice<cd::Ranking>("ranking", "eigenvector", cd::parse_ranking,
		                                                  "eigenvector, lowest_eigenvector, degree, random, identity");
		if (!graph)
			throw ConfigError(s.at("top"), "ranked selection needs a static network");
		std::uint64_t rseed = 0;
		if (ranking == cd::Ranking::random)
			rseed = s.has("ranking_seed") ? static_cast<std::uint64_t>(s.integer("ranking_seed"))
			                              : static_cast<std::uint64_t>(s.integer("ranking_seed", static_cast<long long>(seed.get())));
		auto order = cd::rank_nodes(*graph, ranking, rseed);
		order.resize(top);
		s.finish();
		return order;
	}
	auto nodes = s.nodes("nodes", n, labels);
	std::set<node_t> unique(nodes.begin(), nodes.end());
	if (unique.size() != nodes.size())
		throw ConfigError(s.at("nodes"), "duplicate node");
	s.finish();
	return nodes;
}


} // namespace

RunConfig parse_run_config(const json& doc, Command command, const std::filesystem::path& base_dir,
                           const Overrides& overrides) {
	RunConfig rc;
	rc.command = command;
	rc.resolved = json::object();
	Section root(doc, rc.resolved, "");
	for (const auto& [key, value] : doc.items())
		if (!known_sections.count(key))
			throw ConfigError(key, "unknown key");

	SeedSource seed(doc, rc.resolved, overrides);
	root.raw("seed");
	if (command == Command::simulate || command == Command::ensemble)
		rc.seed = seed.get();
	if (overrides.out)
		rc.output = *overrides.out;
	else if (doc.contains("output")) {
		if (!doc["output"].is_string())
			throw ConfigError("output", "expected a string");
		rc.output = doc["output"].get<std::string>();
	}

	if (command == Command::thresholds) {
		Section t = root.child("thresholds");
		const long long k = t.integer("k", 3);
		if (k < 1)
			throw ConfigError(t.at("k"), "must be positive");
		rc.thresholds.k = static_cast<int>(k);
		rc.thresholds.alpha = t.range("alpha", {0.0});
		rc.thresholds.u_t = t.range("u_t", {0.0});
		rc.thresholds.u_v = t.range("u_v", {0.0});
		rc.thresholds.tol = t.number("tol", 1e-10);
		if (!(rc.thresholds.tol > 0.0))
			throw ConfigError(t.at("tol"), "must be positive");
		for (double a : rc.thresholds.alpha)
			if (!(a > -1.0))
				throw ConfigError(t.at("alpha"), "values must exceed -1");
		for (double u : rc.thresholds.u_t)
			if (!(u >= 0.0 && u <= 1.0))
				throw ConfigError(t.at("u_t"), "values must lie in [0,1]");
		for (double u : rc.thresholds.u_v)
			if (!(u >= 0.0))
				throw ConfigError(t.at("u_v"), "values must be nonnegative");
		t.finish();
		return rc;
	}

	const bool needs_game = command != Command::graph_info;
	const bool static_only = command != Command::simulate && command != Command::ensemble;
	if (!doc.contains("network"))
		throw ConfigError("network", "required field missing");
	if (needs_game && !doc.contains("game"))
		throw ConfigError("game", "required field missing");

	LoadedNetwork net = parse_network(root.child("network"), base_dir, seed, static_only);
	rc.graph = net.a_layer;
	rc.raw_graph = net.raw;
	rc.labels = net.labels;
	rc.sim.network = net.source;
	const std::size_t n = rc.sim.num_nodes();

	if (command == Command::graph_info) {
		if (seed.used())
			rc.seed = seed.get();
		return rc;
	}

	rc.sim.game = parse_game(root.child("game"));
	const bool coevolution = std::holds_alternative<cd::CoevolutionParams>(rc.sim.game);
	if (const auto* p = std::get_if<cd::CoevolutionParams>(&rc.sim.game)) {
		try {
			p->validate(n);
		} catch (const cd::DomainError& e) {
			throw ConfigError("game", e.what());
		}
	}

	if (command == Command::nash) {
		if (coevolution)
			throw ConfigError("game.type", "equilibrium enumeration needs a coordination or pgg game");
		if (seed.used())
			rc.seed = seed.get();
		return rc;
	}

	if (command == Command::controlset) {
		if (!coevolution)
			throw ConfigError("game.type", "control-set search needs a coevolution game");
		Section c = root.child("controlset");
		rc.controlset.ranking = c.choice<cd::Ranking>("ranking", "eigenvector", cd::parse_ranking,
		                                              "eigenvector, lowest_eigenvector, degree, random, identity");
		c.finish();
		if (doc.contains("committed"))
			rc.controlset.explicit_nodes =
			    parse_committed(root.child("committed"), n, rc.labels, rc.raw_graph.get(), seed);
		else if (rc.controlset.ranking == cd::Ranking::random)
			rc.seed = seed.get();
		if (seed.used())
			rc.seed = seed.get();
		return rc;
	}

	rc.sim.revision = parse_revision(root.child("revision"), coevolution, n);
	rc.sim.initial = parse_initial(root.child("initial"), n, rc.labels);
	rc.sim.committed = parse_committed(root.child("committed"), n, rc.labels, rc.raw_graph.get(), seed);
	rc.sim.horizon = root.count("horizon", 100);
	rc.sim.snapshot_stride = root.count("snapshot_stride", 0);

	if (command == Command::ensemble) {
		const bool logit = std::holds_alternative<cd::Logit>(rc.sim.revision.protocol);
		Section c = root.child("criterion");
		rc.criterion.threshold = c.number("threshold", logit ? 0.95 : 1.0);
		rc.criterion.sustain = c.count("sustain", logit ? 50 : 1);
		if (!(rc.criterion.threshold > 0.0 && rc.criterion.threshold <= 1.0))
			throw ConfigError(c.at("threshold"), "must lie in (0,1]");
		c.finish();
		long long runs;
		if (overrides.runs) {
			runs = *overrides.runs;
			root.raw("runs");
		} else {
			runs = root.integer("runs", 100);
		}
		if (runs <= 0)
			throw ConfigError("runs", "must be a positive integer, got " + std::to_string(runs));
		rc.runs = static_cast<std::size_t>(runs);
		rc.resolved["runs"] = rc.runs;
	}

	rc.sim.validate();
	return rc;
}

RunConfig load_run_config(const std::filesystem::path& file, Command command, const Overrides& overrides) {
	std::ifstream in(file);
	if (!in)
		throw ConfigError("--config", "cannot open " + file.string());
	json doc;
	try {
		doc = json::parse(in, nullptr, true, true);
	} catch (const json::parse_error& e) {
		throw ConfigError("--config", file.string() + ": " + e.what());
	}
	return parse_run_config(doc, command, file.parent_path(), overrides);
}

} // namespace cdcli
