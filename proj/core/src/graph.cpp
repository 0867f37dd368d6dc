#include "cd/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "cd/errors.h"

namespace cd {

Graph Graph::from_edges(std::size_t n, std::vector<Edge> edges, bool keep_self_loops) {
	for (const auto& e : edges) {
		if (e.source >= n || e.target >= n)
			throw DomainError("edge " + std::to_string(e.source) + "->" + std::to_string(e.target) +
			                  " outside node range [0, " + std::to_string(n) + ")");
		if (!std::isfinite(e.weight) || e.weight < 0.0)
			throw DomainError("edge " + std::to_string(e.source) + "->" + std::to_string(e.target) +
			                  " has invalid weight " + std::to_string(e.weight));
	}
	if (!keep_self_loops)
		std::erase_if(edges, [](const Edge& e) { return e.source == e.target; });

	std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
		return a.source != b.source ? a.source < b.source : a.target < b.target;
	});

	Graph g;
	g.offsets_.assign(n + 1, 0);
	g.arcs_.reserve(edges.size());
	for (std::size_t k = 0; k < edges.size();) {
		const auto& e = edges[k];
		double w = 0.0;
		std::size_t m = k;
		for (; m < edges.size() && edges[m].source == e.source && edges[m].target == e.target; ++m)
			w += edges[m].weight;
		if (w > 0.0) {
			g.arcs_.push_back({e.target, w});
			++g.offsets_[e.source + 1];
		}
		k = m;
	}
	std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
	return g;
}

double Graph::out_weight(node_t i) const {
	double s = 0.0;
	for (const auto& a : out(i))
		s += a.weight;
	return s;
}

double Graph::weight(node_t i, node_t j) const {
	auto row = out(i);
	auto it = std::lower_bound(row.begin(), row.end(), j,
	                           [](const Arc& a, node_t t) { return a.target < t; });
	return (it != row.end() && it->target == j) ? it->weight : 0.0;
}

std::vector<Edge> Graph::edges() const {
	std::vector<Edge> result;
	result.reserve(arcs_.size());
	for (node_t i = 0; i < num_nodes(); ++i)
		for (const auto& a : out(i))
			result.push_back({i, a.target, a.weight});
	return result;
}

Graph Graph::scaled(double factor) const {
	if (!(factor > 0.0) || !std::isfinite(factor))
		throw DomainError("scale factor must be positive");
	Graph g = *this;
	for (auto& a : g.arcs_)
		a.weight *= factor;
	g.row_stochastic_ = false;
	return g;
}

namespace {

std::string_view trim(std::string_view s) {
	const auto ws = " \t\r\n\v\f";
	auto b = s.find_first_not_of(ws);
	if (b == std::string_view::npos)
		return {};
	auto e = s.find_last_not_of(ws);
	return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
	std::vector<std::string_view> tokens;
	std::size_t i = 0;
	while (i < s.size()) {
		while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
			++i;
		std::size_t j = i;
		while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
			++j;
		if (j > i)
			tokens.push_back(s.substr(i, j - i));
		i = j;
	}
	return tokens;
}

} // namespace

EdgeListDocument load_edge_list(std::string_view text, const EdgeListOptions& options) {
	EdgeListDocument doc;
	std::unordered_map<std::string, node_t> index;
	std::vector<Edge> edges;
	std::size_t n = 0;

	auto node_of = [&](std::string_view tok, std::size_t line) -> node_t {
		if (options.labels) {
			auto [it, inserted] = index.try_emplace(std::string(tok), doc.labels.size());
			if (inserted)
				doc.labels.emplace_back(tok);
			return it->second;
		}
		node_t v = 0;
		auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
		if (ec != std::errc{} || p != tok.data() + tok.size())
			throw ParseError(line, "expected nonnegative integer node id, got '" + std::string(tok) + "'");
		return v;
	};

	std::size_t line_no = 0;
	std::size_t pos = 0;
	while (pos <= text.size()) {
		auto nl = text.find('\n', pos);
		auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
		pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
		++line_no;

		auto hash = raw.find('#');
		auto line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
		if (line.empty())
			continue;
		auto tok = split_ws(line);
		if (tok.size() < 2 || tok.size() > 3)
			throw ParseError(line_no, "expected 'src dst [weight]'");
		node_t s = node_of(tok[0], line_no);
		node_t t = node_of(tok[1], line_no);
		double w = 1.0;
		if (tok.size() == 3) {
			auto [p, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), w);
			if (ec != std::errc{} || p != tok[2].data() + tok[2].size())
				throw ParseError(line_no, "malformed weight '" + std::string(tok[2]) + "'");
			if (!std::isfinite(w) || w < 0.0)
				throw DomainError("line " + std::to_string(line_no) + ": negative or non-finite weight");
		}
		edges.push_back({s, t, w});
		if (options.undirected && s != t)
			edges.push_back({t, s, w});
		n = std::max(n, std::max(s, t) + 1);
	}
	if (options.labels)
		n = doc.labels.size();
	doc.graph = Graph::from_edges(n, std::move(edges), options.keep_self_loops);
	return doc;
}

EdgeListDocument load_edge_list_file(const std::string& path, const EdgeListOptions& options) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw FileError("cannot open edge list '" + path + "'");
	std::ostringstream ss;
	ss << in.rdbuf();
	return load_edge_list(ss.str(), options);
}

Graph row_normalize(const Graph& g) {
	Graph r = g;
	for (node_t i = 0; i < g.num_nodes(); ++i) {
		const double s = g.out_weight(i);
		if (!(s > 0.0))
			throw NormalizationError(i, "node " + std::to_string(i) + " has zero out-weight");
		for (std::size_t k = r.offsets_[i]; k < r.offsets_[i + 1]; ++k)
			r.arcs_[k].weight /= s;
	}
	r.row_stochastic_ = true;
	return r;
}

bool weakly_connected(const Graph& g) {
	const std::size_t n = g.num_nodes();
	if (n == 0)
		return true;
	std::vector<std::vector<node_t>> adj(n);
	for (node_t i = 0; i < n; ++i)
		for (const auto& a : g.out(i)) {
			adj[i].push_back(a.target);
			adj[a.target].push_back(i);
		}
	std::vector<char> seen(n, 0);
	std::vector<node_t> stack{0};
	seen[0] = 1;
	std::size_t count = 1;
	while (!stack.empty()) {
		node_t v = stack.back();
		stack.pop_back();
		for (node_t u : adj[v])
			if (!seen[u]) {
				seen[u] = 1;
				++count;
				stack.push_back(u);
			}
	}
	return count == n;
}

std::vector<std::size_t> strongly_connected_components(const Graph& g, std::size_t* count) {
	// Iterative Tarjan.
	const std::size_t n = g.num_nodes();
	constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
	std::vector<std::size_t> idx(n, unvisited), low(n, 0), comp(n, unvisited);
	std::vector<char> on_stack(n, 0);
	std::vector<node_t> stack;
	std::vector<std::pair<node_t, std::size_t>> call;
	std::size_t next = 0, ncomp = 0;

	for (node_t root = 0; root < n; ++root) {
		if (idx[root] != unvisited)
			continue;
		call.emplace_back(root, 0);
		while (!call.empty()) {
			auto& [v, k] = call.back();
			if (k == 0) {
				idx[v] = low[v] = next++;
				stack.push_back(v);
				on_stack[v] = 1;
			}
			auto row = g.out(v);
			bool descended = false;
			while (k < row.size()) {
				node_t w = row[k++].target;
				if (idx[w] == unvisited) {
					call.emplace_back(w, 0);
					descended = true;
					break;
				}
				if (on_stack[w])
					low[v] = std::min(low[v], idx[w]);
			}
			if (descended)
				continue;
			if (low[v] == idx[v]) {
				node_t w;
				do {
					w = stack.back();
					stack.pop_back();
					on_stack[w] = 0;
					comp[w] = ncomp;
				} while (w != v);
				++ncomp;
			}
			node_t finished = v;
			call.pop_back();
			if (!call.empty()) {
				node_t parent = call.back().first;
				low[parent] = std::min(low[parent], low[finished]);
			}
		}
	}
	if (count)
		*count = ncomp;
	return comp;
}

bool has_globally_reachable_node(const Graph& g) {
	if (g.num_nodes() == 0)
		return false;
	std::size_t ncomp = 0;
	auto comp = strongly_connected_components(g, &ncomp);
	// A globally reachable node exists iff the condensation has a single sink.
	std::vector<char> has_exit(ncomp, 0);
	for (node_t i = 0; i < g.num_nodes(); ++i)
		for (const auto& a : g.out(i))
			if (comp[a.target] != comp[i])
				has_exit[comp[i]] = 1;
	return std::count(has_exit.begin(), has_exit.end(), 0) == 1;
}

std::vector<double> eigenvector_centrality(const Graph& g, double tol, std::size_t max_iter) {
	const std::size_t n = g.num_nodes();
	if (!(tol > 0.0))
		throw DomainError("tolerance must be positive");
	if (n == 0)
		throw DomainError("empty graph");
	if (!weakly_connected(g))
		throw DomainError("graph is not connected");

	double shift = 0.0;
	for (node_t i = 0; i < n; ++i)
		shift = std::max(shift, g.out_weight(i));
	if (!(shift > 0.0))
		return std::vector<double>(n, 1.0 / static_cast<double>(n));

	std::vector<double> v(n, 1.0 / static_cast<double>(n)), next(n);
	for (std::size_t it = 0; it < max_iter; ++it) {
		double total = 0.0;
		for (node_t i = 0; i < n; ++i) {
			double s = shift * v[i];
			for (const auto& a : g.out(i))
				s += a.weight * v[a.target];
			next[i] = s;
			total += s;
		}
		double diff = 0.0;
		for (node_t i = 0; i < n; ++i) {
			next[i] /= total;
			diff += std::abs(next[i] - v[i]);
		}
		v.swap(next);
		if (diff < tol)
			return v;
	}
	throw IterationError("eigenvector centrality did not converge in " + std::to_string(max_iter) +
	                     " iterations");
}

std::vector<double> social_power(const Graph& g, double tol, std::size_t max_iter) {
	const std::size_t n = g.num_nodes();
	if (n == 0)
		throw DomainError("empty graph");
	for (node_t i = 0; i < n; ++i)
		if (std::abs(g.out_weight(i) - 1.0) > 1e-12)
			throw DomainError("row " + std::to_string(i) + " is not stochastic");
	if (!has_globally_reachable_node(g))
		throw DomainError("no globally reachable node");

	// Lazy chain (I + W)/2 shares the stationary vector and is aperiodic.
	std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
	for (std::size_t it = 0; it < max_iter; ++it) {
		for (node_t j = 0; j < n; ++j)
			next[j] = 0.5 * pi[j];
		for (node_t i = 0; i < n; ++i)
			for (const auto& a : g.out(i))
				next[a.target] += 0.5 * pi[i] * a.weight;
		double total = std::accumulate(next.begin(), next.end(), 0.0);
		double diff = 0.0;
		for (node_t j = 0; j < n; ++j) {
			next[j] /= total;
			diff += std::abs(next[j] - pi[j]);
		}
		pi.swap(next);
		if (diff < tol)
			return pi;
	}
	throw IterationError("social power did not converge in " + std::to_string(max_iter) + " iterations");
}

bool is_cohesive(const Graph& g, std::span<const node_t> set, double alpha, int action) {
	if (set.empty())
		throw DomainError("cohesive-set test on empty set");
	if (!(alpha > -1.0))
		throw DomainError("alpha must exceed -1");
	if (action != 1 && action != -1)
		throw DomainError("action must be +1 or -1");
	const std::size_t n = g.num_nodes();
	std::vector<char> in(n, 0);
	for (node_t v : set) {
		if (v >= n)
			throw DomainError("node " + std::to_string(v) + " out of range");
		in[v] = 1;
	}
	const double need = action == 1 ? 1.0 / (2.0 + alpha) : (1.0 + alpha) / (2.0 + alpha);
	for (node_t i : set) {
		double mass = 0.0;
		for (const auto& a : g.out(i))
			if (in[a.target])
				mass += a.weight;
		if (mass < need - 1e-12)
			return false;
	}
	return true;
}

std::optional<Ranking> parse_ranking(std::string_view name) {
	if (name == "eigenvector")
		return Ranking::eigenvector;
	if (name == "lowest_eigenvector")
		return Ranking::lowest_eigenvector;
	if (name == "degree")
		return Ranking::degree;
	if (name == "random")
		return Ranking::random;
	if (name == "identity")
		return Ranking::identity;
	return std::nullopt;
}

std::string_view to_string(Ranking r) {
	switch (r) {
	case Ranking::eigenvector: return "eigenvector";
	case Ranking::lowest_eigenvector: return "lowest_eigenvector";
	case Ranking::degree: return "degree";
	case Ranking::random: return "random";
	case Ranking::identity: return "identity";
	}
	return "?";
}

std::vector<node_t> rank_nodes(const Graph& g, Ranking ranking, std::uint64_t seed) {
	const std::size_t n = g.num_nodes();
	std::vector<node_t> order(n);
	std::iota(order.begin(), order.end(), node_t{0});
	switch (ranking) {
	case Ranking::identity:
		break;
	case Ranking::random: {
		rng_t rng(seed);
		std::shuffle(order.begin(), order.end(), rng);
		break;
	}
	case Ranking::degree:
		std::stable_sort(order.begin(), order.end(),
		                 [&](node_t a, node_t b) { return g.out_degree(a) > g.out_degree(b); });
		break;
	case Ranking::eigenvector:
	case Ranking::lowest_eigenvector: {
		auto c = eigenvector_centrality(g);
		if (ranking == Ranking::eigenvector)
			std::stable_sort(order.begin(), order.end(), [&](node_t a, node_t b) { return c[a] > c[b]; });
		else
			std::stable_sort(order.begin(), order.end(), [&](node_t a, node_t b) { return c[a] < c[b]; });
		break;
	}
	}
	return order;
}

namespace generators {

namespace {
void add_undirected(std::vector<Edge>& edges, node_t a, node_t b) {
	edges.push_back({a, b, 1.0});
	edges.push_back({b, a, 1.0});
}
} // namespace

Graph complete(std::size_t n, bool self_loops) {
	std::vector<Edge> edges;
	edges.reserve(n * n);
	for (node_t i = 0; i < n; ++i)
		for (node_t j = 0; j < n; ++j)
			if (i != j || self_loops)
				edges.push_back({i, j, 1.0});
	return Graph::from_edges(n, std::move(edges), self_loops);
}

Graph star(std::size_t leaves) {
	std::vector<Edge> edges;
	for (node_t l = 1; l <= leaves; ++l)
		add_undirected(edges, 0, l);
	return Graph::from_edges(leaves + 1, std::move(edges));
}

Graph ring(std::size_t n) {
	if (n < 3)
		throw DomainError("ring needs at least 3 nodes");
	std::vector<Edge> edges;
	for (node_t i = 0; i < n; ++i)
		add_undirected(edges, i, (i + 1) % n);
	return Graph::from_edges(n, std::move(edges));
}

Graph two_triangle() {
	std::vector<Edge> edges;
	for (auto [a, b] : {std::pair<node_t, node_t>{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {1, 4}})
		add_undirected(edges, a, b);
	return Graph::from_edges(6, std::move(edges));
}

Graph erdos_renyi(std::size_t n, double p, rng_t& rng) {
	if (p < 0.0 || p > 1.0)
		throw DomainError("edge probability outside [0,1]");
	std::vector<Edge> edges;
	for (node_t i = 0; i < n; ++i)
		for (node_t j = i + 1; j < n; ++j)
			if (uniform01(rng) < p)
				add_undirected(edges, i, j);
	return Graph::from_edges(n, std::move(edges));
}

Graph small_world(std::size_t n, std::size_t half_degree, double p, rng_t& rng) {
	if (n < 2 * half_degree + 2)
		throw DomainError("small-world graph needs n >= 2*half_degree + 2");
	if (p < 0.0 || p > 1.0)
		throw DomainError("rewiring probability outside [0,1]");
	std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
	for (node_t i = 0; i < n; ++i)
		for (std::size_t d = 1; d <= half_degree; ++d) {
			node_t j = (i + d) % n;
			adj[i][j] = adj[j][i] = 1;
		}
	for (std::size_t d = 1; d <= half_degree; ++d)
		for (node_t i = 0; i < n; ++i) {
			node_t j = (i + d) % n;
			if (!adj[i][j] || uniform01(rng) >= p)
				continue;
			std::size_t deg = std::count(adj[i].begin(), adj[i].end(), 1);
			if (deg >= n - 1)
				continue;
			node_t t;
			do {
				t = uniform_index(rng, n);
			} while (t == i || adj[i][t]);
			adj[i][j] = adj[j][i] = 0;
			adj[i][t] = adj[t][i] = 1;
		}
	std::vector<Edge> edges;
	for (node_t i = 0; i < n; ++i)
		for (node_t j = 0; j < n; ++j)
			if (adj[i][j])
				edges.push_back({i, j, 1.0});
	return Graph::from_edges(n, std::move(edges));
}

Graph two_block(std::size_t n, double p_in, double p_out, rng_t& rng) {
	std::vector<Edge> edges;
	const std::size_t half = n / 2;
	for (node_t i = 0; i < n; ++i)
		for (node_t j = i + 1; j < n; ++j) {
			const bool same = (i < half) == (j < half);
			if (uniform01(rng) < (same ? p_in : p_out))
				add_undirected(edges, i, j);
		}
	return Graph::from_edges(n, std::move(edges));
}

} // namespace generators

} // namespace cd
