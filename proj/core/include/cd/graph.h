#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cd/rng.h"

namespace cd {

using node_t = std::size_t;

struct Edge {
	node_t source;
	node_t target;
	double weight = 1.0;
};

struct Arc {
	node_t target;
	double weight;
};

/// Weighted directed graph in compressed sparse row form.
///
/// Immutable after construction. Arcs of every node are sorted by target and
/// contain no duplicates (parallel edges are merged by summing weights).
class Graph {
public:
	Graph() = default;

	/// Builds a graph on nodes [0, n). Throws DomainError on a negative or
	/// non-finite weight or an out-of-range endpoint.
	static Graph from_edges(std::size_t n, std::vector<Edge> edges, bool keep_self_loops = true);

	std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
	std::size_t num_arcs() const noexcept { return arcs_.size(); }

	std::span<const Arc> out(node_t i) const {
		return {arcs_.data() + offsets_[i], arcs_.data() + offsets_[i + 1]};
	}

	std::size_t out_degree(node_t i) const { return offsets_[i + 1] - offsets_[i]; }
	double out_weight(node_t i) const;
	/// Weight of arc i -> j, 0 if absent.
	double weight(node_t i, node_t j) const;

	/// True when every out-row was normalized to sum 1 (within 1e-12).
	bool row_stochastic() const noexcept { return row_stochastic_; }

	std::vector<Edge> edges() const;

	/// Same structure, every weight multiplied by `factor` (> 0).
	Graph scaled(double factor) const;

private:
	friend Graph row_normalize(const Graph& g);

	std::vector<std::size_t> offsets_;
	std::vector<Arc> arcs_;
	bool row_stochastic_ = false;
};

struct EdgeListOptions {
	/// Each line adds both i->j and j->i.
	bool undirected = false;
	bool keep_self_loops = false;
	/// Treat node tokens as arbitrary labels mapped to dense indices in
	/// first-appearance order. Otherwise tokens must be nonnegative integers.
	bool labels = false;
};

struct EdgeListDocument {
	Graph graph;
	/// labels[i] is the token of node i; empty unless options.labels was set.
	std::vector<std::string> labels;
};

/// Parses `src dst [weight]` lines; `#` starts a comment.
EdgeListDocument load_edge_list(std::string_view text, const EdgeListOptions& options = {});
EdgeListDocument load_edge_list_file(const std::string& path, const EdgeListOptions& options = {});

/// Divides every out-row by its sum. Throws NormalizationError naming the
/// first node with zero out-weight.
Graph row_normalize(const Graph& g);

bool weakly_connected(const Graph& g);

/// Strongly connected components; returns component id per node.
std::vector<std::size_t> strongly_connected_components(const Graph& g, std::size_t* count = nullptr);

/// True iff some node is reachable from every other node.
bool has_globally_reachable_node(const Graph& g);

/// Dominant right eigenvector of the weight matrix, unit sum.
///
/// Power iteration on A + sI with s the maximal out-weight, started from the
/// uniform vector; the shift removes the oscillation on bipartite graphs and
/// makes the iterates invariant under uniform rescaling of the weights.
std::vector<double> eigenvector_centrality(const Graph& g, double tol = 1e-10,
                                           std::size_t max_iter = 100000);

/// Normalized left eigenvector of a row-stochastic matrix for eigenvalue 1.
std::vector<double> social_power(const Graph& g, double tol = 1e-14,
                                 std::size_t max_iter = 10000000);

/// Cohesiveness of `set` for coordinating on `action` with relative
/// advantage `alpha`: every member keeps at least 1/(2+alpha) (action +1)
/// or (1+alpha)/(2+alpha) (action -1) of its weight inside the set.
bool is_cohesive(const Graph& g, std::span<const node_t> set, double alpha, int action);

enum class Ranking { eigenvector, lowest_eigenvector, degree, random, identity };

std::optional<Ranking> parse_ranking(std::string_view name);
std::string_view to_string(Ranking r);

/// Node order for committed-set placement. Ties break by node index.
std::vector<node_t> rank_nodes(const Graph& g, Ranking ranking, std::uint64_t seed = 0);

namespace generators {

Graph complete(std::size_t n, bool self_loops = false);
/// Hub 0 with `leaves` leaves, symmetric unit weights.
Graph star(std::size_t leaves);
Graph ring(std::size_t n);
/// Cliques {0,1,2} and {3,4,5} joined by the bridge 1-4, symmetric.
Graph two_triangle();
Graph erdos_renyi(std::size_t n, double p, rng_t& rng);
/// Watts-Strogatz: ring lattice with `half_degree` neighbours per side,
/// each lattice edge rewired with probability `p`.
Graph small_world(std::size_t n, std::size_t half_degree, double p, rng_t& rng);
/// Undirected two-block stochastic block model.
Graph two_block(std::size_t n, double p_in, double p_out, rng_t& rng);

} // namespace generators

} // namespace cd
