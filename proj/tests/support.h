#pragma once

#include "cd/graph.h"
#include "cd/rng.h"

namespace cdtest {

/// Erdos-Renyi graph plus a directed ring, so every node has out-neighbours.
inline cd::Graph er_with_ring(std::size_t n, double p, cd::rng_t& rng) {
	const cd::Graph er = cd::generators::erdos_renyi(n, p, rng);
	std::vector<cd::Edge> edges;
	for (cd::node_t i = 0; i < n; ++i) {
		for (const auto& a : er.out(i))
			edges.push_back({i, a.target, a.weight});
		edges.push_back({i, static_cast<cd::node_t>((i + 1) % n), 1.0});
	}
	return cd::Graph::from_edges(n, edges);
}

} // namespace cdtest
