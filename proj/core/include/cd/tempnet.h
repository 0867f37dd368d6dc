#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cd/graph.h"
#include "cd/rng.h"

namespace cd {

/// Activity-driven contact process: every agent draws `k` contacts per step.
struct ContactParams {
	std::size_t k = 3;
	/// Relative visibility boost of +1 adopters (0 = unbiased).
	double u_v = 0.0;
	bool include_self = true;
	bool with_replacement = true;

	void validate(std::size_t n) const;
};

/// One step's contacts: agent i drew contacts [i*k, (i+1)*k), each draw
/// carrying weight 1/k.
struct ContactLists {
	std::size_t n = 0;
	std::size_t k = 0;
	std::vector<node_t> draws;

	std::span<const node_t> of(node_t i) const { return {draws.data() + i * k, k}; }
	/// Directed graph with w_ij = (number of times i drew j) / k.
	Graph to_graph() const;
};

/// Probability that a single draw hits a specific node, given the adopter
/// fraction `zeta` and whether that node is an adopter. Self-inclusion and
/// replacement are ignored (the literal activity-driven law).
double contact_probability(std::size_t n, double u_v, double zeta, bool adopter);

/// Draws contacts for agents one at a time. Adopter lists are fixed at
/// construction (the state at the start of the step).
class ContactSampler {
public:
	/// Unbiased sampler.
	ContactSampler(std::size_t n, const ContactParams& params);
	/// Visibility-biased sampler; `x` holds the current actions.
	ContactSampler(const ContactParams& params, std::span<const int> x);

	/// Fills `out` (size k) with the draws of agent i.
	void draw(node_t i, std::span<node_t> out, rng_t& rng) const;

	std::size_t k() const noexcept { return params_.k; }

private:
	node_t draw_one(rng_t& rng) const;

	std::size_t n_;
	ContactParams params_;
	bool biased_ = false;
	double adopter_mass_ = 0.0;
	std::vector<node_t> adopters_;
	std::vector<node_t> others_;
};

ContactLists sample_contacts_uniform(std::size_t n, const ContactParams& params, rng_t& rng);

/// Adopter j is drawn with probability (1+u_v)/(n(1+u_v zeta)), non-adopters
/// with 1/(n(1+u_v zeta)).
ContactLists sample_contacts_visibility(const ContactParams& params, std::span<const int> x, rng_t& rng);

} // namespace cd
