#include "cd/tempnet.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "cd/errors.h"

namespace cd {

void ContactParams::validate(std::size_t n) const {
	if (n < 2)
		throw DomainError("contact process needs at least 2 agents");
	if (k == 0)
		throw DomainError("contacts per step must be positive");
	if (k < 2)
		spdlog::warn("contacts per step k = {} is below 2", k);
	if (!(u_v >= 0.0) || !std::isfinite(u_v))
		throw DomainError("visibility boost u_v must be finite and nonnegative");
	const std::size_t pool = include_self ? n : n - 1;
	if (!with_replacement && k > pool)
		throw DomainError("cannot draw " + std::to_string(k) + " distinct contacts from " +
		                  std::to_string(pool) + " candidates");
}

Graph ContactLists::to_graph() const {
	std::vector<Edge> edges;
	edges.reserve(draws.size());
	const double w = 1.0 / static_cast<double>(k);
	for (node_t i = 0; i < n; ++i)
		for (node_t j : of(i))
			edges.push_back({i, j, w});
	return Graph::from_edges(n, std::move(edges), true);
}

double contact_probability(std::size_t n, double u_v, double zeta, bool adopter) {
	const double denom = static_cast<double>(n) * (1.0 + u_v * zeta);
	return (adopter ? 1.0 + u_v : 1.0) / denom;
}

ContactSampler::ContactSampler(std::size_t n, const ContactParams& params) : n_(n), params_(params) {
	params_.validate(n);
}

ContactSampler::ContactSampler(const ContactParams& params, std::span<const int> x)
    : n_(x.size()), params_(params) {
	params_.validate(n_);
	if (params_.u_v == 0.0)
		return;
	for (node_t j = 0; j < n_; ++j)
		(x[j] == 1 ? adopters_ : others_).push_back(j);
	if (adopters_.empty() || others_.empty())
		return; // homogeneous population: the bias has no effect
	biased_ = true;
	const double zeta = static_cast<double>(adopters_.size()) / static_cast<double>(n_);
	adopter_mass_ = zeta * (1.0 + params_.u_v) / (1.0 + params_.u_v * zeta);
}

node_t ContactSampler::draw_one(rng_t& rng) const {
	if (!biased_)
		return uniform_index(rng, n_);
	if (uniform01(rng) < adopter_mass_)
		return adopters_[uniform_index(rng, adopters_.size())];
	return others_[uniform_index(rng, others_.size())];
}

void ContactSampler::draw(node_t i, std::span<node_t> out, rng_t& rng) const {
	for (std::size_t l = 0; l < out.size(); ++l) {
		node_t j;
		for (;;) {
			j = draw_one(rng);
			if (!params_.include_self && j == i)
				continue;
			if (!params_.with_replacement && std::find(out.begin(), out.begin() + l, j) != out.begin() + l)
				continue;
			break;
		}
		out[l] = j;
	}
}

namespace {
ContactLists sample_all(const ContactSampler& sampler, std::size_t n, rng_t& rng) {
	ContactLists lists;
	lists.n = n;
	lists.k = sampler.k();
	lists.draws.resize(n * lists.k);
	for (node_t i = 0; i < n; ++i)
		sampler.draw(i, {lists.draws.data() + i * lists.k, lists.k}, rng);
	return lists;
}
} // namespace

ContactLists sample_contacts_uniform(std::size_t n, const ContactParams& params, rng_t& rng) {
	return sample_all(ContactSampler(n, params), n, rng);
}

ContactLists sample_contacts_visibility(const ContactParams& params, std::span<const int> x, rng_t& rng) {
	return sample_all(ContactSampler(params, x), x.size(), rng);
}

} // namespace cd
