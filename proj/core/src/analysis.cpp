#include "cd/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <string>

#include "cd/errors.h"

namespace cd {

namespace {

constexpr std::size_t grid_points = 10000;

double binomial(int n, int k) {
	double c = 1.0;
	for (int j = 1; j <= k; ++j)
		c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
	return c;
}

void check_k_alpha(int k, double alpha) {
	if (k <= 0)
		throw DomainError("contacts per step k must be positive");
	if (!(alpha > -1.0))
		throw DomainError("relative advantage alpha must exceed -1");
}

/// Binomial(k, z) mass below and at-or-above `lower`, with w = 1 - z passed
/// separately so both tails keep full relative precision.
std::pair<double, double> binomial_tails(double z, double w, int k, int lower) {
	double below = 0.0, above = 0.0;
	for (int l = 0; l <= k; ++l) {
		const double term = binomial(k, l) * std::pow(z, l) * std::pow(w, k - l);
		(l < lower ? below : above) += term;
	}
	return {below, above};
}

double golden_min(const ThresholdQuery& q, double a, double b, double* where) {
	const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
	double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
	double fc = trend_drift(q, c), fd = trend_drift(q, d);
	for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
		if (fc < fd) {
			b = d;
			d = c;
			fd = fc;
			c = b - inv_phi * (b - a);
			fc = trend_drift(q, c);
		} else {
			a = c;
			c = d;
			fc = fd;
			d = a + inv_phi * (b - a);
			fd = trend_drift(q, d);
		}
	}
	*where = fc < fd ? c : d;
	return std::min(fc, fd);
}

/// Interior sample points: a uniform grid plus geometric points hugging
/// both ends, ascending.
const std::vector<double>& sample_points() {
	static const std::vector<double> pts = [] {
		std::vector<double> p;
		for (std::size_t j = 1; j < grid_points; ++j)
			p.push_back(static_cast<double>(j) / static_cast<double>(grid_points));
		for (int m = 5; m <= 12; ++m) {
			p.push_back(std::pow(10.0, -m));
			p.push_back(1.0 - std::pow(10.0, -m));
		}
		std::sort(p.begin(), p.end());
		return p;
	}();
	return pts;
}

struct Sample {
	double zeta;
	double value;
};

/// Drift at every sample point, with each discrete local minimum replaced
/// by its golden-section refinement when that is lower.
std::vector<Sample> refined_samples(const ThresholdQuery& q) {
	const auto& pts = sample_points();
	std::vector<Sample> s(pts.size());
	for (std::size_t j = 0; j < pts.size(); ++j)
		s[j] = {pts[j], trend_drift(q, pts[j])};
	std::vector<Sample> out = s;
	for (std::size_t j = 1; j + 1 < s.size(); ++j) {
		if (s[j].value <= s[j - 1].value && s[j].value <= s[j + 1].value) {
			double where = s[j].zeta;
			const double v = golden_min(q, s[j - 1].zeta, s[j + 1].zeta, &where);
			if (v < out[j].value)
				out[j] = {where, v};
		}
	}
	return out;
}

double threshold_from_right(const ThresholdQuery& q) {
	if (trend_drift_slope(q, 1.0) > 0.0)
		return 1.0;
	const auto s = refined_samples(q);
	std::size_t j = s.size();
	while (j > 0 && s[j - 1].value > 0.0)
		--j;
	if (j == 0)
		return 0.0;
	// s[j-1] is the rightmost non-positive sample; the drift is positive on
	// every later sample, so the crossing lies before the next sample point.
	double lo = s[j - 1].zeta;
	double hi = j < s.size() ? sample_points()[j] : 1.0;
	if (hi <= lo)
		hi = std::min(1.0, lo + 1.0 / grid_points);
	for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
		const double mid = 0.5 * (lo + hi);
		(trend_drift(q, mid) > 0.0 ? hi : lo) = mid;
	}
	return hi;
}

bool positive_on_open_interval(const ThresholdQuery& q) {
	if (trend_drift_slope(q, 1.0) > 0.0)
		return false;
	if (q.u_t == 0.0 && trend_drift_slope(q, 0.0) <= 0.0)
		return false;
	const auto s = refined_samples(q);
	return std::all_of(s.begin(), s.end(), [](const Sample& p) { return p.value > 0.0; });
}

} // namespace

void ThresholdQuery::validate() const {
	check_k_alpha(k, alpha);
	if (!(u_t >= 0.0 && u_t <= 1.0))
		throw DomainError("trend sensitivity u_t must lie in [0,1]");
	if (!(u_v >= 0.0) || !std::isfinite(u_v))
		throw DomainError("visibility u_v must be finite and nonnegative");
}

int pi_lower_limit(int k, double alpha) {
	check_k_alpha(k, alpha);
	return static_cast<int>(std::floor(static_cast<double>(k) / (2.0 + alpha))) + 1;
}

double pi_k_alpha(double zeta, int k, double alpha) {
	const int lower = pi_lower_limit(k, alpha);
	if (!(zeta >= 0.0 && zeta <= 1.0))
		throw DomainError("zeta must lie in [0,1]");
	double sum = 0.0;
	for (int l = std::max(lower, 0); l <= k; ++l)
		sum += binomial(k, l) * std::pow(zeta, l) * std::pow(1.0 - zeta, k - l);
	return sum;
}

double pi_k_alpha_derivative(double zeta, int k, double alpha) {
	const int lower = pi_lower_limit(k, alpha);
	if (lower > k)
		return 0.0;
	// d/dz P[Bin(k, z) >= L] = k C(k-1, L-1) z^(L-1) (1-z)^(k-L).
	return static_cast<double>(k) * binomial(k - 1, lower - 1) * std::pow(zeta, lower - 1) *
	       std::pow(1.0 - zeta, k - lower);
}

std::optional<double> zeta_star(int k, double alpha) {
	check_k_alpha(k, alpha);
	if (alpha > static_cast<double>(k - 2))
		return std::nullopt;
	auto g = [&](double z) { return pi_k_alpha(z, k, alpha) - z; };
	constexpr int steps = 1000;
	double a = 1.0 / steps;
	double ga = g(a);
	for (int j = 2; j < steps; ++j) {
		const double b = static_cast<double>(j) / steps;
		const double gb = g(b);
		if (gb == 0.0)
			return b;
		if (ga < 0.0 && gb > 0.0) {
			double lo = a, hi = b;
			for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
				const double mid = 0.5 * (lo + hi);
				const double gm = g(mid);
				if (gm == 0.0)
					return mid;
				(gm < 0.0 ? lo : hi) = mid;
			}
			return 0.5 * (lo + hi);
		}
		a = b;
		ga = gb;
	}
	return std::nullopt;
}

double trend_drift(const ThresholdQuery& q, double zeta) {
	if (!(zeta >= 0.0 && zeta <= 1.0))
		throw DomainError("zeta must lie in [0,1]");
	const double denom = 1.0 + q.u_v * zeta;
	const double biased = std::min(1.0, zeta * (1.0 + q.u_v) / denom);
	const double rest = (1.0 - zeta) / denom;
	const auto [below, above] = binomial_tails(biased, rest, q.k, pi_lower_limit(q.k, q.alpha));
	// Near zeta = 1 write f = (1 - zeta) - (1 - u_t) P[below] to avoid cancellation.
	if (zeta <= 0.5)
		return (1.0 - q.u_t) * above - zeta + q.u_t;
	return (1.0 - zeta) - (1.0 - q.u_t) * below;
}

double trend_drift_slope(const ThresholdQuery& q, double zeta) {
	const double denom = 1.0 + q.u_v * zeta;
	const double biased = q.u_v == 0.0 ? zeta : zeta * (1.0 + q.u_v) / denom;
	const double dbiased = q.u_v == 0.0 ? 1.0 : (1.0 + q.u_v) / (denom * denom);
	return (1.0 - q.u_t) * pi_k_alpha_derivative(std::clamp(biased, 0.0, 1.0), q.k, q.alpha) * dbiased - 1.0;
}

double u_star(int k, double alpha, double tol, double u_v) {
	if (!(tol > 0.0))
		throw DomainError("tolerance must be positive");
	ThresholdQuery q{k, alpha, 0.0, u_v};
	q.validate();
	if (positive_on_open_interval(q))
		return 0.0;
	double lo = 0.0, hi = 1.0;
	while (hi - lo > tol) {
		q.u_t = 0.5 * (lo + hi);
		(positive_on_open_interval(q) ? hi : lo) = q.u_t;
	}
	return hi;
}

double zeta_star_u(int k, double alpha, double u_t) {
	ThresholdQuery q{k, alpha, u_t, 0.0};
	q.validate();
	return threshold_from_right(q);
}

double zeta_star_uv(int k, double alpha, double u_t, double u_v) {
	ThresholdQuery q{k, alpha, u_t, u_v};
	q.validate();
	return threshold_from_right(q);
}

std::vector<std::vector<int>> find_nash_bruteforce(const Graph& g, const ActionGame& game) {
	const std::size_t n = g.num_nodes();
	if (n > 20)
		throw SizeError("exhaustive equilibrium search limited to 20 agents, got " + std::to_string(n));
	std::vector<std::vector<int>> result;
	std::vector<int> x(n);
	const std::uint64_t profiles = std::uint64_t{1} << n;
	for (std::uint64_t mask = 0; mask < profiles; ++mask) {
		for (std::size_t i = 0; i < n; ++i)
			x[i] = (mask >> i) & 1U ? 1 : -1;
		const long total = std::accumulate(x.begin(), x.end(), 0L);
		bool nash = true;
		for (std::size_t i = 0; i < n && nash; ++i) {
			double plus, minus;
			if (const auto* c = std::get_if<CoordinationParams>(&game)) {
				plus = coordination_payoff(g, *c, i, 1, x);
				minus = coordination_payoff(g, *c, i, -1, x);
			} else {
				const auto& p = std::get<PggParams>(game);
				plus = pgg_payoff(p, n, total - x[i], 1);
				minus = pgg_payoff(p, n, total - x[i], -1);
			}
			const double mine = x[i] == 1 ? plus : minus;
			nash = mine >= std::max(plus, minus) - tie_tolerance;
		}
		if (nash)
			result.push_back(x);
	}
	return result;
}

} // namespace cd
