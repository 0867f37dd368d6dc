#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cd/dynamics.h"
#include "cd/games.h"
#include "cd/graph.h"

namespace cd {

/// Parameters of the trend/visibility threshold machinery.
struct ThresholdQuery {
	int k = 3;
	double alpha = 0.0;
	double u_t = 0.0;
	double u_v = 0.0;

	void validate() const;
};

/// Probability that a best-responder with k uniformly drawn contacts adopts
/// +1 when a fraction zeta of the population does: the binomial tail from
/// floor(k/(2+alpha)) + 1.
double pi_k_alpha(double zeta, int k, double alpha);

/// d/dzeta of pi_k_alpha.
double pi_k_alpha_derivative(double zeta, int k, double alpha);

/// Lower summation limit floor(k/(2+alpha)) + 1.
int pi_lower_limit(int k, double alpha);

/// Interior solution of pi(zeta) = zeta, or nullopt if there is none (in
/// particular when alpha > k - 2).
std::optional<double> zeta_star(int k, double alpha);

/// Mean-field drift f(zeta) = (1-u_t) pi(zeta~) - zeta + u_t with
/// zeta~ = zeta (1+u_v)/(1+u_v zeta), the adopter-contact probability under
/// visibility bias (zeta~ = zeta when u_v = 0).
double trend_drift(const ThresholdQuery& q, double zeta);
double trend_drift_slope(const ThresholdQuery& q, double zeta);

/// Smallest u in [0,1] with f_u > 0 on the whole open interval (0,1).
/// Outer bisection on u to `tol`, inner minimization of f_u over a 10^4 point
/// grid refined by golden-section search, plus a slope test at both ends
/// where f_u touches zero.
double u_star(int k, double alpha, double tol = 1e-10, double u_v = 0.0);

/// Smallest zeta in [0,1] such that f > 0 on (zeta, 1).
double zeta_star_u(int k, double alpha, double u_t);

/// Visibility-biased variant of zeta_star_u (mean-field: zeta replaced by the
/// biased contact probability inside pi).
double zeta_star_uv(int k, double alpha, double u_t, double u_v);

/// Every pure profile in which each agent's action is a best response
/// (ties count). Profiles are ordered by their bitmask (bit i set = +1).
/// Throws SizeError for n > 20.
std::vector<std::vector<int>> find_nash_bruteforce(const Graph& g, const ActionGame& game);

} // namespace cd
