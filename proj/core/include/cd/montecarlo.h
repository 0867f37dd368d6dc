#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cd/dynamics.h"

namespace cd {

/// A run counts as changed once zeta >= threshold for `sustain` consecutive
/// recorded steps, or when it is absorbed at zeta >= threshold.
struct ChangeCriterion {
	double threshold = 1.0;
	std::size_t sustain = 1;
};

/// First step of the sustained window, if the run changed.
std::optional<std::size_t> change_time(const Trajectory& traj, const ChangeCriterion& criterion);

struct EnsembleResult {
	std::size_t runs = 0;
	std::uint64_t master_seed = 0;
	std::vector<std::uint64_t> seeds;
	/// Per-step envelope of zeta(t); runs that stopped early are extended
	/// with their final value.
	std::vector<double> q025, q500, q975, mean;
	std::vector<std::optional<std::size_t>> change_times;
	double change_probability = 0.0;
	/// Mean change time over changed runs.
	std::optional<double> mean_change_time;
};

/// Linear-interpolation quantile of an ascending-sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q);

/// Runs `runs` independent simulations; run r uses derive_seed(master_seed, r).
/// `threads` = 0 uses the hardware concurrency. Results do not depend on it.
EnsembleResult run_ensemble(const SimulationConfig& config, std::size_t runs, std::uint64_t master_seed,
                            const ChangeCriterion& criterion = {}, unsigned threads = 1);

struct ThresholdProbe {
	double zeta0 = 0.0;
	double frequency = 0.0;
};

struct ThresholdEstimate {
	double estimate = 0.0;
	/// Probed zeta0 values whose frequency is within 3 binomial standard
	/// errors of 1/2, hulled with the final bisection bracket.
	double band_lo = 0.0;
	double band_hi = 0.0;
	std::vector<ThresholdProbe> probes;
	bool monotone = true;
};

/// Bisection on initial.zeta0 for the smallest value whose empirical change
/// frequency reaches 1/2. Every probe reuses the same run seeds.
ThresholdEstimate estimate_change_threshold(const SimulationConfig& config, std::size_t runs_per_probe,
                                            double tol, std::uint64_t master_seed,
                                            const ChangeCriterion& criterion = {}, unsigned threads = 1,
                                            double lo = 0.0, double hi = 1.0);

} // namespace cd
