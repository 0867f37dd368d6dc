#include "cd/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "cd/errors.h"

namespace cd {

std::optional<std::size_t> change_time(const Trajectory& traj, const ChangeCriterion& criterion) {
	const std::size_t need = std::max<std::size_t>(criterion.sustain, 1);
	std::size_t streak = 0;
	for (std::size_t t = 0; t < traj.zeta.size(); ++t) {
		streak = traj.zeta[t] >= criterion.threshold ? streak + 1 : 0;
		if (streak >= need)
			return t + 1 - need;
	}
	// Absorbed runs stay at their final value forever.
	if (streak > 0 && traj.absorbed_at)
		return traj.zeta.size() - streak;
	return std::nullopt;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
	if (sorted.empty())
		throw DomainError("quantile of empty sample");
	const double pos = q * static_cast<double>(sorted.size() - 1);
	const auto lo = static_cast<std::size_t>(std::floor(pos));
	const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
	const double frac = pos - static_cast<double>(lo);
	return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

/// Calls fn(r) for r in [0, count) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
	if (threads == 0)
		threads = std::max(1U, std::thread::hardware_concurrency());
	threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
	if (threads <= 1) {
		for (std::size_t r = 0; r < count; ++r)
			fn(r);
		return;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr failure;
	std::mutex failure_mutex;
	std::vector<std::thread> pool;
	for (unsigned w = 0; w < threads; ++w)
		pool.emplace_back([&] {
			for (std::size_t r; (r = next.fetch_add(1)) < count;) {
				try {
					fn(r);
				} catch (...) {
					std::lock_guard lock(failure_mutex);
					if (!failure)
						failure = std::current_exception();
				}
			}
		});
	for (auto& t : pool)
		t.join();
	if (failure)
		std::rethrow_exception(failure);
}

} // namespace

EnsembleResult run_ensemble(const SimulationConfig& config, std::size_t runs, std::uint64_t master_seed,
                            const ChangeCriterion& criterion, unsigned threads) {
	if (runs == 0)
		throw DomainError("ensemble needs at least one run");
	config.validate();

	EnsembleResult result;
	result.runs = runs;
	result.master_seed = master_seed;
	result.seeds.resize(runs);
	for (std::size_t r = 0; r < runs; ++r)
		result.seeds[r] = derive_seed(master_seed, r);

	std::vector<std::vector<double>> series(runs);
	result.change_times.resize(runs);
	parallel_for(runs, threads, [&](std::size_t r) {
		Trajectory traj = simulate(config, result.seeds[r]);
		result.change_times[r] = change_time(traj, criterion);
		series[r] = std::move(traj.zeta);
	});

	std::size_t length = 0;
	for (const auto& s : series)
		length = std::max(length, s.size());
	result.q025.resize(length);
	result.q500.resize(length);
	result.q975.resize(length);
	result.mean.resize(length);
	std::vector<double> column(runs);
	for (std::size_t t = 0; t < length; ++t) {
		double sum = 0.0;
		for (std::size_t r = 0; r < runs; ++r) {
			column[r] = t < series[r].size() ? series[r][t] : series[r].back();
			sum += column[r];
		}
		result.mean[t] = sum / static_cast<double>(runs);
		std::sort(column.begin(), column.end());
		result.q025[t] = quantile_sorted(column, 0.025);
		result.q500[t] = quantile_sorted(column, 0.5);
		result.q975[t] = quantile_sorted(column, 0.975);
	}

	std::size_t changed = 0;
	double time_sum = 0.0;
	for (const auto& ct : result.change_times)
		if (ct) {
			++changed;
			time_sum += static_cast<double>(*ct);
		}
	result.change_probability = static_cast<double>(changed) / static_cast<double>(runs);
	if (changed > 0)
		result.mean_change_time = time_sum / static_cast<double>(changed);
	return result;
}

ThresholdEstimate estimate_change_threshold(const SimulationConfig& config, std::size_t runs_per_probe,
                                            double tol, std::uint64_t master_seed,
                                            const ChangeCriterion& criterion, unsigned threads, double lo,
                                            double hi) {
	if (runs_per_probe == 0)
		throw DomainError("threshold estimation needs at least one run per probe");
	if (!(tol > 0.0))
		throw DomainError("tolerance must be positive");
	if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
		throw DomainError("probe bracket must satisfy 0 <= lo < hi <= 1");

	ThresholdEstimate est;
	SimulationConfig probe_config = config;
	auto frequency = [&](double zeta0) {
		probe_config.initial.zeta0 = zeta0;
		probe_config.initial.explicit_adopters = false;
		const auto result = run_ensemble(probe_config, runs_per_probe, master_seed, criterion, threads);
		est.probes.push_back({zeta0, result.change_probability});
		return result.change_probability;
	};

	if (frequency(lo) >= 0.5) {
		hi = lo;
	} else if (frequency(hi) < 0.5) {
		spdlog::warn("change frequency stays below 1/2 up to zeta0 = {}", hi);
		lo = hi;
	} else {
		while (hi - lo > tol) {
			const double mid = 0.5 * (lo + hi);
			(frequency(mid) >= 0.5 ? hi : lo) = mid;
		}
	}
	est.estimate = 0.5 * (lo + hi);

	const double se = std::sqrt(0.25 / static_cast<double>(runs_per_probe));
	est.band_lo = lo;
	est.band_hi = hi;
	for (const auto& p : est.probes)
		if (std::abs(p.frequency - 0.5) <= 3.0 * se) {
			est.band_lo = std::min(est.band_lo, p.zeta0);
			est.band_hi = std::max(est.band_hi, p.zeta0);
		}

	auto sorted = est.probes;
	std::sort(sorted.begin(), sorted.end(),
	          [](const ThresholdProbe& a, const ThresholdProbe& b) { return a.zeta0 < b.zeta0; });
	double running_max = 0.0;
	for (const auto& p : sorted) {
		if (p.frequency < running_max - 3.0 * std::sqrt(2.0) * se)
			est.monotone = false;
		running_max = std::max(running_max, p.frequency);
	}
	if (!est.monotone)
		spdlog::warn("change frequency is not monotone in zeta0 beyond binomial noise");
	return est;
}

} // namespace cd
