#include "cdcli/io.h"

#include <fstream>

#include <fmt/format.h>

#include "cd/errors.h"

namespace cdcli {

std::string format_number(double v) {
	if (v == 0.0)
		return "0";
	return fmt::format("{}", v);
}

std::string fnv1a_hex(std::string_view bytes) {
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char c : bytes) {
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return fmt::format("{:016x}", h);
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, std::string_view content) {
	std::error_code ec;
	if (path.has_parent_path())
		std::filesystem::create_directories(path.parent_path(), ec);
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out)
		throw cd::FileError("cannot write " + path.string());
	out.write(content.data(), static_cast<std::streamsize>(content.size()));
	if (!out)
		throw cd::FileError("write failed: " + path.string());
}

std::string trajectory_csv(const cd::Trajectory& traj, bool with_opinions) {
	const bool snapshots = !traj.snapshot_times.empty();
	const std::size_t n = snapshots ? traj.x_snapshots.front().size() : 0;
	fmt::memory_buffer buf;
	fmt::format_to(std::back_inserter(buf), "t,zeta");
	if (snapshots) {
		for (std::size_t i = 0; i < n; ++i)
			fmt::format_to(std::back_inserter(buf), ",x_{}", i);
		if (with_opinions)
			for (std::size_t i = 0; i < n; ++i)
				fmt::format_to(std::back_inserter(buf), ",y_{}", i);
	}
	buf.push_back('\n');
	if (!snapshots) {
		for (std::size_t t = 0; t < traj.zeta.size(); ++t)
			fmt::format_to(std::back_inserter(buf), "{},{}\n", t, format_number(traj.zeta[t]));
	} else {
		for (std::size_t s = 0; s < traj.snapshot_times.size(); ++s) {
			const std::size_t t = traj.snapshot_times[s];
			fmt::format_to(std::back_inserter(buf), "{},{}", t, format_number(traj.zeta[t]));
			for (int x : traj.x_snapshots[s])
				fmt::format_to(std::back_inserter(buf), ",{}", x);
			if (with_opinions)
				for (double y : traj.y_snapshots[s])
					fmt::format_to(std::back_inserter(buf), ",{}", format_number(y));
			buf.push_back('\n');
		}
	}
	return fmt::to_string(buf);
}

std::string envelope_csv(const cd::EnsembleResult& r) {
	fmt::memory_buffer buf;
	fmt::format_to(std::back_inserter(buf), "t,q025,q500,q975,mean_zeta\n");
	for (std::size_t t = 0; t < r.mean.size(); ++t)
		fmt::format_to(std::back_inserter(buf), "{},{},{},{},{}\n", t, format_number(r.q025[t]),
		               format_number(r.q500[t]), format_number(r.q975[t]), format_number(r.mean[t]));
	return fmt::to_string(buf);
}

std::string thresholds_csv(const std::vector<ThresholdRow>& rows) {
	fmt::memory_buffer buf;
	fmt::format_to(std::back_inserter(buf), "k,alpha,u_t,u_v,zeta_star\n");
	for (const auto& r : rows)
		fmt::format_to(std::back_inserter(buf), "{},{},{},{},{}\n", r.k, format_number(r.alpha),
		               format_number(r.u_t), format_number(r.u_v), format_number(r.zeta_star));
	return fmt::to_string(buf);
}

std::string u_star_csv(const std::vector<UStarRow>& rows) {
	fmt::memory_buffer buf;
	fmt::format_to(std::back_inserter(buf), "k,alpha,u_v,u_star\n");
	for (const auto& r : rows)
		fmt::format_to(std::back_inserter(buf), "{},{},{},{}\n", r.k, format_number(r.alpha),
		               format_number(r.u_v), format_number(r.u_star));
	return fmt::to_string(buf);
}

} // namespace cdcli
