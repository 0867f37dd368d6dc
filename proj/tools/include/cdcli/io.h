#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cd/dynamics.h"
#include "cd/montecarlo.h"

namespace cdcli {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Canonical serialization used for hashing and for written JSON files.
std::string dump_json(const nlohmann::json& j);

void write_file(const std::filesystem::path& path, std::string_view content);

/// `t,zeta[,x_0..x_{n-1}][,y_0..y_{n-1}]`. Without snapshots every step is a
/// row; with snapshots only the snapshot steps are.
std::string trajectory_csv(const cd::Trajectory& traj, bool with_opinions);

/// `t,q025,q500,q975,mean_zeta`.
std::string envelope_csv(const cd::EnsembleResult& result);

struct ThresholdRow {
	int k;
	double alpha, u_t, u_v, zeta_star;
};

/// `k,alpha,u_t,u_v,zeta_star`.
std::string thresholds_csv(const std::vector<ThresholdRow>& rows);

struct UStarRow {
	int k;
	double alpha, u_v, u_star;
};

/// `k,alpha,u_v,u_star`.
std::string u_star_csv(const std::vector<UStarRow>& rows);

} // namespace cdcli
