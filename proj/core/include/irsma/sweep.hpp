#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irsma/config.hpp"
#include "irsma/scheme.hpp"

namespace irsma {

/// Sweep axes: power (P_t in dBm), elements (N; columns change, rows fixed),
/// paths (L on every link), aperture (movement region / ULA aperture).
bool is_axis(const std::string& axis);
double axis_value(const ExperimentConfig& config, const std::string& axis);
ExperimentConfig apply_axis(const ExperimentConfig& config, const std::string& axis, double value);

/// config.run.seed, config.run.seed + 1, ...
std::vector<std::uint64_t> seed_list(const ExperimentConfig& config);

struct SweepRequest {
    std::vector<SchemeId> schemes;
    std::string axis = "power";
    std::vector<double> points;       // empty: the config's own value
    std::vector<std::uint64_t> seeds;
    std::size_t threads = 1;
};

/// One record per (scheme, point, seed), ordered by scheme, then point, then
/// seed regardless of completion order.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& config, const SweepRequest& request);

} // namespace irsma
