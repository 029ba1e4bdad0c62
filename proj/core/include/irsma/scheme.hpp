#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irsma/config.hpp"

namespace irsma {

enum class SchemeId {
    proposed,
    fixed_configuration,
    sixdma_firs,
    rirs_only,
    rotatable_firs,
    positionable_firs,
    de_ssca,
    low_complexity,
};

std::string_view scheme_name(SchemeId id);
std::optional<SchemeId> parse_scheme(std::string_view name);
const std::vector<SchemeId>& all_schemes();

/// Which long-timescale variables a scheme optimizes; v and W are always optimized.
struct SchemeRestriction {
    bool q = true;
    bool psi = true;
    bool phi = true;
};

SchemeRestriction restriction(SchemeId id);

struct ResultRecord {
    std::string scheme;
    std::uint64_t seed = 0;
    std::string axis;
    double axis_value = 0.0;
    std::size_t users = 0;
    std::size_t antennas = 0;
    std::size_t elements = 0;
    double rate_mean = 0.0;     // bps/Hz on the test batch
    double rate_se = 0.0;
    std::size_t test_samples = 0;
    double objective = 0.0;     // DE fitness (K > 1) or expected gain (K = 1)
    double psi = 0.0;
    double phi = 0.0;
    std::vector<double> q;
    bool converged = true;      // every inner solver met its tolerance
    std::string config_hash;
};

/// Optional per-iteration traces filled by run_scheme.
struct SchemeTraces {
    std::vector<double> de_best;   // outer DE best fitness per generation
    std::vector<double> surrogate; // SSCA surrogate of the final inner solve
};

/// Draws users and S-CSI from `seed`, optimizes under the scheme's restriction
/// and scores the result on a test batch from a stream not used during
/// optimization.
ResultRecord run_scheme(const ExperimentConfig& config, SchemeId scheme, std::uint64_t seed,
                        SchemeTraces* traces = nullptr);

/// SSCA at the centered ULA with zero rotations for the scenario of `seed`.
InnerResult baseline_ssca(const ExperimentConfig& config, std::uint64_t seed);

/// The S-CSI realization used by run_scheme for `seed`.
StatisticalCsi scenario_scsi(const ExperimentConfig& config, std::uint64_t seed);

} // namespace irsma
