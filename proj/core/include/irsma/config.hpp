#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "irsma/channel_model.hpp"
#include "irsma/differential_evolution.hpp"
#include "irsma/multi_user.hpp"
#include "irsma/single_user.hpp"

namespace irsma {

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

struct SystemConfig {
    std::size_t antennas = 10;
    std::size_t irs_nx = 20;
    std::size_t irs_ny = 10;
    double carrier_hz = 6e9;
    std::size_t users = 4;
    PathCounts paths;
    double power_dbm = 30.0;
    double noise_dbm = -40.0;
    double region_scale = 3.0;    // movement region / ULA aperture
    double psi_limit_deg = 30.0;  // C_psi = [-limit, limit]
    double phi_limit_deg = 30.0;
    double nlos_power_ratio = 1.0;
};

struct AlgorithmConfig {
    DeParams de;
    bool seed_baseline = false;
    SscaOptions ssca;
    bool warm_start = false;
    WmmseOptions wmmse;
    SdpOptions sdp;
    std::size_t randomizations = 100;
    bool refine = true;
    std::size_t psi_points = 61;
    std::size_t phi_points = 61;
    InnerKind proposed_inner = InnerKind::scg;
};

struct RunConfig {
    std::string scheme = "proposed";
    std::uint64_t seed = 1;
    std::size_t seeds = 1;          // S-CSI realizations per point
    std::size_t test_samples = 500;
    std::size_t threads = 1;
    std::string axis = "power";
    std::vector<double> points;     // empty: the config value only
};

struct ExperimentConfig {
    SystemConfig system;
    NodeGeometry geometry = NodeGeometry::standard();
    AlgorithmConfig algorithm;
    RunConfig run;

    /// Reduced profile for single-machine runs: M = 6, N = 8 x 4, K = 3,
    /// T_H = 20, 10 seeds, smaller DE budget.
    static ExperimentConfig desk();

    RadioContext radio() const { return RadioContext::from_carrier(system.carrier_hz); }
    IrsLayout layout() const;
    ConfigRegions regions() const;
    double power_watts() const { return dbm_to_watts(system.power_dbm); }
    double noise_watts() const { return dbm_to_watts(system.noise_dbm); }

    void validate() const;

    /// Reads key = value pairs (INI sections) or JSON, chosen by extension
    /// (.json) or, for streams, by the first non-blank character.
    static ExperimentConfig load(const std::string& path, const ExperimentConfig& base);
    static ExperimentConfig parse(std::istream& is, bool json, const ExperimentConfig& base);

    /// Applies "section.key=value".
    void set(const std::string& assignment);

    /// Canonical INI text; equal configs produce equal text.
    std::string to_ini() const;
    /// FNV-1a over every key except run.threads, hex.
    std::string hash() const;
};

} // namespace irsma
