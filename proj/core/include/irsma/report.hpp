#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "irsma/scheme.hpp"

namespace irsma {

/// results.csv, one row per (scheme, axis value, seed):
/// scheme,seed,axis,axis_value,users,antennas,elements,rate_mean,rate_se,
/// test_samples,objective,psi,phi,q,converged,config_hash
/// q is a ';'-separated list of antenna coordinates in meters.
const std::vector<std::string>& results_columns();
void write_results_csv(std::ostream& os, const std::vector<ResultRecord>& records);

struct SummaryRow {
    std::string scheme;
    std::string axis;
    double axis_value = 0.0;
    std::size_t seeds = 0;
    double rate_mean = 0.0; // mean over seeds of the per-seed test rate
    double rate_se = 0.0;   // standard error over seeds
};

/// summary.csv: scheme,axis,axis_value,seeds,rate_mean,rate_se
const std::vector<std::string>& summary_columns();
/// Groups by (scheme, axis_value) in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

struct TraceRow {
    std::string kind;   // de_single_user | de_multi_user | ssca_surrogate
    std::string scheme;
    std::uint64_t seed = 0;
    std::size_t iteration = 0;
    double value = 0.0;
};

/// trace.csv: kind,scheme,seed,iteration,value
const std::vector<std::string>& trace_columns();
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

} // namespace irsma
