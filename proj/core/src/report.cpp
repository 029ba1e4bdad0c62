#include "irsma/report.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace irsma {

namespace {

std::string num(double x)
{
    return fmt::format("{:.12g}", x);
}

void header(std::ostream& os, const std::vector<std::string>& cols)
{
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << '\n';
}

} // namespace

const std::vector<std::string>& results_columns()
{
    static const std::vector<std::string> cols{"scheme",   "seed",      "axis",         "axis_value",
                                               "users",    "antennas",  "elements",     "rate_mean",
                                               "rate_se",  "test_samples", "objective", "psi",
                                               "phi",      "q",         "converged",    "config_hash"};
    return cols;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRecord>& records)
{
    header(os, results_columns());
    for (const auto& r : records) {
        std::string q;
        for (std::size_t i = 0; i < r.q.size(); ++i)
            q += (i ? ";" : "") + num(r.q[i]);
        os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.scheme, r.seed, r.axis,
                          num(r.axis_value), r.users, r.antennas, r.elements, num(r.rate_mean), num(r.rate_se),
                          r.test_samples, num(r.objective), num(r.psi), num(r.phi), q, r.converged ? 1 : 0,
                          r.config_hash);
    }
}

const std::vector<std::string>& summary_columns()
{
    static const std::vector<std::string> cols{"scheme", "axis", "axis_value", "seeds", "rate_mean", "rate_se"};
    return cols;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records)
{
    std::vector<SummaryRow> rows;
    std::vector<std::vector<double>> samples;
    for (const auto& r : records) {
        std::size_t g = 0;
        while (g < rows.size() && !(rows[g].scheme == r.scheme && rows[g].axis_value == r.axis_value))
            ++g;
        if (g == rows.size()) {
            rows.push_back({r.scheme, r.axis, r.axis_value, 0, 0.0, 0.0});
            samples.emplace_back();
        }
        samples[g].push_back(r.rate_mean);
    }
    for (std::size_t g = 0; g < rows.size(); ++g) {
        const auto& xs = samples[g];
        const double n = static_cast<double>(xs.size());
        double mean = 0.0;
        for (double x : xs)
            mean += x / n;
        double ss = 0.0;
        for (double x : xs)
            ss += (x - mean) * (x - mean);
        rows[g].seeds = xs.size();
        rows[g].rate_mean = mean;
        rows[g].rate_se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    }
    return rows;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows)
{
    header(os, summary_columns());
    for (const auto& r : rows)
        os << fmt::format("{},{},{},{},{},{}\n", r.scheme, r.axis, num(r.axis_value), r.seeds, num(r.rate_mean),
                          num(r.rate_se));
}

const std::vector<std::string>& trace_columns()
{
    static const std::vector<std::string> cols{"kind", "scheme", "seed", "iteration", "value"};
    return cols;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows)
{
    header(os, trace_columns());
    for (const auto& r : rows)
        os << fmt::format("{},{},{},{},{}\n", r.kind, r.scheme, r.seed, r.iteration, num(r.value));
}

} // namespace irsma
