#include "irsma/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "irsma/parallel.hpp"

namespace irsma {

bool is_axis(const std::string& axis)
{
    return axis == "power" || axis == "elements" || axis == "paths" || axis == "aperture";
}

double axis_value(const ExperimentConfig& config, const std::string& axis)
{
    if (axis == "power")
        return config.system.power_dbm;
    if (axis == "elements")
        return static_cast<double>(config.system.irs_nx * config.system.irs_ny);
    if (axis == "paths")
        return static_cast<double>(config.system.paths.irs_user);
    if (axis == "aperture")
        return config.system.region_scale;
    throw std::invalid_argument("unknown sweep axis " + axis);
}

namespace {

std::size_t as_count(double value, const std::string& axis)
{
    if (!(value >= 0.0) || std::floor(value) != value)
        throw std::invalid_argument(axis + " values must be non-negative integers");
    return static_cast<std::size_t>(value);
}

} // namespace

ExperimentConfig apply_axis(const ExperimentConfig& config, const std::string& axis, double value)
{
    ExperimentConfig c = config;
    if (axis == "power") {
        c.system.power_dbm = value;
    } else if (axis == "elements") {
        const std::size_t n = as_count(value, axis);
        if (n == 0 || n % c.system.irs_ny != 0)
            throw std::invalid_argument("elements must be a positive multiple of the row count");
        c.system.irs_nx = n / c.system.irs_ny;
    } else if (axis == "paths") {
        c.system.paths = PathCounts::uniform(as_count(value, axis));
    } else if (axis == "aperture") {
        c.system.region_scale = value;
    } else {
        throw std::invalid_argument("unknown sweep axis " + axis);
    }
    return c;
}

std::vector<std::uint64_t> seed_list(const ExperimentConfig& config)
{
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < config.run.seeds; ++s)
        seeds.push_back(config.run.seed + s);
    return seeds;
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& config, const SweepRequest& request)
{
    if (!is_axis(request.axis))
        throw std::invalid_argument("unknown sweep axis " + request.axis);
    if (request.schemes.empty() || request.seeds.empty())
        throw std::invalid_argument("run_sweep: need at least one scheme and one seed");
    const std::vector<double> points =
        request.points.empty() ? std::vector<double>{axis_value(config, request.axis)} : request.points;

    struct Task {
        SchemeId scheme;
        double point;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (SchemeId s : request.schemes)
        for (double p : points)
            for (std::uint64_t seed : request.seeds)
                tasks.push_back({s, p, seed});

    const std::size_t pool = resolve_threads(request.threads);
    std::vector<ResultRecord> out(tasks.size());
    parallel_for(tasks.size(), pool, [&](std::size_t i) {
        ExperimentConfig c = apply_axis(config, request.axis, tasks[i].point);
        // Either the pool or the solver runs in parallel, not both.
        c.run.threads = pool > 1 ? 1 : config.run.threads;
        ResultRecord rec = run_scheme(c, tasks[i].scheme, tasks[i].seed);
        rec.axis = request.axis;
        rec.axis_value = tasks[i].point;
        out[i] = std::move(rec);
    });
    return out;
}

} // namespace irsma
