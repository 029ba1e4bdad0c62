#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "irsma/channel_model.hpp"
#include "irsma/rng.hpp"
#include "irsma/types.hpp"

namespace irsma {

struct DeParams {
    std::size_t population = 50;  // P
    std::size_t generations = 50; // S
    double mutation = 0.6;        // F
    double crossover = 0.9;       // C_R
    double penalty = 1000.0;      // eta

    void validate() const;
};

/// Per-coordinate box. A coordinate with lo == hi is pinned.
struct Bounds {
    RVec lo;
    RVec hi;

    static Bounds uniform(Eigen::Index n, double lo, double hi);
    Eigen::Index size() const { return lo.size(); }
    RVec clamp(const RVec& x) const;
    void validate() const;
};

struct DePopulation {
    std::vector<RVec> individuals;
    std::vector<double> fitness;
    std::size_t best = 0;

    const RVec& best_individual() const { return individuals[best]; }
    double best_fitness() const { return fitness[best]; }
    std::size_t size() const { return individuals.size(); }
};

/// Evaluates a batch of candidates. Implementations may run in parallel but
/// must return results in input order.
using BatchFitness = std::function<std::vector<double>(const std::vector<RVec>&)>;

BatchFitness sequential_fitness(std::function<double(const RVec&)> f);

/// Uniform population inside `bounds`; the first `sorted_prefix` coordinates of
/// every individual are sorted ascending. `seeds` (clamped) replace the first
/// random individuals.
DePopulation de_initialize(const Bounds& bounds, const DeParams& params, Rng& rng, const BatchFitness& fitness,
                           Eigen::Index sorted_prefix = 0, const std::vector<RVec>& seeds = {});

/// One generation: DE/best/1 mutation around the current best, individual-level
/// crossover (the whole mutant is taken with probability C_R, and always for one
/// randomly chosen index), clamping, then greedy selection on strict improvement.
DePopulation de_step(const DePopulation& pop, const DeParams& params, const Bounds& bounds, Rng& rng,
                     const BatchFitness& fitness);

struct DeRun {
    DePopulation population;
    std::vector<double> best_trace; // initial best, then one entry per generation
};

DeRun run_de(const Bounds& bounds, const DeParams& params, Rng& rng, const BatchFitness& fitness,
             Eigen::Index sorted_prefix = 0, const std::vector<RVec>& seeds = {});

/// Pairs (i, j), i < j, closer than the minimum spacing d.
std::vector<std::pair<std::size_t, std::size_t>> violating_pairs(const RVec& q, double min_spacing);

/// Sum of (d - |q_i - q_j|) over the violating pairs.
double spacing_deficit(const RVec& q, double min_spacing);

/// eta * deficit * (number of violating pairs).
double spacing_penalty(const RVec& q, double min_spacing, double eta);

/// Sorts q and pushes antennas apart greedily until every gap is at least d
/// while staying inside `region`. Throws if the region cannot hold the array.
RVec repair_spacing(const RVec& q, double min_spacing, const Interval& region);

} // namespace irsma
