#include "irsma/differential_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsma {

void DeParams::validate() const
{
    if (population < 4)
        throw std::invalid_argument("DE population must be at least 4");
    if (!(mutation > 0.0 && mutation <= 2.0))
        throw std::invalid_argument("DE mutation factor must lie in (0, 2]");
    if (!(crossover >= 0.0 && crossover <= 1.0))
        throw std::invalid_argument("DE crossover rate must lie in [0, 1]");
    if (!(penalty > 0.0))
        throw std::invalid_argument("DE penalty scale must be positive");
}

Bounds Bounds::uniform(Eigen::Index n, double lo, double hi)
{
    return {RVec::Constant(n, lo), RVec::Constant(n, hi)};
}

RVec Bounds::clamp(const RVec& x) const
{
    return x.cwiseMax(lo).cwiseMin(hi);
}

void Bounds::validate() const
{
    if (lo.size() != hi.size() || lo.size() == 0)
        throw std::invalid_argument("bounds must be non-empty with matching sizes");
    if ((hi - lo).minCoeff() < 0.0)
        throw std::invalid_argument("bounds have lo > hi");
}

BatchFitness sequential_fitness(std::function<double(const RVec&)> f)
{
    return [f = std::move(f)](const std::vector<RVec>& xs) {
        std::vector<double> out;
        out.reserve(xs.size());
        for (const auto& x : xs)
            out.push_back(f(x));
        return out;
    };
}

namespace {

std::size_t argmax(const std::vector<double>& v)
{
    // first maximum wins, which keeps ties deterministic
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::vector<double> evaluate(const BatchFitness& fitness, const std::vector<RVec>& xs)
{
    std::vector<double> f = fitness(xs);
    if (f.size() != xs.size())
        throw std::logic_error("fitness batch returned the wrong number of values");
    return f;
}

} // namespace

DePopulation de_initialize(const Bounds& bounds, const DeParams& params, Rng& rng, const BatchFitness& fitness,
                           Eigen::Index sorted_prefix, const std::vector<RVec>& seeds)
{
    params.validate();
    bounds.validate();
    const Eigen::Index n = bounds.size();
    sorted_prefix = std::clamp<Eigen::Index>(sorted_prefix, 0, n);

    DePopulation pop;
    pop.individuals.reserve(params.population);
    for (std::size_t p = 0; p < params.population; ++p) {
        RVec x(n);
        for (Eigen::Index j = 0; j < n; ++j)
            x[j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
        std::sort(x.data(), x.data() + sorted_prefix);
        pop.individuals.push_back(std::move(x));
    }
    for (std::size_t s = 0; s < seeds.size() && s < params.population; ++s) {
        if (seeds[s].size() != n)
            throw std::invalid_argument("DE seed individual has the wrong dimension");
        pop.individuals[s] = bounds.clamp(seeds[s]);
        std::sort(pop.individuals[s].data(), pop.individuals[s].data() + sorted_prefix);
    }
    pop.fitness = evaluate(fitness, pop.individuals);
    pop.best = argmax(pop.fitness);
    return pop;
}

DePopulation de_step(const DePopulation& pop, const DeParams& params, const Bounds& bounds, Rng& rng,
                     const BatchFitness& fitness)
{
    const std::size_t P = pop.size();
    if (P < 4 || pop.fitness.size() != P)
        throw std::invalid_argument("de_step: population must hold at least 4 scored individuals");
    const RVec& best = pop.best_individual();
    const std::size_t forced = static_cast<std::size_t>(rng.below(P));

    std::vector<RVec> trials;
    trials.reserve(P);
    for (std::size_t p = 0; p < P; ++p) {
        std::size_t r1 = static_cast<std::size_t>(rng.below(P - 1));
        if (r1 >= p)
            ++r1;
        std::size_t r2 = static_cast<std::size_t>(rng.below(P - 2));
        const std::size_t lo = std::min(p, r1);
        const std::size_t hi = std::max(p, r1);
        if (r2 >= lo)
            ++r2;
        if (r2 >= hi)
            ++r2;
        const bool take_mutant = rng.uniform() < params.crossover || p == forced;
        if (take_mutant) {
            const RVec mutant = best + params.mutation * (pop.individuals[r1] - pop.individuals[r2]);
            trials.push_back(bounds.clamp(mutant));
        } else {
            trials.push_back(pop.individuals[p]);
        }
    }

    const std::vector<double> trial_fitness = evaluate(fitness, trials);
    DePopulation next = pop;
    for (std::size_t p = 0; p < P; ++p) {
        if (trial_fitness[p] > pop.fitness[p]) {
            next.individuals[p] = std::move(trials[p]);
            next.fitness[p] = trial_fitness[p];
        }
    }
    next.best = argmax(next.fitness);
    return next;
}

DeRun run_de(const Bounds& bounds, const DeParams& params, Rng& rng, const BatchFitness& fitness,
             Eigen::Index sorted_prefix, const std::vector<RVec>& seeds)
{
    DeRun run;
    run.population = de_initialize(bounds, params, rng, fitness, sorted_prefix, seeds);
    run.best_trace.reserve(params.generations + 1);
    run.best_trace.push_back(run.population.best_fitness());
    for (std::size_t s = 0; s < params.generations; ++s) {
        run.population = de_step(run.population, params, bounds, rng, fitness);
        run.best_trace.push_back(run.population.best_fitness());
    }
    return run;
}

namespace {

// Relative slack so that exact-d layouts built in floating point are not flagged.
constexpr double kSpacingSlack = 1e-12;

} // namespace

std::vector<std::pair<std::size_t, std::size_t>> violating_pairs(const RVec& q, double min_spacing)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto M = static_cast<std::size_t>(q.size());
    const double limit = min_spacing * (1.0 - kSpacingSlack);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = i + 1; j < M; ++j)
            if (std::abs(q[static_cast<Eigen::Index>(i)] - q[static_cast<Eigen::Index>(j)]) < limit)
                out.emplace_back(i, j);
    return out;
}

double spacing_deficit(const RVec& q, double min_spacing)
{
    double sum = 0.0;
    for (const auto& [i, j] : violating_pairs(q, min_spacing))
        sum += min_spacing - std::abs(q[static_cast<Eigen::Index>(i)] - q[static_cast<Eigen::Index>(j)]);
    return sum;
}

double spacing_penalty(const RVec& q, double min_spacing, double eta)
{
    const auto pairs = violating_pairs(q, min_spacing);
    if (pairs.empty())
        return 0.0;
    double deficit = 0.0;
    for (const auto& [i, j] : pairs)
        deficit += min_spacing - std::abs(q[static_cast<Eigen::Index>(i)] - q[static_cast<Eigen::Index>(j)]);
    return eta * deficit * static_cast<double>(pairs.size());
}

RVec repair_spacing(const RVec& q, double min_spacing, const Interval& region)
{
    const Eigen::Index M = q.size();
    if (M == 0)
        return q;
    if (region.width() < static_cast<double>(M - 1) * min_spacing * (1.0 - kSpacingSlack))
        throw std::invalid_argument("repair_spacing: region too small for the array");
    RVec out = q;
    std::sort(out.data(), out.data() + M);
    for (Eigen::Index m = 0; m < M; ++m)
        out[m] = region.clamp(out[m]);
    for (Eigen::Index m = 1; m < M; ++m)
        out[m] = std::max(out[m], out[m - 1] + min_spacing);
    if (out[M - 1] > region.hi) {
        out[M - 1] = region.hi;
        for (Eigen::Index m = M - 2; m >= 0; --m)
            out[m] = std::min(out[m], out[m + 1] - min_spacing);
    }
    // Rounding can leave the first element a hair below the region.
    out[0] = std::max(out[0], region.lo);
    return out;
}

} // namespace irsma
