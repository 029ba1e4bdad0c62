#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "irsma/differential_evolution.hpp"

using namespace irsma;

namespace {

constexpr double kD = 0.025;

double sphere(const RVec& x) { return -x.squaredNorm(); }

} // namespace

TEST(DeParams, Validation)
{
    DeParams p;
    EXPECT_NO_THROW(p.validate());
    p.population = 3;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.mutation = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.crossover = 1.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.penalty = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Bounds, ClampAndPin)
{
    Bounds b = Bounds::uniform(3, -1.0, 1.0);
    b.lo[2] = b.hi[2] = 0.5;
    RVec x(3);
    x << -3.0, 0.2, 9.0;
    const RVec c = b.clamp(x);
    EXPECT_EQ(c[0], -1.0);
    EXPECT_EQ(c[1], 0.2);
    EXPECT_EQ(c[2], 0.5);
    b.lo[0] = 2.0;
    EXPECT_THROW(b.validate(), std::invalid_argument);
}

TEST(DeInitialize, SortedInsideBounds)
{
    const Bounds b = Bounds::uniform(5, -0.1, 0.1);
    DeParams p;
    p.population = 20;
    Rng rng(1);
    RVec seed(5);
    seed << 0.0, 0.2, -0.2, 0.01, 0.02;
    const DePopulation pop = de_initialize(b, p, rng, sequential_fitness(sphere), 5, {seed});
    ASSERT_EQ(pop.size(), 20u);
    for (const RVec& x : pop.individuals) {
        EXPECT_GE(x.minCoeff(), -0.1);
        EXPECT_LE(x.maxCoeff(), 0.1);
        EXPECT_TRUE(std::is_sorted(x.begin(), x.end()));
    }
    EXPECT_DOUBLE_EQ(pop.individuals[0].maxCoeff(), 0.1);
    for (std::size_t i = 0; i < pop.size(); ++i)
        EXPECT_LE(pop.fitness[i], pop.best_fitness());
}

TEST(DeStep, ZeroMutationFlatFitnessKeepsPopulation)
{
    const Bounds b = Bounds::uniform(3, 0.0, 1.0);
    DeParams p;
    p.population = 8;
    Rng rng(2);
    const auto flat = sequential_fitness([](const RVec&) { return 1.0; });
    const DePopulation pop = de_initialize(b, p, rng, flat);
    p.mutation = 0.0;
    // validate() rejects F = 0, but de_step itself only mixes vectors.
    const DePopulation next = de_step(pop, p, b, rng, flat);
    for (std::size_t i = 0; i < pop.size(); ++i)
        EXPECT_EQ(next.individuals[i], pop.individuals[i]);
}

TEST(DeStep, BestNeverDecreasesAndStaysInBounds)
{
    const Bounds b = Bounds::uniform(4, -2.0, 3.0);
    DeParams p;
    p.population = 4; // smallest population with distinct r1, r2, p
    Rng rng(3);
    const auto f = sequential_fitness(sphere);
    DePopulation pop = de_initialize(b, p, rng, f);
    double best = pop.best_fitness();
    for (int s = 0; s < 60; ++s) {
        pop = de_step(pop, p, b, rng, f);
        EXPECT_GE(pop.best_fitness(), best);
        best = pop.best_fitness();
        for (const RVec& x : pop.individuals) {
            EXPECT_GE(x.minCoeff(), -2.0);
            EXPECT_LE(x.maxCoeff(), 3.0);
        }
    }
}

TEST(RunDe, TraceMonotoneAndConverges)
{
    const Bounds b = Bounds::uniform(3, -1.0, 1.0);
    DeParams p;
    p.population = 20;
    p.generations = 80;
    Rng rng(4);
    const DeRun r = run_de(b, p, rng, sequential_fitness(sphere));
    ASSERT_EQ(r.best_trace.size(), 81u);
    for (std::size_t i = 1; i < r.best_trace.size(); ++i)
        EXPECT_GE(r.best_trace[i], r.best_trace[i - 1]);
    EXPECT_GT(r.population.best_fitness(), -1e-2);
}

TEST(RunDe, SameSeedSameResult)
{
    const Bounds b = Bounds::uniform(3, -1.0, 1.0);
    DeParams p;
    p.population = 10;
    p.generations = 10;
    Rng a(5), c(5);
    EXPECT_EQ(run_de(b, p, a, sequential_fitness(sphere)).best_trace,
              run_de(b, p, c, sequential_fitness(sphere)).best_trace);
}

TEST(Spacing, PenaltyArithmetic)
{
    RVec q(2);
    q << 0.0, kD / 2;
    EXPECT_EQ(violating_pairs(q, kD).size(), 1u);
    EXPECT_NEAR(spacing_deficit(q, kD), kD / 2, 1e-15);
    EXPECT_NEAR(spacing_penalty(q, kD, 1000.0), 1000.0 * kD / 2, 1e-12);
    q << 0.0, kD;
    EXPECT_EQ(spacing_penalty(q, kD, 1000.0), 0.0);
    RVec r(3);
    r << 0.0, 0.01, 0.02; // pairs (0,1), (1,2), (0,2)
    EXPECT_EQ(violating_pairs(r, kD).size(), 3u);
    const double deficit = (kD - 0.01) * 2 + (kD - 0.02);
    EXPECT_NEAR(spacing_penalty(r, kD, 10.0), 10.0 * deficit * 3, 1e-12);
}

TEST(Spacing, RepairMakesFeasible)
{
    Rng rng(6);
    const Interval region{-0.1, 0.1};
    for (int i = 0; i < 50; ++i) {
        RVec q(6);
        for (auto& x : q)
            x = rng.uniform(region.lo, region.hi);
        const RVec r = repair_spacing(q, kD, region);
        EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
        EXPECT_TRUE(violating_pairs(r, kD - 1e-12).empty());
        EXPECT_GE(r.minCoeff(), region.lo - 1e-12);
        EXPECT_LE(r.maxCoeff(), region.hi + 1e-12);
    }
    EXPECT_THROW(repair_spacing(RVec::Zero(10), kD, region), std::invalid_argument);
}
