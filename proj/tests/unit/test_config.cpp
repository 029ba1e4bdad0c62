#include <gtest/gtest.h>

#include <sstream>

#include "irsma/config.hpp"

using namespace irsma;

TEST(Dbm, Conversions)
{
    EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
    EXPECT_NEAR(dbm_to_watts(-40.0), 1e-7, 1e-22);
    for (double x : {-73.5, -40.0, 0.0, 12.25, 30.0, 47.0})
        EXPECT_NEAR(watts_to_dbm(dbm_to_watts(x)), x, 1e-12);
    EXPECT_THROW(watts_to_dbm(0.0), std::invalid_argument);
}

TEST(Config, DefaultsMatchEvaluationSetup)
{
    const ExperimentConfig c;
    EXPECT_EQ(c.system.antennas, 10u);
    EXPECT_EQ(c.layout().size(), 200u);
    EXPECT_EQ(c.system.users, 4u);
    EXPECT_EQ(c.system.power_dbm, 30.0);
    EXPECT_EQ(c.system.noise_dbm, -40.0);
    EXPECT_EQ(c.algorithm.de.population, 50u);
    EXPECT_EQ(c.algorithm.de.generations, 50u);
    EXPECT_EQ(c.algorithm.de.mutation, 0.6);
    EXPECT_EQ(c.algorithm.de.crossover, 0.9);
    EXPECT_EQ(c.algorithm.de.penalty, 1000.0);
    EXPECT_EQ(c.algorithm.ssca.batch, 50u);
    EXPECT_EQ(c.algorithm.ssca.tau, 0.015);
    EXPECT_EQ(c.radio().wavelength(), 0.05);
    // movement region is three ULA apertures
    EXPECT_NEAR(c.regions().q.width(), 3.0 * 9 * 0.025, 1e-15);
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, DeskProfile)
{
    const ExperimentConfig d = ExperimentConfig::desk();
    EXPECT_EQ(d.system.antennas, 6u);
    EXPECT_EQ(d.layout().size(), 32u);
    EXPECT_EQ(d.system.users, 3u);
    EXPECT_EQ(d.algorithm.ssca.batch, 20u);
    EXPECT_EQ(d.run.seeds, 10u);
    EXPECT_NO_THROW(d.validate());
}

TEST(Config, IniRoundTrip)
{
    ExperimentConfig c = ExperimentConfig::desk();
    c.set("system.power_dbm=17.5");
    c.set("run.points=10,20,35");
    c.set("search.proposed_inner=ssca");
    c.set("run.seed=18446744073709551615");
    std::istringstream in(c.to_ini());
    const ExperimentConfig back = ExperimentConfig::parse(in, false, ExperimentConfig{});
    EXPECT_EQ(back.to_ini(), c.to_ini());
    EXPECT_EQ(back.hash(), c.hash());
    EXPECT_EQ(back.run.points, (std::vector<double>{10, 20, 35}));
    EXPECT_EQ(back.algorithm.proposed_inner, InnerKind::ssca);
    EXPECT_EQ(back.run.seed, 18446744073709551615ull);
}

TEST(Config, JsonInput)
{
    std::istringstream in(R"({"system": {"antennas": 8, "users": 2}, "run": {"points": [1, 2]}})");
    const ExperimentConfig c = ExperimentConfig::parse(in, true, ExperimentConfig{});
    EXPECT_EQ(c.system.antennas, 8u);
    EXPECT_EQ(c.system.users, 2u);
    EXPECT_EQ(c.run.points, (std::vector<double>{1, 2}));
    EXPECT_EQ(c.system.irs_nx, 20u);
}

TEST(Config, SetAndErrors)
{
    ExperimentConfig c;
    c.set("de.population = 12");
    EXPECT_EQ(c.algorithm.de.population, 12u);
    c.set("sdp.refine=off");
    EXPECT_FALSE(c.algorithm.refine);
    EXPECT_THROW(c.set("de.nonsense=1"), std::invalid_argument);
    EXPECT_THROW(c.set("de.population"), std::invalid_argument);
    EXPECT_THROW(c.set("de.population=abc"), std::invalid_argument);
    EXPECT_THROW(c.set("sdp.refine=maybe"), std::invalid_argument);
    std::istringstream bad("[system]\nantenas = 3\n");
    EXPECT_THROW(ExperimentConfig::parse(bad, false, c), std::invalid_argument);
}

TEST(Config, ValidateRejects)
{
    ExperimentConfig c;
    c.system.region_scale = 0.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.algorithm.ssca.tau = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.algorithm.de.population = 2;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.system.users = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, HashIgnoresThreads)
{
    ExperimentConfig a, b;
    b.run.threads = 7;
    EXPECT_EQ(a.hash(), b.hash());
    b.system.power_dbm = 31.0;
    EXPECT_NE(a.hash(), b.hash());
}
