#include <gtest/gtest.h>

#include <sstream>

#include "irsma/report.hpp"
#include "irsma/scheme.hpp"
#include "irsma/sweep.hpp"
#include "oracles.hpp"

using namespace irsma;

namespace {

ExperimentConfig tiny(std::size_t users)
{
    ExperimentConfig c = ExperimentConfig::desk();
    c.system.antennas = 3;
    c.system.irs_nx = 4;
    c.system.irs_ny = 2;
    c.system.users = users;
    c.system.paths = PathCounts::uniform(1);
    c.algorithm.de.population = 4;
    c.algorithm.de.generations = 2;
    c.algorithm.ssca.batch = 5;
    c.algorithm.ssca.max_iter = 10;
    c.algorithm.psi_points = 3;
    c.algorithm.phi_points = 3;
    c.run.test_samples = 20;
    c.run.seeds = 2;
    return c;
}

std::string csv(const std::vector<ResultRecord>& rs)
{
    std::ostringstream os;
    write_results_csv(os, rs);
    return os.str();
}

} // namespace

TEST(Schemes, NamesRoundTrip)
{
    for (SchemeId id : all_schemes())
        EXPECT_EQ(parse_scheme(scheme_name(id)), id);
    EXPECT_EQ(parse_scheme("fixed_configuration"), SchemeId::fixed_configuration);
    EXPECT_FALSE(parse_scheme("nope").has_value());
    EXPECT_EQ(all_schemes().size(), 8u);
}

TEST(Schemes, Restrictions)
{
    auto r = restriction(SchemeId::fixed_configuration);
    EXPECT_FALSE(r.q || r.psi || r.phi);
    r = restriction(SchemeId::rirs_only);
    EXPECT_TRUE(!r.q && !r.psi && r.phi);
    r = restriction(SchemeId::sixdma_firs);
    EXPECT_TRUE(r.q && r.psi && !r.phi);
    r = restriction(SchemeId::rotatable_firs);
    EXPECT_TRUE(!r.q && r.psi && !r.phi);
    r = restriction(SchemeId::positionable_firs);
    EXPECT_TRUE(r.q && !r.psi && !r.phi);
    for (SchemeId id : {SchemeId::proposed, SchemeId::de_ssca, SchemeId::low_complexity}) {
        r = restriction(id);
        EXPECT_TRUE(r.q && r.psi && r.phi);
    }
}

TEST(RunScheme, FixedSingleUserLosIsSnr)
{
    ExperimentConfig c = tiny(1);
    c.system.paths = PathCounts::uniform(0);
    const ResultRecord r = run_scheme(c, SchemeId::fixed_configuration, 3);
    // deterministic channel: the expected gain is ||h_eff||^2 itself
    EXPECT_NEAR(r.rate_mean, std::log2(1.0 + c.power_watts() * r.objective / c.noise_watts()), 1e-9);
    EXPECT_EQ(r.rate_se, 0.0);
    EXPECT_EQ(r.psi, 0.0);
    EXPECT_EQ(r.phi, 0.0);
    EXPECT_NEAR(r.q[1] - r.q[0], c.radio().min_spacing(), 1e-15);
}

TEST(RunScheme, RecordFieldsAndFeasibility)
{
    const ExperimentConfig c = tiny(2);
    const ResultRecord r = run_scheme(c, SchemeId::proposed, 4);
    EXPECT_EQ(r.scheme, "proposed");
    EXPECT_EQ(r.seed, 4u);
    EXPECT_EQ(r.users, 2u);
    EXPECT_EQ(r.antennas, 3u);
    EXPECT_EQ(r.elements, 8u);
    EXPECT_EQ(r.test_samples, 20u);
    EXPECT_EQ(r.config_hash, c.hash());
    ASSERT_EQ(r.q.size(), 3u);
    const ConfigRegions regions = c.regions();
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(regions.q.contains(r.q[i], 1e-12));
        if (i)
            EXPECT_GE(r.q[i] - r.q[i - 1], c.radio().min_spacing() - 1e-12);
    }
    EXPECT_TRUE(regions.psi.contains(r.psi, 1e-12));
    EXPECT_TRUE(regions.phi.contains(r.phi, 1e-12));
    EXPECT_GT(r.rate_mean, 0.0);
}

TEST(RunScheme, RirsOnlyKeepsUla)
{
    const ExperimentConfig c = tiny(2);
    const ResultRecord r = run_scheme(c, SchemeId::rirs_only, 5);
    EXPECT_EQ(r.psi, 0.0);
    EXPECT_NEAR(r.q[0], -c.radio().min_spacing(), 1e-15);
    EXPECT_NEAR(r.q[2], c.radio().min_spacing(), 1e-15);
}

TEST(RunScheme, TracesFilled)
{
    ExperimentConfig c = tiny(2);
    SchemeTraces t;
    run_scheme(c, SchemeId::de_ssca, 6, &t);
    EXPECT_EQ(t.de_best.size(), c.algorithm.de.generations + 1);
    EXPECT_FALSE(t.surrogate.empty());
    EXPECT_LE(t.surrogate.size(), std::size_t(c.algorithm.ssca.max_iter));
}

TEST(Sweep, AxisHelpers)
{
    const ExperimentConfig c = tiny(2);
    EXPECT_TRUE(is_axis("aperture"));
    EXPECT_FALSE(is_axis("bandwidth"));
    EXPECT_EQ(axis_value(apply_axis(c, "power", 12.0), "power"), 12.0);
    const ExperimentConfig e = apply_axis(c, "elements", 12.0);
    EXPECT_EQ(e.system.irs_ny, 2u);
    EXPECT_EQ(e.system.irs_nx, 6u);
    EXPECT_THROW(apply_axis(c, "elements", 7.0), std::invalid_argument);
    EXPECT_EQ(apply_axis(c, "paths", 3.0).system.paths.bs_user, 3u);
    EXPECT_THROW(apply_axis(c, "paths", 1.5), std::invalid_argument);
    EXPECT_EQ(apply_axis(c, "aperture", 2.0).system.region_scale, 2.0);
    EXPECT_EQ(seed_list(c), (std::vector<std::uint64_t>{1, 2}));
}

TEST(Sweep, SinglePointReducesToRunScheme)
{
    const ExperimentConfig c = tiny(2);
    SweepRequest req;
    req.schemes = {SchemeId::fixed_configuration, SchemeId::rirs_only};
    req.seeds = {1, 2};
    const auto rows = run_sweep(c, req);
    ASSERT_EQ(rows.size(), 4u);
    std::size_t i = 0;
    for (SchemeId s : req.schemes)
        for (std::uint64_t seed : req.seeds) {
            ResultRecord direct = run_scheme(c, s, seed);
            EXPECT_EQ(rows[i].scheme, direct.scheme);
            EXPECT_EQ(rows[i].seed, seed);
            EXPECT_EQ(rows[i].axis, "power");
            EXPECT_EQ(rows[i].axis_value, 30.0);
            EXPECT_EQ(rows[i].rate_mean, direct.rate_mean);
            ++i;
        }
}

TEST(Sweep, OrderAndThreadIndependence)
{
    const ExperimentConfig c = tiny(2);
    SweepRequest req;
    req.schemes = {SchemeId::rirs_only, SchemeId::fixed_configuration};
    req.axis = "power";
    req.points = {20.0, 40.0};
    req.seeds = {7, 8};
    const auto a = run_sweep(c, req);
    req.threads = 3;
    const auto b = run_sweep(c, req);
    EXPECT_EQ(csv(a), csv(b));
    ASSERT_EQ(a.size(), 8u);
    EXPECT_EQ(a[0].scheme, "rirs_only");
    EXPECT_EQ(a[1].seed, 8u);
    EXPECT_EQ(a[2].axis_value, 40.0);
    EXPECT_EQ(a[4].scheme, "fixed");
    // more transmit power never hurts the fixed scheme on the same seed
    EXPECT_GT(a[6].rate_mean, a[4].rate_mean);
    EXPECT_GT(a[7].rate_mean, a[5].rate_mean);
}

TEST(Sweep, RepeatIsByteIdentical)
{
    const ExperimentConfig c = tiny(2);
    SweepRequest req;
    req.schemes = {SchemeId::proposed};
    req.seeds = {3};
    EXPECT_EQ(csv(run_sweep(c, req)), csv(run_sweep(c, req)));
}

TEST(Report, ResultsCsvColumns)
{
    ResultRecord r;
    r.scheme = "fixed";
    r.seed = 9;
    r.axis = "power";
    r.axis_value = 30;
    r.q = {-0.025, 0.0, 0.025};
    r.config_hash = "abc";
    const std::string text = csv({r, r});
    std::istringstream in(text);
    std::string head, line;
    std::getline(in, head);
    EXPECT_EQ(head, "scheme,seed,axis,axis_value,users,antennas,elements,rate_mean,rate_se,test_samples,objective,"
                    "psi,phi,q,converged,config_hash");
    std::getline(in, line);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 15);
    EXPECT_NE(line.find("-0.025;0;0.025"), std::string::npos);
    EXPECT_EQ(line.substr(0, 8), "fixed,9,");
}

TEST(Report, SummaryMatchesMeanAndSe)
{
    std::vector<ResultRecord> rs;
    const std::vector<double> a{1.0, 2.5, 4.0}, b{7.0};
    for (double x : a) {
        ResultRecord r;
        r.scheme = "a";
        r.rate_mean = x;
        rs.push_back(r);
    }
    ResultRecord r;
    r.scheme = "b";
    r.rate_mean = b[0];
    rs.push_back(r);
    const auto rows = summarize(rs);
    ASSERT_EQ(rows.size(), 2u);
    const auto ref = oracle::mean_se(a);
    EXPECT_NEAR(rows[0].rate_mean, ref.mean, 1e-15);
    EXPECT_NEAR(rows[0].rate_se, ref.se, 1e-15);
    EXPECT_EQ(rows[0].seeds, 3u);
    EXPECT_EQ(rows[1].rate_se, 0.0);
    std::ostringstream os;
    write_summary_csv(os, rows);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "scheme,axis,axis_value,seeds,rate_mean,rate_se");
}

TEST(Report, TraceCsv)
{
    std::ostringstream os;
    write_trace_csv(os, {{"ssca_surrogate", "fixed", 1, 3, 0.5}});
    EXPECT_EQ(os.str(), "kind,scheme,seed,iteration,value\nssca_surrogate,fixed,1,3,0.5\n");
}
