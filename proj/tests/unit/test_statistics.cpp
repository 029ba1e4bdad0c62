#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "irsma/statistics.hpp"
#include "oracles.hpp"

using namespace irsma;

namespace {

constexpr double kD = 0.025;

struct Instance {
    StatisticalCsi scsi;
    ArraySurfaceConfig config;
    IrsLayout layout;
    ExpectedGainTerms terms;
};

Instance make(std::uint64_t seed, std::size_t paths, std::size_t M = 4, std::size_t nx = 3, std::size_t ny = 2)
{
    Instance in;
    in.scsi = fixture::scsi(seed, 1, paths);
    in.layout = IrsLayout::grid(nx, ny, kD);
    Rng rng = Rng::stream(seed, "unit-config");
    in.config = fixture::random_config(M, ConfigRegions::standard(M, kD), rng);
    in.terms = expected_gain_terms(in.scsi, in.config, in.layout, fixture::radio(), 0);
    return in;
}

double link_power(const LinkStatistics& l)
{
    double p = std::norm(l.los);
    for (double v : l.nlos_variance)
        p += v;
    return p;
}

} // namespace

TEST(DirectPower, Substitution)
{
    LinkStatistics l;
    l.departure = {1.0, 1.2};
    l.los = 1.0;
    l.nlos_variance = {0.5};
    EXPECT_DOUBLE_EQ(direct_power_c1(l, 2), 3.0);
    LinkStatistics los;
    los.departure = {1.0};
    los.los = cplx(0.6, 0.8);
    EXPECT_DOUBLE_EQ(direct_power_c1(los, 10), 10.0);
}

TEST(ReflectedGain, LosOnlyIsOuterProduct)
{
    const Instance in = make(2, 0);
    const CMat& G = in.terms.g_hat;
    const auto N = static_cast<Eigen::Index>(in.layout.size());
    const double scale = 4.0 * std::norm(in.scsi.bs_irs.los) * std::norm(in.scsi.irs_user[0].los);
    const CMat expect = scale * in.terms.a_hat_irs * in.terms.a_hat_irs.adjoint();
    EXPECT_LT((G - expect).norm(), 1e-12 * expect.norm());
    const Eigen::SelfAdjointEigenSolver<CMat> es(G);
    EXPECT_LT(es.eigenvalues()[N - 2], 1e-10 * es.eigenvalues()[N - 1]);
}

TEST(ReflectedGain, TraceIdentity)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Instance in = make(seed, 3);
        const double N = double(in.layout.size());
        const double expect = N * 4.0 * link_power(in.scsi.bs_irs) * link_power(in.scsi.irs_user[0]);
        EXPECT_NEAR(in.terms.g_hat.trace().real(), expect, 1e-10 * expect);
    }
}

TEST(ReflectedGain, HermitianPsd)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const CMat& G = make(seed, 4).terms.g_hat;
        EXPECT_LT((G - G.adjoint()).norm(), 1e-12 * G.norm());
        const Eigen::SelfAdjointEigenSolver<CMat> es(G);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * G.norm());
    }
}

TEST(ExpectedGain, ZeroVectorGivesDirectPower)
{
    const Instance in = make(3, 2);
    EXPECT_NEAR(expected_equivalent_gain(in.terms, CVec::Zero(6)), in.terms.c1, 1e-15);
}

TEST(ExpectedGain, CouplingBoundedByAntennas)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        EXPECT_LE(std::abs(make(seed, 1).terms.a_hat_bs), 4.0 + 1e-12);
}

TEST(ExpectedGain, LosOnlyAlignedOptimum)
{
    const Instance in = make(4, 0);
    const double N = double(in.layout.size());
    const CVec v = compensate_phase(in.terms, in.terms.a_hat_irs.conjugate());
    const double b0 = std::norm(in.scsi.bs_irs.los) * std::norm(in.scsi.irs_user[0].los);
    const double expect = in.terms.c1 + 4.0 * N * N * b0 + 2.0 * N * std::abs(in.terms.omega) * std::abs(in.terms.a_hat_bs);
    EXPECT_NEAR(expected_equivalent_gain(in.terms, v), expect, 1e-12 * expect);
}

TEST(ExpectedGain, MatchesMonteCarlo)
{
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Instance in = make(seed, 3);
        Rng rng(seed);
        const CVec v = fixture::random_phases(6, rng);
        const ChannelSampler sampler(in.scsi, in.config, in.layout, fixture::radio());
        std::vector<double> xs;
        for (int s = 0; s < 40000; ++s) {
            const auto ch = sampler.draw(rng);
            xs.push_back(oracle::effective_channel(ch.h[0], ch.r[0], ch.G, v).squaredNorm());
        }
        const auto est = oracle::mean_se(xs);
        EXPECT_LT(std::abs(expected_equivalent_gain(in.terms, v) - est.mean), 4.0 * est.se);
    }
}

TEST(ExpectedGain, DecoupledFormAfterCompensation)
{
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Instance in = make(seed, 2);
        Rng rng(seed);
        const CVec v = fixture::random_phases(6, rng) * unit_phasor(rng.uniform(0.0, kTwoPi));
        const double a = decoupled_equivalent_gain(in.terms, v);
        const double b = expected_equivalent_gain(in.terms, compensate_phase(in.terms, v));
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(ExpectedGain, LosOnlyFlatInSurfaceRotation)
{
    Instance in = make(5, 0);
    std::vector<double> values;
    for (double phi : {-0.5, -0.2, 0.0, 0.3, 0.5}) {
        in.config.phi = phi;
        const auto t = expected_gain_terms(in.scsi, in.config, in.layout, fixture::radio(), 0);
        values.push_back(expected_equivalent_gain(t, compensate_phase(t, t.a_hat_irs.conjugate())));
    }
    for (double x : values)
        EXPECT_NEAR(x, values.front(), 1e-9 * values.front());
}

TEST(HeffMatrix, LiftedIdentity)
{
    const Instance in = make(6, 3);
    const CMat H = heff_matrix(in.terms);
    ASSERT_EQ(H.rows(), 7);
    EXPECT_LT((H - H.adjoint()).norm(), 1e-12 * H.norm());
    EXPECT_NEAR(H(6, 6).real(), in.terms.c1, 1e-15);
    EXPECT_EQ(H(6, 6).imag(), 0.0);
    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
        const CVec v = fixture::random_phases(6, rng);
        const double g = expected_equivalent_gain(in.terms, v);
        EXPECT_NEAR(oracle::lifted(H, v), g, 1e-9 * g);
    }
}

TEST(McGainOracle, DeterministicChannelIsExact)
{
    Instance in = make(7, 2);
    for (auto* l : {&in.scsi.bs_irs, &in.scsi.irs_user[0], &in.scsi.bs_user[0]})
        std::fill(l->nlos_variance.begin(), l->nlos_variance.end(), 0.0);
    Rng rng(1);
    const CVec v = fixture::random_phases(6, rng);
    const auto ch = sample_icsi(in.scsi, in.config, in.layout, fixture::radio(), rng);
    const double exact = oracle::effective_channel(ch.h[0], ch.r[0], ch.G, v).squaredNorm();
    const auto est = mc_gain_oracle(in.scsi, in.config, in.layout, fixture::radio(), 0, v, 7, rng);
    EXPECT_NEAR(est.mean, exact, 1e-12 * exact);
    EXPECT_EQ(est.samples, 7u);
}

TEST(McGainOracle, StandardErrorShrinks)
{
    const Instance in = make(8, 3);
    Rng rng(2);
    const CVec v = fixture::random_phases(6, rng);
    Rng a(10), b(11);
    const auto small = mc_gain_oracle(in.scsi, in.config, in.layout, fixture::radio(), 0, v, 20000, a);
    const auto large = mc_gain_oracle(in.scsi, in.config, in.layout, fixture::radio(), 0, v, 40000, b);
    EXPECT_NEAR(small.std_error / large.std_error, std::sqrt(2.0), 0.1);
}
