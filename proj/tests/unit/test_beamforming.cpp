#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "irsma/beamforming.hpp"
#include "oracles.hpp"

using namespace irsma;

namespace {

CMat random_channels(Eigen::Index M, Eigen::Index K, Rng& rng)
{
    CMat H(M, K);
    for (Eigen::Index k = 0; k < K; ++k)
        H.col(k) = fixture::random_complex(M, rng);
    return H;
}

} // namespace

TEST(Mrt, Examples)
{
    CVec h(2);
    h << 1.0, 0.0;
    CVec w = mrt(h, 4.0);
    EXPECT_NEAR(std::abs(w[0] - 2.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w[1]), 0.0, 1e-15);
    const cplx j(0.0, 1.0);
    h << j, j;
    w = mrt(h, 2.0);
    EXPECT_NEAR(std::abs(w[0] - j), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w[1] - j), 0.0, 1e-15);
    EXPECT_THROW(mrt(CVec::Zero(3), 1.0), std::invalid_argument);
}

TEST(Mrt, RateMatchesSnr)
{
    Rng rng(1);
    const CVec h = fixture::random_complex(5, rng);
    CMat H(5, 1), W(5, 1);
    H.col(0) = h;
    W.col(0) = mrt(h, 3.0);
    EXPECT_NEAR(sum_rate(H, W, 0.1), oracle::mrt_rate(h, 3.0, 0.1), 1e-12);
    EXPECT_NEAR(mrt_rate(h, 3.0, 0.1), oracle::mrt_rate(h, 3.0, 0.1), 1e-12);
}

TEST(SinrAndRate, OrthogonalUsers)
{
    const double g = 2.0, P = 6.0, noise = 0.5;
    CMat H = CMat::Identity(3, 3) * std::sqrt(g);
    CMat W = CMat::Identity(3, 3) * std::sqrt(P / 3);
    const RateReport r = sinr_and_rate(H, W, noise);
    for (double s : r.sinr)
        EXPECT_NEAR(s, (P / 3) * g / noise, 1e-12);
}

TEST(SinrAndRate, MatchesScalarEvaluation)
{
    Rng rng(2);
    const CMat H = random_channels(4, 3, rng);
    const CMat W = random_channels(4, 3, rng);
    const RateReport r = sinr_and_rate(H, W, 0.3);
    const auto s = oracle::sinr(H, W, 0.3);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(r.sinr[k], s[k], 1e-12 * s[k]);
        EXPECT_NEAR(r.rate[k], std::log2(1 + s[k]), 1e-12);
    }
    EXPECT_NEAR(r.sum_rate, oracle::sum_rate_bits(H, W, 0.3), 1e-12);
    EXPECT_THROW(sinr_and_rate(H, W, 0.0), std::invalid_argument);
    EXPECT_THROW(sinr_and_rate(H, W.leftCols(2), 1.0), std::invalid_argument);
}

TEST(SinrAndRate, ScaleCovariance)
{
    Rng rng(3);
    const CMat H = random_channels(3, 2, rng);
    const CMat W = random_channels(3, 2, rng);
    const RateReport a = sinr_and_rate(H, W, 0.2);
    const RateReport b = sinr_and_rate(7.0 * H, W, 0.2 * 49.0);
    for (std::size_t k = 0; k < 2; ++k)
        EXPECT_NEAR(a.sinr[k], b.sinr[k], 1e-12 * a.sinr[k]);
}

TEST(Wmmse, SingleUserIsMrt)
{
    Rng rng(4);
    for (int i = 0; i < 10; ++i) {
        const CMat H = random_channels(6, 1, rng);
        const WmmseResult r = wmmse(H, 1.0, 0.01);
        const CVec w = r.precoder.W.col(0);
        const double align = std::abs(w.dot(H.col(0))) / (w.norm() * H.col(0).norm());
        EXPECT_NEAR(align, 1.0, 1e-9);
        EXPECT_NEAR(sum_rate(H, r.precoder.W, 0.01), oracle::mrt_rate(H.col(0), 1.0, 0.01), 1e-6);
    }
}

TEST(Wmmse, OrthogonalSymmetricUsers)
{
    const CMat H = CMat::Identity(3, 3) * 1.5;
    const WmmseResult r = wmmse(H, 3.0, 0.1);
    for (Eigen::Index k = 0; k < 3; ++k) {
        EXPECT_NEAR(r.precoder.W.col(k).squaredNorm(), 1.0, 1e-6);
        EXPECT_NEAR(std::abs(r.precoder.W(k, k)), r.precoder.W.col(k).norm(), 1e-9);
    }
}

TEST(Wmmse, MonotoneAndFeasible)
{
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        const Eigen::Index M = 2 + Eigen::Index(rng.below(5));
        const Eigen::Index K = 1 + Eigen::Index(rng.below(4));
        const CMat H = random_channels(M, K, rng) * 0.05;
        const double P = 0.1 + rng.uniform() * 5.0;
        const WmmseResult r = wmmse(H, P, 1e-3);
        for (std::size_t t = 1; t < r.rate_trace.size(); ++t)
            EXPECT_GE(r.rate_trace[t], r.rate_trace[t - 1] - 1e-9);
        EXPECT_LE(r.precoder.power(), P * (1 + 1e-9));
        for (double kappa : r.state.kappa)
            EXPECT_GE(kappa, 1.0 - 1e-12);
        EXPECT_GE(r.state.mu, 0.0);
        if (r.state.mu > 0.0)
            EXPECT_NEAR(r.precoder.power(), P, 1e-6 * P);
        EXPECT_NEAR(r.rate_trace.back(), oracle::sum_rate_bits(H, r.precoder.W, 1e-3), 1e-9);
    }
}

TEST(Wmmse, RejectsBadInput)
{
    EXPECT_THROW(wmmse(CMat::Ones(2, 1), 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(wmmse(CMat(0, 0), 1.0, 1.0), std::invalid_argument);
}
