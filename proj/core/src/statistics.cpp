#include "irsma/statistics.hpp"

#include <cmath>
#include <stdexcept>

namespace irsma {

double direct_power_c1(const LinkStatistics& bs_user, std::size_t antennas)
{
    return static_cast<double>(antennas) * bs_user.total_power();
}

namespace {

RVec path_power_diagonal(const LinkStatistics& link, std::size_t antennas)
{
    RVec xi(static_cast<Eigen::Index>(link.nlos_paths() + 1));
    xi[0] = std::norm(link.los);
    for (std::size_t l = 0; l < link.nlos_paths(); ++l)
        xi[static_cast<Eigen::Index>(l + 1)] = link.nlos_variance[l];
    return static_cast<double>(antennas) * xi;
}

RVec path_weights(const LinkStatistics& link)
{
    RVec w(static_cast<Eigen::Index>(link.nlos_paths() + 1));
    w[0] = std::norm(link.los);
    for (std::size_t l = 0; l < link.nlos_paths(); ++l)
        w[static_cast<Eigen::Index>(l + 1)] = link.nlos_variance[l];
    return w;
}

CMat reflected_gain(const CMat& rx_frm, const RVec& xi, const CMat& user_frm, const RVec& user_weights)
{
    // G_bar = G_r Xi G_r^H; the user-side expectation acts elementwise (Schur product).
    const CMat g_bar = rx_frm * xi.asDiagonal() * rx_frm.adjoint();
    const CMat mix = user_frm.conjugate() * user_weights.asDiagonal() * user_frm.transpose();
    return g_bar.cwiseProduct(mix);
}

} // namespace

CMat reflected_gain_matrix(const LinkStatistics& bs_irs, const LinkStatistics& irs_user, const IrsLayout& layout,
                           double phi, std::size_t antennas, const RadioContext& radio)
{
    bs_irs.validate(true);
    irs_user.validate(false);
    const auto N = static_cast<Eigen::Index>(layout.size());
    CMat rx(N, static_cast<Eigen::Index>(bs_irs.arrival.size()));
    for (std::size_t l = 0; l < bs_irs.arrival.size(); ++l)
        rx.col(static_cast<Eigen::Index>(l)) = receive_frv(layout, phi, bs_irs.arrival[l], radio);
    CMat ur(N, static_cast<Eigen::Index>(irs_user.departure.size()));
    for (std::size_t l = 0; l < irs_user.departure.size(); ++l)
        ur.col(static_cast<Eigen::Index>(l)) = irs_user_frv(layout, phi, irs_user.departure[l], radio);
    return reflected_gain(rx, path_power_diagonal(bs_irs, antennas), ur, path_weights(irs_user));
}

ExpectedGainTerms expected_gain_terms(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                                      const IrsLayout& layout, const RadioContext& radio, std::size_t user)
{
    if (user >= scsi.users())
        throw std::out_of_range("expected_gain_terms: user index out of range");
    const FieldResponses fr = field_responses(scsi, config, layout, radio);
    const std::size_t M = config.antennas();
    const auto& irs_link = scsi.irs_user[user];
    const auto& bs_link = scsi.bs_user[user];

    ExpectedGainTerms t;
    t.c1 = direct_power_c1(bs_link, M);
    t.xi = path_power_diagonal(scsi.bs_irs, M);
    t.g_hat = reflected_gain(fr.bs_irs_rx, t.xi, fr.irs_user[user], path_weights(irs_link));
    t.omega = scsi.bs_irs.los * std::conj(irs_link.los) * bs_link.los;
    t.a_hat_irs = fr.irs_user[user].col(0).conjugate().cwiseProduct(fr.bs_irs_rx.col(0));
    t.a_hat_bs = fr.bs_irs_tx.col(0).dot(fr.bs_user[user].col(0)); // dot() conjugates the left operand
    return t;
}

namespace {

void check_dims(const ExpectedGainTerms& terms, const CVec& v)
{
    if (v.size() != terms.g_hat.rows())
        throw std::invalid_argument("reflection vector length does not match the IRS size");
}

double reflected_quadratic(const ExpectedGainTerms& terms, const CVec& v)
{
    // v^T G v^* = (v^*)^H G v^*
    const CVec vc = v.conjugate();
    return vc.dot(terms.g_hat * vc).real();
}

} // namespace

double expected_equivalent_gain(const ExpectedGainTerms& terms, const CVec& v)
{
    check_dims(terms, v);
    const cplx cross = terms.omega * terms.a_hat_bs * v.transpose() * terms.a_hat_irs;
    return terms.c1 + reflected_quadratic(terms, v) + 2.0 * cross.real();
}

double decoupled_equivalent_gain(const ExpectedGainTerms& terms, const CVec& v)
{
    check_dims(terms, v);
    const cplx inner = v.transpose() * terms.a_hat_irs;
    return terms.c1 + reflected_quadratic(terms, v) +
           2.0 * std::abs(terms.omega) * std::abs(terms.a_hat_bs) * inner.real();
}

CVec compensate_phase(const ExpectedGainTerms& terms, const CVec& v)
{
    const cplx coupling = terms.omega * terms.a_hat_bs;
    if (coupling == cplx(0.0, 0.0))
        return v;
    return v * std::conj(coupling / std::abs(coupling));
}

CMat heff_matrix(const ExpectedGainTerms& terms)
{
    const auto N = terms.g_hat.rows();
    CMat H(N + 1, N + 1);
    const CVec b = terms.omega * terms.a_hat_bs * terms.a_hat_irs;
    H.topLeftCorner(N, N) = terms.g_hat;
    H.topRightCorner(N, 1) = b;
    H.bottomLeftCorner(1, N) = b.adjoint();
    H(N, N) = terms.c1;
    return H;
}

MonteCarloEstimate mc_gain_oracle(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                                  const IrsLayout& layout, const RadioContext& radio, std::size_t user,
                                  const CVec& v, std::size_t samples, Rng& rng)
{
    if (samples == 0)
        throw std::invalid_argument("mc_gain_oracle needs at least one sample");
    if (user >= scsi.users())
        throw std::out_of_range("mc_gain_oracle: user index out of range");
    const ChannelSampler sampler(scsi, config, layout, radio);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const InstantaneousChannels ch = sampler.draw(rng);
        const double g = effective_channel(ch.h[user], ch.r[user], ch.G, v).squaredNorm();
        sum += g;
        sum_sq += g * g;
    }
    const double n = static_cast<double>(samples);
    MonteCarloEstimate est;
    est.samples = samples;
    est.mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0)) : 0.0;
    est.std_error = std::sqrt(var / n);
    return est;
}

} // namespace irsma
