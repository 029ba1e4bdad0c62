#include "irsma/channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irsma {

RadioContext RadioContext::from_carrier(double carrier_hz)
{
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
    return RadioContext(carrier_hz, kSpeedOfLight / carrier_hz);
}

NodeGeometry NodeGeometry::standard()
{
    return NodeGeometry{};
}

NodeGeometry NodeGeometry::with_random_users(std::size_t count, Rng& rng) const
{
    NodeGeometry out = *this;
    out.users.clear();
    out.users.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double radius = user_radius * std::sqrt(rng.uniform());
        const double angle = rng.uniform(0.0, kTwoPi);
        out.users.push_back(user_center + Vec3(radius * std::cos(angle), radius * std::sin(angle), 0.0));
    }
    return out;
}

void NodeGeometry::validate() const
{
    if (users.empty())
        throw std::invalid_argument("geometry has no users");
    if (!(user_radius >= 0.0))
        throw std::invalid_argument("user disk radius must be non-negative");
    for (const auto& u : users) {
        if ((u - user_center).norm() > user_radius * (1.0 + 1e-12) + 1e-12)
            throw std::invalid_argument("user outside the configured disk");
    }
}

double LinkStatistics::total_power() const
{
    double p = std::norm(los);
    for (double s : nlos_variance)
        p += s;
    return p;
}

void LinkStatistics::validate(bool needs_arrival) const
{
    const std::size_t n = nlos_variance.size() + 1;
    if (departure.size() != n)
        throw std::invalid_argument("departure angle count must equal L+1");
    if (needs_arrival && arrival.size() != n)
        throw std::invalid_argument("arrival angle count must equal L+1");
    for (double s : nlos_variance) {
        if (!(s >= 0.0))
            throw std::invalid_argument("NLoS variance must be non-negative");
    }
}

void StatisticalCsi::validate() const
{
    if (irs_user.empty())
        throw std::invalid_argument("S-CSI needs at least one user");
    if (irs_user.size() != bs_user.size())
        throw std::invalid_argument("S-CSI user link counts disagree");
    bs_irs.validate(true);
    for (const auto& l : irs_user)
        l.validate(false);
    for (const auto& l : bs_user)
        l.validate(false);
}

cplx los_coefficient(double distance, const RadioContext& radio)
{
    if (!(distance > 0.0))
        throw std::invalid_argument("coincident nodes: link distance must be positive");
    const double lambda = radio.wavelength();
    return std::polar(lambda / (4.0 * kPi * distance), -kTwoPi * distance / lambda);
}

namespace {

LinkStatistics draw_link(double distance, std::size_t nlos, bool with_arrival, const RadioContext& radio,
                         const ScsiOptions& options, Rng rng)
{
    LinkStatistics link;
    link.los = los_coefficient(distance, radio);
    const double los_power = std::norm(link.los);
    link.nlos_variance.assign(nlos, nlos > 0 ? options.nlos_power_ratio * los_power / static_cast<double>(nlos) : 0.0);
    link.departure.resize(nlos + 1);
    if (with_arrival)
        link.arrival.resize(nlos + 1);
    for (std::size_t l = 0; l <= nlos; ++l) {
        link.departure[l] = rng.uniform(options.angle_lo, options.angle_hi);
        if (with_arrival)
            link.arrival[l] = rng.uniform(options.angle_lo, options.angle_hi);
    }
    return link;
}

} // namespace

StatisticalCsi sample_scsi(const NodeGeometry& geometry, const PathCounts& paths, const RadioContext& radio,
                           std::uint64_t seed, const ScsiOptions& options)
{
    geometry.validate();
    if (!(options.nlos_power_ratio >= 0.0))
        throw std::invalid_argument("nlos_power_ratio must be non-negative");

    StatisticalCsi scsi;
    scsi.bs_irs = draw_link((geometry.bs - geometry.irs).norm(), paths.bs_irs, true, radio, options,
                            Rng::stream(seed, "scsi-bs-irs"));
    for (std::size_t k = 0; k < geometry.users.size(); ++k) {
        const Vec3& u = geometry.users[k];
        scsi.irs_user.push_back(draw_link((u - geometry.irs).norm(), paths.irs_user, false, radio, options,
                                          Rng::stream(seed, "scsi-irs-user", k)));
        scsi.bs_user.push_back(draw_link((u - geometry.bs).norm(), paths.bs_user, false, radio, options,
                                         Rng::stream(seed, "scsi-bs-user", k)));
    }
    return scsi;
}

ConfigRegions ConfigRegions::standard(std::size_t antennas, double min_spacing, double scale)
{
    ConfigRegions r;
    const double half = 0.5 * scale * static_cast<double>(antennas > 0 ? antennas - 1 : 0) * min_spacing;
    r.q = {-half, half};
    return r;
}

ArraySurfaceConfig ArraySurfaceConfig::centered_ula(std::size_t antennas, double min_spacing,
                                                    const ConfigRegions& regions)
{
    ArraySurfaceConfig c;
    c.q.resize(static_cast<Eigen::Index>(antennas));
    const double center = 0.5 * static_cast<double>(antennas - 1);
    for (std::size_t m = 0; m < antennas; ++m)
        c.q[static_cast<Eigen::Index>(m)] = (static_cast<double>(m) - center) * min_spacing;
    c.regions = regions;
    return c;
}

bool ArraySurfaceConfig::is_feasible(double min_spacing, double tol) const
{
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        if (!regions.q.contains(q[i], tol))
            return false;
        for (Eigen::Index j = i + 1; j < q.size(); ++j) {
            if (std::abs(q[i] - q[j]) < min_spacing - tol)
                return false;
        }
    }
    return regions.psi.contains(psi, tol) && regions.phi.contains(phi, tol);
}

IrsLayout IrsLayout::grid(std::size_t nx, std::size_t ny, double spacing)
{
    if (nx == 0 || ny == 0)
        throw std::invalid_argument("IRS grid must have at least one element");
    IrsLayout layout;
    layout.nx = nx;
    layout.ny = ny;
    layout.x.resize(static_cast<Eigen::Index>(nx * ny));
    const double center = 0.5 * static_cast<double>(nx - 1);
    for (std::size_t row = 0; row < ny; ++row) {
        for (std::size_t col = 0; col < nx; ++col)
            layout.x[static_cast<Eigen::Index>(row * nx + col)] = (static_cast<double>(col) - center) * spacing;
    }
    return layout;
}

namespace {

CVec phase_ramp(const RVec& coords, double scale)
{
    CVec out(coords.size());
    for (Eigen::Index i = 0; i < coords.size(); ++i)
        out[i] = unit_phasor(scale * coords[i]);
    return out;
}

} // namespace

CVec transmit_frv(const RVec& q, double psi, double aod, const RadioContext& radio)
{
    return phase_ramp(q, radio.wavenumber() * std::cos(aod + psi));
}

CVec receive_frv(const IrsLayout& layout, double phi, double aoa, const RadioContext& radio)
{
    return phase_ramp(layout.x, radio.wavenumber() * std::cos(aoa - phi));
}

CVec irs_user_frv(const IrsLayout& layout, double phi, double aod, const RadioContext& radio)
{
    return phase_ramp(layout.x, -radio.wavenumber() * std::cos(aod + phi));
}

CVec bs_user_frv(const RVec& q, double psi, double aod, const RadioContext& radio)
{
    return phase_ramp(q, -radio.wavenumber() * std::cos(aod - psi));
}

FieldResponses field_responses(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                               const IrsLayout& layout, const RadioContext& radio)
{
    scsi.validate();
    if (config.q.size() == 0)
        throw std::invalid_argument("configuration has no antennas");
    if (layout.size() == 0)
        throw std::invalid_argument("IRS layout is empty");
    if (scsi.irs_user.size() != scsi.bs_user.size())
        throw std::invalid_argument("S-CSI user dimensions disagree");

    const auto M = config.q.size();
    const auto N = static_cast<Eigen::Index>(layout.size());
    FieldResponses fr;

    const auto& link = scsi.bs_irs;
    const auto paths = static_cast<Eigen::Index>(link.departure.size());
    fr.bs_irs_rx.resize(N, paths);
    fr.bs_irs_tx.resize(M, paths);
    for (Eigen::Index l = 0; l < paths; ++l) {
        fr.bs_irs_rx.col(l) = receive_frv(layout, config.phi, link.arrival[static_cast<std::size_t>(l)], radio);
        fr.bs_irs_tx.col(l) = transmit_frv(config.q, config.psi, link.departure[static_cast<std::size_t>(l)], radio);
    }

    for (std::size_t k = 0; k < scsi.users(); ++k) {
        const auto& ru = scsi.irs_user[k];
        CMat ar(N, static_cast<Eigen::Index>(ru.departure.size()));
        for (std::size_t l = 0; l < ru.departure.size(); ++l)
            ar.col(static_cast<Eigen::Index>(l)) = irs_user_frv(layout, config.phi, ru.departure[l], radio);
        fr.irs_user.push_back(std::move(ar));

        const auto& bu = scsi.bs_user[k];
        CMat at(M, static_cast<Eigen::Index>(bu.departure.size()));
        for (std::size_t l = 0; l < bu.departure.size(); ++l)
            at.col(static_cast<Eigen::Index>(l)) = bs_user_frv(config.q, config.psi, bu.departure[l], radio);
        fr.bs_user.push_back(std::move(at));
    }
    return fr;
}

ChannelSampler::ChannelSampler(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                               const IrsLayout& layout, const RadioContext& radio)
    : scsi_(scsi), responses_(field_responses(scsi, config, layout, radio))
{
}

namespace {

CVec draw_coefficients(const LinkStatistics& link, Rng& rng)
{
    CVec beta(static_cast<Eigen::Index>(link.nlos_paths() + 1));
    beta[0] = link.los;
    for (std::size_t l = 0; l < link.nlos_paths(); ++l)
        beta[static_cast<Eigen::Index>(l + 1)] = rng.complex_normal(link.nlos_variance[l]);
    return beta;
}

} // namespace

InstantaneousChannels ChannelSampler::draw(Rng& rng) const
{
    InstantaneousChannels ch;
    const CVec beta = draw_coefficients(scsi_.bs_irs, rng);
    ch.G.noalias() = (responses_.bs_irs_rx * beta.asDiagonal()) * responses_.bs_irs_tx.adjoint();
    const std::size_t K = users();
    ch.r.reserve(K);
    ch.h.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        ch.r.push_back(responses_.irs_user[k] * draw_coefficients(scsi_.irs_user[k], rng));
        ch.h.push_back(responses_.bs_user[k] * draw_coefficients(scsi_.bs_user[k], rng));
    }
    return ch;
}

InstantaneousChannels sample_icsi(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                                  const IrsLayout& layout, const RadioContext& radio, Rng& rng)
{
    return ChannelSampler(scsi, config, layout, radio).draw(rng);
}

CVec effective_channel(const CVec& h, const CVec& r, const CMat& G, const CVec& v)
{
    if (G.rows() != r.size() || G.cols() != h.size() || v.size() != r.size())
        throw std::invalid_argument("effective_channel: dimension mismatch");
    return h + G.adjoint() * v.conjugate().cwiseProduct(r);
}

CMat effective_channels(const InstantaneousChannels& channels, const CVec& v)
{
    const auto K = static_cast<Eigen::Index>(channels.users());
    CMat H(channels.G.cols(), K);
    for (Eigen::Index k = 0; k < K; ++k)
        H.col(k) = effective_channel(channels.h[static_cast<std::size_t>(k)],
                                     channels.r[static_cast<std::size_t>(k)], channels.G, v);
    return H;
}

} // namespace irsma
