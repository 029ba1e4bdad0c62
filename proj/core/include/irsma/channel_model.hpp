#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "irsma/rng.hpp"
#include "irsma/types.hpp"

namespace irsma {

class RadioContext {
public:
    static RadioContext from_carrier(double carrier_hz);

    double carrier_hz() const { return carrier_hz_; }
    double wavelength() const { return wavelength_; }
    /// Minimum inter-antenna spacing d = lambda / 2.
    double min_spacing() const { return 0.5 * wavelength_; }
    double wavenumber() const { return kTwoPi / wavelength_; }

private:
    RadioContext(double carrier_hz, double wavelength) : carrier_hz_(carrier_hz), wavelength_(wavelength) {}

    double carrier_hz_;
    double wavelength_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

struct NodeGeometry {
    Vec3 bs{1.0, 1.0, 0.0};
    Vec3 irs{0.0, 0.0, 0.0};
    Vec3 user_center{4.0, -18.0, 0.0};
    double user_radius = 3.0;
    std::vector<Vec3> users;

    /// Deployment used throughout the evaluation: BS at (1,1,0), IRS at the
    /// origin, users in a 3 m disk around (4,-18,0).
    static NodeGeometry standard();

    /// Copy of this geometry with `count` users drawn uniformly (by area) in the disk.
    NodeGeometry with_random_users(std::size_t count, Rng& rng) const;

    void validate() const;
};

/// Statistics of one multipath link. Index 0 is the LoS path; indices 1..L are
/// NLoS paths with zero-mean complex Gaussian coefficients.
struct LinkStatistics {
    std::vector<double> departure;  // L+1 angles (rad)
    std::vector<double> arrival;    // L+1 angles (rad); only for the BS-IRS link
    cplx los{0.0, 0.0};
    std::vector<double> nlos_variance; // L entries

    std::size_t nlos_paths() const { return nlos_variance.size(); }
    /// |beta_0|^2 + sum of NLoS variances.
    double total_power() const;
    void validate(bool needs_arrival) const;
};

struct StatisticalCsi {
    LinkStatistics bs_irs;
    std::vector<LinkStatistics> irs_user;
    std::vector<LinkStatistics> bs_user;

    std::size_t users() const { return irs_user.size(); }
    void validate() const;
};

struct PathCounts {
    std::size_t bs_irs = 5;
    std::size_t irs_user = 5;
    std::size_t bs_user = 5;

    static PathCounts uniform(std::size_t paths) { return {paths, paths, paths}; }
};

struct ScsiOptions {
    double angle_lo = kPi / 6.0;
    double angle_hi = 5.0 * kPi / 6.0;
    /// Total NLoS power of a link relative to its LoS power, split equally over the paths.
    double nlos_power_ratio = 1.0;
};

/// Free-space LoS coefficient lambda/(4 pi r) with propagation phase -2 pi r / lambda.
cplx los_coefficient(double distance, const RadioContext& radio);

/// Draws one S-CSI realization. Each link owns a sub-stream of `seed`, and the LoS
/// angle is drawn before the NLoS angles, so changing a path count leaves the
/// LoS geometry of every link untouched.
StatisticalCsi sample_scsi(const NodeGeometry& geometry, const PathCounts& paths,
                           const RadioContext& radio, std::uint64_t seed,
                           const ScsiOptions& options = {});

struct ConfigRegions {
    Interval q;
    Interval psi{-kPi / 6.0, kPi / 6.0};
    Interval phi{-kPi / 6.0, kPi / 6.0};

    /// Movement region of `scale` times the half-wavelength ULA aperture, centered at 0.
    static ConfigRegions standard(std::size_t antennas, double min_spacing, double scale = 3.0);
};

struct ArraySurfaceConfig {
    RVec q;          // antenna coordinates along the array axis (m)
    double psi = 0.0; // array rotation (rad)
    double phi = 0.0; // surface rotation (rad)
    ConfigRegions regions;

    std::size_t antennas() const { return static_cast<std::size_t>(q.size()); }

    /// Half-wavelength ULA centered at the array origin with psi = phi = 0.
    static ArraySurfaceConfig centered_ula(std::size_t antennas, double min_spacing,
                                           const ConfigRegions& regions);

    bool is_feasible(double min_spacing, double tol = 1e-12) const;
};

struct IrsLayout {
    RVec x;             // per-element coordinate along the x axis (m)
    std::size_t nx = 0; // elements along x
    std::size_t ny = 0; // rows sharing the same x coordinates

    static IrsLayout grid(std::size_t nx, std::size_t ny, double spacing);
    std::size_t size() const { return static_cast<std::size_t>(x.size()); }
};

struct InstantaneousChannels {
    CMat G;               // N x M, BS -> IRS
    std::vector<CVec> r;  // N, IRS -> user k
    std::vector<CVec> h;  // M, BS -> user k

    std::size_t users() const { return r.size(); }
};

// Field-response vectors. All entries have unit modulus.
CVec transmit_frv(const RVec& q, double psi, double aod, const RadioContext& radio);
CVec receive_frv(const IrsLayout& layout, double phi, double aoa, const RadioContext& radio);
CVec irs_user_frv(const IrsLayout& layout, double phi, double aod, const RadioContext& radio);
CVec bs_user_frv(const RVec& q, double psi, double aod, const RadioContext& radio);

/// Field-response matrices of every link at one configuration.
struct FieldResponses {
    CMat bs_irs_rx;              // N x (L+1)
    CMat bs_irs_tx;              // M x (L+1)
    std::vector<CMat> irs_user;  // N x (L_r,k + 1)
    std::vector<CMat> bs_user;   // M x (L_t,k + 1)
};

FieldResponses field_responses(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                               const IrsLayout& layout, const RadioContext& radio);

/// Caches the field responses of one configuration and draws I-CSI from them.
/// Only the path coefficients are random, so draws with the same generator are
/// identical across configurations (common random numbers).
class ChannelSampler {
public:
    ChannelSampler(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                   const IrsLayout& layout, const RadioContext& radio);

    InstantaneousChannels draw(Rng& rng) const;

    const FieldResponses& responses() const { return responses_; }
    std::size_t antennas() const { return static_cast<std::size_t>(responses_.bs_irs_tx.rows()); }
    std::size_t elements() const { return static_cast<std::size_t>(responses_.bs_irs_rx.rows()); }
    std::size_t users() const { return responses_.irs_user.size(); }

private:
    StatisticalCsi scsi_;
    FieldResponses responses_;
};

InstantaneousChannels sample_icsi(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                                  const IrsLayout& layout, const RadioContext& radio, Rng& rng);

/// h + G^H diag(v)^H r, the column form of the row channel h^H + r^H diag(v) G.
CVec effective_channel(const CVec& h, const CVec& r, const CMat& G, const CVec& v);

/// M x K matrix whose k-th column is the effective channel of user k.
CMat effective_channels(const InstantaneousChannels& channels, const CVec& v);

} // namespace irsma
