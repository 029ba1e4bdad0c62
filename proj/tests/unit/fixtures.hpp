#pragma once

#include <cstdint>

#include "irsma/channel_model.hpp"
#include "irsma/differential_evolution.hpp"

namespace fixture {

using namespace irsma;

inline const RadioContext& radio()
{
    static const RadioContext r = RadioContext::from_carrier(6e9);
    return r;
}

inline StatisticalCsi scsi(std::uint64_t seed, std::size_t users, std::size_t paths)
{
    Rng rng = Rng::stream(seed, "unit-users");
    const NodeGeometry geo = NodeGeometry::standard().with_random_users(users, rng);
    return sample_scsi(geo, PathCounts::uniform(paths), radio(), seed);
}

inline CVec random_phases(Eigen::Index n, Rng& rng)
{
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = unit_phasor(rng.uniform(0.0, kTwoPi));
    return v;
}

inline CVec random_complex(Eigen::Index n, Rng& rng)
{
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = rng.complex_normal(1.0);
    return v;
}

inline CMat random_hermitian(Eigen::Index n, Rng& rng)
{
    CMat A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            A(i, j) = rng.complex_normal(1.0);
    return 0.5 * (A + A.adjoint());
}

inline ArraySurfaceConfig random_config(std::size_t antennas, const ConfigRegions& regions, Rng& rng)
{
    ArraySurfaceConfig c;
    c.regions = regions;
    RVec q(static_cast<Eigen::Index>(antennas));
    for (auto& x : q)
        x = rng.uniform(regions.q.lo, regions.q.hi);
    c.q = repair_spacing(q, radio().min_spacing(), regions.q);
    c.psi = rng.uniform(regions.psi.lo, regions.psi.hi);
    c.phi = rng.uniform(regions.phi.lo, regions.phi.hi);
    return c;
}

} // namespace fixture
