#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "irsma/channel_model.hpp"
#include "irsma/differential_evolution.hpp"
#include "irsma/sdp.hpp"
#include "irsma/statistics.hpp"

namespace irsma {

/// |cos(aod_irs + psi) + cos(aod_user - psi)|: the phase-gradient magnitude
/// (in units of 2 pi / lambda) of the BS-side coupling a_t0^H a~_0 along q.
double delta_factor(double aod_irs, double aod_user, double psi);

/// Uniform sparse array q_m = q_min + m lambda / delta, m = 0..M-1.
RVec sparse_array_positions(double delta, std::size_t antennas, double q_min, double wavelength);

/// |a_t0^H(q, psi) a~_0(q, psi)|, at most M.
double bs_coupling(const RVec& q, double psi, double aod_irs, double aod_user, const RadioContext& radio);

/// LoS departure angles that the BS-side design depends on.
struct BsAngles {
    double irs = 0.0;  // LoS AoD towards the surface
    double user = 0.0; // LoS AoD towards the user

    static BsAngles of(const StatisticalCsi& scsi, std::size_t user = 0);
};

/// bs_coupling minus the spacing penalty eta * B1 * |B2|.
double de_fitness(const RVec& q, double psi, const BsAngles& angles, const RadioContext& radio, double eta);

/// True when the uniform sparse array fits in the region (equality included).
bool closed_form_branch(double delta, std::size_t antennas, const Interval& region, double wavelength);

struct P31Solution {
    RVec q;
    double value = 0.0;        // bs_coupling at q
    bool closed_form = false;
    std::vector<double> trace; // best DE fitness per generation; empty for the closed form
};

/// DE on the positions at a fixed rotation, followed by a spacing repair.
P31Solution position_de(double psi, const BsAngles& angles, std::size_t antennas, const Interval& region,
                        const RadioContext& radio, const DeParams& de, Rng& rng);

/// Positions for a fixed rotation: the sparse array when it fits, otherwise
/// position_de.
P31Solution solve_p31(double psi, const BsAngles& angles, std::size_t antennas, const Interval& region,
                      const RadioContext& radio, const DeParams& de, Rng& rng);

/// `points` evenly spaced angles covering the interval, endpoints included.
std::vector<double> angle_grid(const Interval& range, std::size_t points);

/// Grid angle with the largest delta among those where the sparse array does
/// not fit; empty when every grid point admits the closed form.
std::optional<double> narrow_branch_psi(const BsAngles& angles, std::size_t antennas, const Interval& region,
                                        const std::vector<double>& grid, const RadioContext& radio);

struct PsiSearch {
    double psi = 0.0;
    P31Solution best;
    std::vector<double> values; // per grid point
};

/// Exhaustive search over the psi grid; each grid point runs DE on its own
/// sub-stream of `seed`. Ties go to the smallest angle.
PsiSearch search_psi(const BsAngles& angles, std::size_t antennas, const ConfigRegions& regions,
                     const std::vector<double>& grid, const RadioContext& radio, const DeParams& de,
                     std::uint64_t seed, std::size_t threads = 1);

struct P32Options {
    SdpOptions sdp;
    std::size_t randomizations = 100;
    bool refine = true; // coordinate ascent on the extracted phases
};

struct P32Solution {
    CVec v;
    double value = 0.0;         // expected_equivalent_gain(v)
    double sdp_objective = 0.0; // relaxation upper bound
    bool sdp_converged = false;
};

/// Reflection design for the single-user gain at fixed angles: SDR on the
/// lifted matrix, Gaussian-randomized extraction, optional refinement.
P32Solution solve_p32(const ExpectedGainTerms& terms, const P32Options& options, Rng& rng);

struct PhiSearch {
    double phi = 0.0;
    P32Solution best;
    std::vector<double> values;
};

using TermsFactory = std::function<ExpectedGainTerms(double phi)>;

PhiSearch search_phi(const TermsFactory& terms_at, const std::vector<double>& grid, const P32Options& options,
                     std::uint64_t seed, std::size_t threads = 1);

struct SingleUserParams {
    DeParams de;
    std::size_t psi_points = 61;
    std::size_t phi_points = 61;
    P32Options p32;
    double power = 1.0;       // W
    double noise = 1e-7;      // W
    std::size_t rate_samples = 500;
    bool optimize_psi = true;
    bool optimize_q = true;
    bool optimize_phi = true;
    std::size_t threads = 1;
};

struct SingleUserResult {
    ArraySurfaceConfig config;
    CVec v;
    double predicted_gain = 0.0; // expected equivalent gain at (config, v)
    MonteCarloEstimate rate;     // MRT rate over fresh draws (bps/Hz)
    bool closed_form = false;
    PsiSearch psi_search;
    PhiSearch phi_search;
};

/// BS-side subproblem (psi, q) then surface subproblem (phi, v) for user 0.
/// Variables switched off in `params` stay at the half-wavelength ULA / zero
/// rotation. The rate uses the "rate-test" stream of `seed`.
SingleUserResult single_user_pipeline(const StatisticalCsi& scsi, const IrsLayout& layout, const RadioContext& radio,
                                      const ConfigRegions& regions, std::size_t antennas,
                                      const SingleUserParams& params, std::uint64_t seed);

/// Average MRT rate for user 0 over independent draws.
MonteCarloEstimate mrt_rate_estimate(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                                     const IrsLayout& layout, const RadioContext& radio, const CVec& v,
                                     double power, double noise, std::size_t samples, Rng& rng);

} // namespace irsma
