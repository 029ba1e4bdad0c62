#include "irsma/single_user.hpp"

#include <cmath>
#include <stdexcept>

#include "irsma/beamforming.hpp"
#include "irsma/parallel.hpp"

namespace irsma {

double delta_factor(double aod_irs, double aod_user, double psi)
{
    return std::abs(std::cos(aod_irs + psi) + std::cos(aod_user - psi));
}

RVec sparse_array_positions(double delta, std::size_t antennas, double q_min, double wavelength)
{
    if (!(delta > 0.0))
        throw std::invalid_argument("sparse_array_positions: delta must be positive");
    RVec q(static_cast<Eigen::Index>(antennas));
    for (std::size_t m = 0; m < antennas; ++m)
        q[static_cast<Eigen::Index>(m)] = q_min + static_cast<double>(m) * wavelength / delta;
    return q;
}

double bs_coupling(const RVec& q, double psi, double aod_irs, double aod_user, const RadioContext& radio)
{
    return std::abs(transmit_frv(q, psi, aod_irs, radio).dot(bs_user_frv(q, psi, aod_user, radio)));
}

BsAngles BsAngles::of(const StatisticalCsi& scsi, std::size_t user)
{
    if (user >= scsi.users())
        throw std::out_of_range("BsAngles::of: user index out of range");
    return {scsi.bs_irs.departure.at(0), scsi.bs_user[user].departure.at(0)};
}

double de_fitness(const RVec& q, double psi, const BsAngles& angles, const RadioContext& radio, double eta)
{
    return bs_coupling(q, psi, angles.irs, angles.user, radio) - spacing_penalty(q, radio.min_spacing(), eta);
}

bool closed_form_branch(double delta, std::size_t antennas, const Interval& region, double wavelength)
{
    if (antennas <= 1)
        return true;
    if (!(delta > 0.0))
        return false;
    // delta >= (M-1) lambda / D, written without the division; equality counts.
    const double need = static_cast<double>(antennas - 1) * wavelength;
    return delta * region.width() >= need * (1.0 - 1e-12);
}

P31Solution position_de(double psi, const BsAngles& angles, std::size_t antennas, const Interval& region,
                        const RadioContext& radio, const DeParams& de, Rng& rng)
{
    if (antennas == 0)
        throw std::invalid_argument("position_de: need at least one antenna");
    P31Solution sol;
    const auto M = static_cast<Eigen::Index>(antennas);
    const Bounds bounds = Bounds::uniform(M, region.lo, region.hi);
    const auto fitness =
        sequential_fitness([&](const RVec& q) { return de_fitness(q, psi, angles, radio, de.penalty); });
    DeRun run = run_de(bounds, de, rng, fitness, M);
    sol.trace = std::move(run.best_trace);
    sol.q = repair_spacing(run.population.best_individual(), radio.min_spacing(), region);
    sol.value = bs_coupling(sol.q, psi, angles.irs, angles.user, radio);
    return sol;
}

P31Solution solve_p31(double psi, const BsAngles& angles, std::size_t antennas, const Interval& region,
                      const RadioContext& radio, const DeParams& de, Rng& rng)
{
    if (antennas == 0)
        throw std::invalid_argument("solve_p31: need at least one antenna");
    const double delta = delta_factor(angles.irs, angles.user, psi);
    if (!closed_form_branch(delta, antennas, region, radio.wavelength()))
        return position_de(psi, angles, antennas, region, radio, de, rng);
    P31Solution sol;
    sol.closed_form = true;
    sol.q = antennas == 1 ? RVec::Constant(1, region.lo)
                          : sparse_array_positions(delta, antennas, region.lo, radio.wavelength());
    sol.value = bs_coupling(sol.q, psi, angles.irs, angles.user, radio);
    return sol;
}

std::optional<double> narrow_branch_psi(const BsAngles& angles, std::size_t antennas, const Interval& region,
                                        const std::vector<double>& grid, const RadioContext& radio)
{
    std::optional<double> best;
    double best_delta = -1.0;
    for (double psi : grid) {
        const double delta = delta_factor(angles.irs, angles.user, psi);
        if (closed_form_branch(delta, antennas, region, radio.wavelength()))
            continue;
        if (delta > best_delta) {
            best_delta = delta;
            best = psi;
        }
    }
    return best;
}

std::vector<double> angle_grid(const Interval& range, std::size_t points)
{
    if (points == 0)
        throw std::invalid_argument("angle_grid: need at least one point");
    if (points == 1)
        return {0.5 * (range.lo + range.hi)};
    std::vector<double> grid(points);
    const double step = range.width() / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = range.lo + static_cast<double>(i) * step;
    grid.back() = range.hi;
    return grid;
}

namespace {

// Index of the largest value; ties resolved towards the smallest angle.
std::size_t best_index(const std::vector<double>& values, const std::vector<double>& grid)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best] || (values[i] == values[best] && grid[i] < grid[best]))
            best = i;
    }
    return best;
}

} // namespace

PsiSearch search_psi(const BsAngles& angles, std::size_t antennas, const ConfigRegions& regions,
                     const std::vector<double>& grid, const RadioContext& radio, const DeParams& de,
                     std::uint64_t seed, std::size_t threads)
{
    if (grid.empty())
        throw std::invalid_argument("search_psi: empty grid");
    std::vector<P31Solution> sols(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, "de-psi", i);
        sols[i] = solve_p31(grid[i], angles, antennas, regions.q, radio, de, rng);
    });
    PsiSearch out;
    out.values.reserve(grid.size());
    for (const auto& s : sols)
        out.values.push_back(s.value);
    const std::size_t b = best_index(out.values, grid);
    out.psi = grid[b];
    out.best = std::move(sols[b]);
    return out;
}

P32Solution solve_p32(const ExpectedGainTerms& terms, const P32Options& options, Rng& rng)
{
    const CMat H = heff_matrix(terms);
    const SdpSolution sdp = solve_diag_trace_sdp(H, options.sdp);
    P32Solution out;
    out.v = extract_rank_one(sdp.V, H, options.randomizations, rng);
    if (options.refine)
        out.v = refine_phases(H, out.v);
    out.value = expected_equivalent_gain(terms, out.v);
    out.sdp_objective = sdp.objective;
    out.sdp_converged = sdp.converged;
    return out;
}

PhiSearch search_phi(const TermsFactory& terms_at, const std::vector<double>& grid, const P32Options& options,
                     std::uint64_t seed, std::size_t threads)
{
    if (grid.empty())
        throw std::invalid_argument("search_phi: empty grid");
    std::vector<P32Solution> sols(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, "sdr-phi", i);
        sols[i] = solve_p32(terms_at(grid[i]), options, rng);
    });
    PhiSearch out;
    out.values.reserve(grid.size());
    for (const auto& s : sols)
        out.values.push_back(s.value);
    const std::size_t b = best_index(out.values, grid);
    out.phi = grid[b];
    out.best = std::move(sols[b]);
    return out;
}

MonteCarloEstimate mrt_rate_estimate(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                                     const IrsLayout& layout, const RadioContext& radio, const CVec& v,
                                     double power, double noise, std::size_t samples, Rng& rng)
{
    if (samples == 0)
        throw std::invalid_argument("mrt_rate_estimate: need at least one sample");
    const ChannelSampler sampler(scsi, config, layout, radio);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const InstantaneousChannels ch = sampler.draw(rng);
        const double r = mrt_rate(effective_channel(ch.h[0], ch.r[0], ch.G, v), power, noise);
        sum += r;
        sum_sq += r * r;
    }
    const double n = static_cast<double>(samples);
    MonteCarloEstimate est;
    est.samples = samples;
    est.mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0)) : 0.0;
    est.std_error = std::sqrt(var / n);
    return est;
}

SingleUserResult single_user_pipeline(const StatisticalCsi& scsi, const IrsLayout& layout, const RadioContext& radio,
                                      const ConfigRegions& regions, std::size_t antennas,
                                      const SingleUserParams& params, std::uint64_t seed)
{
    scsi.validate();
    const BsAngles angles = BsAngles::of(scsi, 0);
    SingleUserResult res;
    res.config = ArraySurfaceConfig::centered_ula(antennas, radio.min_spacing(), regions);

    const std::vector<double> psi_grid =
        params.optimize_psi ? angle_grid(regions.psi, params.psi_points) : std::vector<double>{0.0};
    if (params.optimize_q) {
        res.psi_search = search_psi(angles, antennas, regions, psi_grid, radio, params.de, seed, params.threads);
        res.config.q = res.psi_search.best.q;
        res.closed_form = res.psi_search.best.closed_form;
    } else {
        // Positions pinned: only the rotation is searched.
        PsiSearch& s = res.psi_search;
        for (double psi : psi_grid)
            s.values.push_back(bs_coupling(res.config.q, psi, angles.irs, angles.user, radio));
        const std::size_t b = best_index(s.values, psi_grid);
        s.psi = psi_grid[b];
        s.best.q = res.config.q;
        s.best.value = s.values[b];
    }
    res.config.psi = res.psi_search.psi;

    const std::vector<double> phi_grid =
        params.optimize_phi ? angle_grid(regions.phi, params.phi_points) : std::vector<double>{0.0};
    const ArraySurfaceConfig bs_side = res.config;
    const TermsFactory terms_at = [&](double phi) {
        ArraySurfaceConfig c = bs_side;
        c.phi = phi;
        return expected_gain_terms(scsi, c, layout, radio, 0);
    };
    res.phi_search = search_phi(terms_at, phi_grid, params.p32, seed, params.threads);
    res.config.phi = res.phi_search.phi;
    res.v = res.phi_search.best.v;
    res.predicted_gain = res.phi_search.best.value;

    Rng test = Rng::stream(seed, "rate-test");
    res.rate = mrt_rate_estimate(scsi, res.config, layout, radio, res.v, params.power, params.noise,
                                 params.rate_samples, test);
    return res;
}

} // namespace irsma
