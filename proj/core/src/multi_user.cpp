#include "irsma/multi_user.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "irsma/parallel.hpp"
#include "irsma/statistics.hpp"

namespace irsma {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void check_noise(double noise_power)
{
    if (!(noise_power > 0.0))
        throw std::invalid_argument("noise power must be positive");
}

RateEstimate summarize(const std::vector<double>& xs)
{
    RateEstimate est;
    est.samples = xs.size();
    if (xs.empty())
        return est;
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    est.mean = sum / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs)
            ss += (x - est.mean) * (x - est.mean);
        est.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return est;
}

CVec unit_modulus(const CVec& v)
{
    CVec out(v.size());
    for (Eigen::Index n = 0; n < v.size(); ++n)
        out[n] = std::abs(v[n]) > 0.0 ? v[n] / std::abs(v[n]) : cplx(1.0, 0.0);
    return out;
}

std::vector<InstantaneousChannels> draw_batch(const ChannelSampler& sampler, std::size_t count, Rng& rng)
{
    std::vector<InstantaneousChannels> batch;
    batch.reserve(count);
    for (std::size_t s = 0; s < count; ++s)
        batch.push_back(sampler.draw(rng));
    return batch;
}

} // namespace

double sum_rate_nat(const InstantaneousChannels& channels, const CMat& W, const CVec& v, double noise_power)
{
    check_noise(noise_power);
    const RateReport rep = sinr_and_rate(effective_channels(channels, v), W, noise_power);
    double total = 0.0;
    for (double g : rep.sinr)
        total += std::log1p(g);
    return total;
}

CVec rate_jacobian(const InstantaneousChannels& channels, const CMat& W, const CVec& v, double noise_power)
{
    check_noise(noise_power);
    const auto K = static_cast<Eigen::Index>(channels.users());
    if (W.cols() != K)
        throw std::invalid_argument("rate_jacobian: W must have one column per user");
    const CMat H = effective_channels(channels, v);
    const CMat A = H.adjoint() * W;        // A(k, j) = h_eff,k^H w_j
    const CMat GW = channels.G * W;        // column j: G w_j
    CVec J = CVec::Zero(v.size());
    for (Eigen::Index k = 0; k < K; ++k) {
        const double all = A.row(k).squaredNorm() + noise_power;   // Gamma_k
        const double others = all - std::norm(A(k, k));            // Gamma_{-k}
        // d|a_kj|^2 / dv^* = r_k .* conj(G w_j) a_kj
        CVec acc = CVec::Zero(v.size());
        for (Eigen::Index j = 0; j < K; ++j) {
            const double weight = j == k ? 1.0 / all : 1.0 / all - 1.0 / others;
            acc += (weight * A(k, j)) * GW.col(j).conjugate();
        }
        J += channels.r[static_cast<std::size_t>(k)].cwiseProduct(acc);
    }
    return J;
}

cplx lemma4_update(cplx v_prev, cplx f, double tau)
{
    if (!(tau > 0.0))
        throw std::invalid_argument("lemma4_update: tau must be positive");
    const cplx x = v_prev + f / tau;
    const double r = std::abs(x);
    return r <= 1.0 ? x : x / r;
}

double ssca_rho(int iteration)
{
    return std::pow(1.0 + iteration, -0.8);
}

double ssca_delta(int iteration)
{
    return 2.0 / (2.0 + iteration);
}

SscaState SscaState::initial(std::size_t elements, std::size_t users)
{
    SscaState s;
    s.v = CVec::Ones(static_cast<Eigen::Index>(elements));
    s.r_hat.assign(users, 0.0);
    s.f = CVec::Zero(static_cast<Eigen::Index>(elements));
    return s;
}

void ssca_surrogate_update(SscaState& state, const std::vector<InstantaneousChannels>& batch, double rho,
                           double power, double noise_power, const WmmseOptions& wmmse, std::size_t threads)
{
    if (batch.empty())
        throw std::invalid_argument("ssca_surrogate_update: empty batch");
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("ssca_surrogate_update: rho must lie in (0, 1]");
    const std::size_t K = state.r_hat.size();
    std::vector<std::vector<double>> rates(batch.size());
    std::vector<CVec> jac(batch.size());
    parallel_for(batch.size(), threads, [&](std::size_t s) {
        const CMat H = effective_channels(batch[s], state.v);
        WmmseResult bf;
        try {
            bf = irsma::wmmse(H, power, noise_power, wmmse);
        } catch (const BisectionError& e) {
            throw BisectionError(std::string(e.what()) + " (batch sample " + std::to_string(s) + ")");
        }
        rates[s] = sinr_and_rate(H, bf.precoder.W, noise_power).rate;
        jac[s] = rate_jacobian(batch[s], bf.precoder.W, state.v, noise_power);
    });

    const double n = static_cast<double>(batch.size());
    CVec mean_j = CVec::Zero(state.v.size());
    std::vector<double> mean_r(K, 0.0);
    for (std::size_t s = 0; s < batch.size(); ++s) {
        if (rates[s].size() != K)
            throw std::invalid_argument("ssca_surrogate_update: user count mismatch");
        for (std::size_t k = 0; k < K; ++k)
            mean_r[k] += rates[s][k] / n;
        mean_j += jac[s] / n;
    }
    for (std::size_t k = 0; k < K; ++k)
        state.r_hat[k] = (1.0 - rho) * state.r_hat[k] + rho * mean_r[k];
    // The Jacobian is for natural-log rates; the surrogate is kept in bps/Hz.
    state.f = (1.0 - rho) * state.f + (rho / kLn2) * mean_j;
    state.rho = rho;
}

void ssca_iteration(SscaState& state, const std::vector<InstantaneousChannels>& batch, double tau, double power,
                    double noise_power, const WmmseOptions& wmmse, std::size_t threads)
{
    const int i = ++state.iteration;
    ssca_surrogate_update(state, batch, ssca_rho(i), power, noise_power, wmmse, threads);
    CVec v_bar(state.v.size());
    for (Eigen::Index n = 0; n < state.v.size(); ++n)
        v_bar[n] = lemma4_update(state.v[n], state.f[n], tau);
    state.delta = ssca_delta(i);
    const CVec v_prev = state.v;
    state.v = (1.0 - state.delta) * v_prev + state.delta * v_bar;
    const CVec step = state.v - v_prev;
    double r_sum = 0.0;
    for (double r : state.r_hat)
        r_sum += r;
    state.surrogate = r_sum + 2.0 * state.f.dot(step).real() - tau * step.squaredNorm();
}

RateEstimate average_sum_rate(const ChannelSampler& sampler, const CVec& v, double power, double noise_power,
                              std::size_t samples, Rng& rng, const WmmseOptions& wmmse_options, std::size_t threads)
{
    if (samples == 0)
        throw std::invalid_argument("average_sum_rate: need at least one sample");
    const auto batch = draw_batch(sampler, samples, rng);
    std::vector<double> rates(samples);
    parallel_for(samples, threads, [&](std::size_t s) {
        const CMat H = effective_channels(batch[s], v);
        if (H.cols() == 1) {
            rates[s] = mrt_rate(H.col(0), power, noise_power);
        } else {
            const WmmseResult bf = wmmse(H, power, noise_power, wmmse_options);
            rates[s] = bf.rate_trace.back();
        }
    });
    return summarize(rates);
}

InnerResult ssca_inner(const ArraySurfaceConfig& config, const InnerContext& ctx, const SscaOptions& options,
                       std::uint64_t seed, const CVec* v0)
{
    if (!ctx.scsi || !ctx.layout || !ctx.radio)
        throw std::invalid_argument("ssca_inner: incomplete context");
    if (options.batch == 0 || options.window < 1)
        throw std::invalid_argument("ssca_inner: batch and window must be positive");
    const ChannelSampler sampler(*ctx.scsi, config, *ctx.layout, *ctx.radio);
    SscaState state = SscaState::initial(sampler.elements(), sampler.users());
    if (v0) {
        if (v0->size() != state.v.size())
            throw std::invalid_argument("ssca_inner: initial point has the wrong size");
        state.v = *v0;
    }

    InnerResult out;
    const auto window = static_cast<std::size_t>(options.window);
    for (int i = 1; i <= options.max_iter; ++i) {
        Rng rng = Rng::stream(seed, "ssca-batch", static_cast<std::uint64_t>(i));
        const auto batch = draw_batch(sampler, options.batch, rng);
        ssca_iteration(state, batch, options.tau, ctx.power, ctx.noise, options.wmmse, ctx.threads);
        out.surrogate.push_back(state.surrogate);
        out.iterations = i;
        if (out.surrogate.size() >= window) {
            const auto first = out.surrogate.end() - static_cast<std::ptrdiff_t>(window);
            const auto [lo, hi] = std::minmax_element(first, out.surrogate.end());
            if (*hi - *lo < options.tol) {
                out.converged = true;
                break;
            }
        }
    }

    out.v = unit_modulus(state.v);
    Rng eval = Rng::stream(seed, "inner-eval");
    out.rate = average_sum_rate(sampler, out.v, ctx.power, ctx.noise, ctx.eval_samples, eval, ctx.wmmse, ctx.threads);
    Rng eval_relaxed = Rng::stream(seed, "inner-eval");
    out.relaxed_rate = average_sum_rate(sampler, state.v, ctx.power, ctx.noise, ctx.eval_samples, eval_relaxed,
                                        ctx.wmmse, ctx.threads)
                           .mean;
    return out;
}

CMat summed_heff(const StatisticalCsi& scsi, const ArraySurfaceConfig& config, const IrsLayout& layout,
                 const RadioContext& radio)
{
    const auto N = static_cast<Eigen::Index>(layout.size());
    CMat H = CMat::Zero(N + 1, N + 1);
    for (std::size_t k = 0; k < scsi.users(); ++k)
        H += heff_matrix(expected_gain_terms(scsi, config, layout, radio, k));
    return H;
}

InnerResult scg_inner(const ArraySurfaceConfig& config, const InnerContext& ctx, const P32Options& options,
                      std::uint64_t seed)
{
    if (!ctx.scsi || !ctx.layout || !ctx.radio)
        throw std::invalid_argument("scg_inner: incomplete context");
    const CMat H = summed_heff(*ctx.scsi, config, *ctx.layout, *ctx.radio);
    const SdpSolution sdp = solve_diag_trace_sdp(H, options.sdp);
    Rng extract = Rng::stream(seed, "scg-extract");
    InnerResult out;
    out.v = extract_rank_one(sdp.V, H, options.randomizations, extract);
    if (options.refine)
        out.v = refine_phases(H, out.v);
    out.sdp_objective = sdp.objective;
    out.scg_value = lifted_objective(H, out.v);
    out.iterations = sdp.iterations;
    out.converged = sdp.converged;

    const ChannelSampler sampler(*ctx.scsi, config, *ctx.layout, *ctx.radio);
    Rng eval = Rng::stream(seed, "inner-eval");
    out.rate = average_sum_rate(sampler, out.v, ctx.power, ctx.noise, ctx.eval_samples, eval, ctx.wmmse, ctx.threads);
    return out;
}

double outer_fitness(const RVec& q, double inner_rate, double min_spacing, double eta)
{
    return inner_rate - spacing_penalty(q, min_spacing, eta);
}

RVec pack_config(const ArraySurfaceConfig& config)
{
    const Eigen::Index M = config.q.size();
    RVec x(M + 2);
    x.head(M) = config.q;
    x[M] = config.psi;
    x[M + 1] = config.phi;
    return x;
}

ArraySurfaceConfig unpack_config(const RVec& x, const ConfigRegions& regions)
{
    if (x.size() < 3)
        throw std::invalid_argument("unpack_config: vector too short");
    const Eigen::Index M = x.size() - 2;
    ArraySurfaceConfig c;
    c.q = x.head(M);
    c.psi = x[M];
    c.phi = x[M + 1];
    c.regions = regions;
    return c;
}

Bounds config_bounds(const ArraySurfaceConfig& baseline, bool free_q, bool free_psi, bool free_phi)
{
    const RVec x = pack_config(baseline);
    const Eigen::Index M = baseline.q.size();
    Bounds b{x, x};
    if (free_q) {
        b.lo.head(M).setConstant(baseline.regions.q.lo);
        b.hi.head(M).setConstant(baseline.regions.q.hi);
    }
    if (free_psi) {
        b.lo[M] = baseline.regions.psi.lo;
        b.hi[M] = baseline.regions.psi.hi;
    }
    if (free_phi) {
        b.lo[M + 1] = baseline.regions.phi.lo;
        b.hi[M + 1] = baseline.regions.phi.hi;
    }
    return b;
}

namespace {

InnerResult run_inner(const ArraySurfaceConfig& config, const InnerContext& ctx, const ExtendedDeParams& params,
                      std::uint64_t inner_seed)
{
    if (params.inner == InnerKind::scg)
        return scg_inner(config, ctx, params.p32, inner_seed);
    if (params.warm_start) {
        const InnerResult start = scg_inner(config, ctx, params.p32, inner_seed);
        return ssca_inner(config, ctx, params.ssca, inner_seed, &start.v);
    }
    return ssca_inner(config, ctx, params.ssca, inner_seed);
}

} // namespace

ExtendedDeResult extended_de(const InnerContext& ctx, const ConfigRegions& regions, const Bounds& bounds,
                             const ExtendedDeParams& params, std::uint64_t seed)
{
    bounds.validate();
    const Eigen::Index M = bounds.size() - 2;
    if (M < 1)
        throw std::invalid_argument("extended_de: bounds must cover q, psi and phi");
    const double d = ctx.radio->min_spacing();
    const std::uint64_t inner_seed = derive_seed(seed, "outer-fitness");

    // Individuals run in parallel; each inner solve stays single-threaded.
    InnerContext serial = ctx;
    serial.threads = 1;
    const BatchFitness fitness = [&](const std::vector<RVec>& xs) {
        std::vector<double> out(xs.size());
        parallel_for(xs.size(), ctx.threads, [&](std::size_t p) {
            const ArraySurfaceConfig c = unpack_config(xs[p], regions);
            const InnerResult r = run_inner(c, serial, params, inner_seed);
            out[p] = outer_fitness(c.q, r.rate.mean, d, params.de.penalty);
        });
        return out;
    };

    std::vector<RVec> seeds;
    if (params.seed_baseline) {
        ArraySurfaceConfig ula = ArraySurfaceConfig::centered_ula(static_cast<std::size_t>(M), d, regions);
        seeds.push_back(bounds.clamp(pack_config(ula)));
    }
    Rng rng = Rng::stream(seed, "extended-de");
    DeRun run = run_de(bounds, params.de, rng, fitness, M, seeds);

    ExtendedDeResult res;
    res.best_trace = std::move(run.best_trace);
    res.fitness = run.population.best_fitness();
    res.config = unpack_config(run.population.best_individual(), regions);
    const bool q_free = (bounds.hi.head(M) - bounds.lo.head(M)).maxCoeff() > 0.0;
    if (q_free)
        res.config.q = repair_spacing(res.config.q, d, regions.q);
    res.inner = run_inner(res.config, ctx, params, inner_seed);
    return res;
}

} // namespace irsma
