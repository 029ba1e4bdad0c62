#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "irsma/beamforming.hpp"
#include "irsma/channel_model.hpp"
#include "irsma/differential_evolution.hpp"
#include "irsma/single_user.hpp"

namespace irsma {

/// Sum over users of ln(1 + SINR_k) at reflection vector v.
double sum_rate_nat(const InstantaneousChannels& channels, const CMat& W, const CVec& v, double noise_power);

/// Gradient dR/dv^* of sum_rate_nat (Wirtinger derivative with respect to the
/// conjugate), so that dR = 2 Re{ J^H dv } to first order. Divide by ln 2 for
/// the log2 rate.
CVec rate_jacobian(const InstantaneousChannels& channels, const CMat& W, const CVec& v, double noise_power);

/// Per-element maximizer of 2 Re{conj(f) (x - v)} - tau |x - v|^2 over the unit
/// disk: v + f / tau, projected radially when it leaves the disk.
cplx lemma4_update(cplx v_prev, cplx f, double tau);

double ssca_rho(int iteration);
double ssca_delta(int iteration);

struct SscaOptions {
    std::size_t batch = 50;  // T_H
    double tau = 0.015;
    int max_iter = 300;
    int window = 10;
    double tol = 1e-3;       // bps/Hz, max - min of the surrogate over the window
    WmmseOptions wmmse;
};

struct SscaState {
    int iteration = 0;
    CVec v;                       // current iterate, |v_n| <= 1
    std::vector<double> r_hat;    // per-user rate estimates (bps/Hz)
    CVec f;                       // surrogate gradient (log2 units)
    double rho = 1.0;
    double delta = 1.0;
    double surrogate = 0.0;       // surrogate value at the current iterate

    static SscaState initial(std::size_t elements, std::size_t users);
};

/// R_hat <- (1 - rho) R_hat + rho * mean rate, f <- (1 - rho) f + rho * mean
/// Jacobian / ln 2, each sample beamformed by WMMSE at state.v.
void ssca_surrogate_update(SscaState& state, const std::vector<InstantaneousChannels>& batch, double rho,
                           double power, double noise_power, const WmmseOptions& wmmse, std::size_t threads = 1);

/// One full iteration: surrogate update with rho^(i), closed-form surrogate
/// maximizer, blend with delta^(i), surrogate value at the new iterate.
void ssca_iteration(SscaState& state, const std::vector<InstantaneousChannels>& batch, double tau, double power,
                    double noise_power, const WmmseOptions& wmmse, std::size_t threads = 1);

struct RateEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Mean WMMSE sum rate (bps/Hz) over `samples` draws from `rng`.
RateEstimate average_sum_rate(const ChannelSampler& sampler, const CVec& v, double power, double noise_power,
                              std::size_t samples, Rng& rng, const WmmseOptions& wmmse = {}, std::size_t threads = 1);

struct InnerResult {
    CVec v;                        // unit modulus
    RateEstimate rate;             // on the evaluation draws
    int iterations = 0;
    bool converged = false;
    std::vector<double> surrogate; // SSCA only
    double relaxed_rate = 0.0;     // SSCA only: rate of the pre-projection iterate on the same draws
    double sdp_objective = 0.0;    // SCG only
    double scg_value = 0.0;        // SCG only: sum of expected gains at v
};

struct InnerContext {
    const StatisticalCsi* scsi = nullptr;
    const IrsLayout* layout = nullptr;
    const RadioContext* radio = nullptr;
    double power = 1.0;
    double noise = 1e-7;
    std::size_t eval_samples = 20; // T_H draws for the fitness readout
    WmmseOptions wmmse;
    std::size_t threads = 1;
};

/// SSCA on the reflection vector at a fixed configuration. Iteration i draws
/// its batch from stream ("ssca-batch", i) of `seed`; the readout uses
/// ("inner-eval") of the same seed. `v0` defaults to all ones.
InnerResult ssca_inner(const ArraySurfaceConfig& config, const InnerContext& ctx, const SscaOptions& options,
                       std::uint64_t seed, const CVec* v0 = nullptr);

/// Low-complexity inner solver: one SDR on the summed lifted matrices, then the
/// WMMSE sample-average readout on ("inner-eval") draws of `seed`.
InnerResult scg_inner(const ArraySurfaceConfig& config, const InnerContext& ctx, const P32Options& options,
                      std::uint64_t seed);

/// Sum over users of the lifted gain matrices at `config`.
CMat summed_heff(const StatisticalCsi& scsi, const ArraySurfaceConfig& config, const IrsLayout& layout,
                 const RadioContext& radio);

double outer_fitness(const RVec& q, double inner_rate, double min_spacing, double eta);

enum class InnerKind { scg, ssca };

struct ExtendedDeParams {
    DeParams de;
    InnerKind inner = InnerKind::scg;
    SscaOptions ssca;
    P32Options p32;
    bool warm_start = false;  // SSCA starts from the SCG solution instead of all ones
    bool seed_baseline = false; // put the centered ULA with zero rotations in the initial population
};

struct ExtendedDeResult {
    ArraySurfaceConfig config;
    InnerResult inner;
    double fitness = 0.0;
    std::vector<double> best_trace;
};

/// Packs (q, psi, phi) into one vector and back.
RVec pack_config(const ArraySurfaceConfig& config);
ArraySurfaceConfig unpack_config(const RVec& x, const ConfigRegions& regions);

/// Box for the extended DE; coordinates not optimized are pinned to `baseline`.
Bounds config_bounds(const ArraySurfaceConfig& baseline, bool free_q, bool free_psi, bool free_phi);

/// DE over [q, psi, phi] within `bounds`. Every individual is scored with the
/// same inner seed (common random numbers), so fitness is a deterministic
/// function of the configuration.
ExtendedDeResult extended_de(const InnerContext& ctx, const ConfigRegions& regions, const Bounds& bounds,
                             const ExtendedDeParams& params, std::uint64_t seed);

} // namespace irsma
