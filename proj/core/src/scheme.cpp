#include "irsma/scheme.hpp"

#include <array>
#include <stdexcept>

namespace irsma {

namespace {

struct SchemeInfo {
    SchemeId id;
    std::string_view name;
    SchemeRestriction free;
};

constexpr std::array<SchemeInfo, 8> kSchemes{{
    {SchemeId::proposed, "proposed", {true, true, true}},
    {SchemeId::fixed_configuration, "fixed", {false, false, false}},
    {SchemeId::sixdma_firs, "sixdma_firs", {true, true, false}},
    {SchemeId::rirs_only, "rirs_only", {false, false, true}},
    {SchemeId::rotatable_firs, "rotatable_firs", {false, true, false}},
    {SchemeId::positionable_firs, "positionable_firs", {true, false, false}},
    {SchemeId::de_ssca, "de_ssca", {true, true, true}},
    {SchemeId::low_complexity, "low_complexity", {true, true, true}},
}};

const SchemeInfo& info(SchemeId id)
{
    for (const auto& s : kSchemes)
        if (s.id == id)
            return s;
    throw std::logic_error("unknown scheme id");
}

} // namespace

std::string_view scheme_name(SchemeId id)
{
    return info(id).name;
}

std::optional<SchemeId> parse_scheme(std::string_view name)
{
    if (name == "fixed_configuration")
        return SchemeId::fixed_configuration;
    for (const auto& s : kSchemes)
        if (s.name == name)
            return s.id;
    return std::nullopt;
}

const std::vector<SchemeId>& all_schemes()
{
    static const std::vector<SchemeId> ids = [] {
        std::vector<SchemeId> v;
        for (const auto& s : kSchemes)
            v.push_back(s.id);
        return v;
    }();
    return ids;
}

SchemeRestriction restriction(SchemeId id)
{
    return info(id).free;
}

StatisticalCsi scenario_scsi(const ExperimentConfig& config, std::uint64_t seed)
{
    const RadioContext radio = config.radio();
    Rng user_rng = Rng::stream(seed, "users");
    const NodeGeometry geometry = config.geometry.with_random_users(config.system.users, user_rng);
    ScsiOptions opts;
    opts.nlos_power_ratio = config.system.nlos_power_ratio;
    return sample_scsi(geometry, config.system.paths, radio, derive_seed(seed, "scsi"), opts);
}

namespace {

InnerKind inner_for(const ExperimentConfig& config, SchemeId id)
{
    if (id == SchemeId::de_ssca)
        return InnerKind::ssca;
    if (id == SchemeId::low_complexity)
        return InnerKind::scg;
    return config.algorithm.proposed_inner;
}

P32Options p32_options(const ExperimentConfig& config)
{
    P32Options o;
    o.sdp = config.algorithm.sdp;
    o.randomizations = config.algorithm.randomizations;
    o.refine = config.algorithm.refine;
    return o;
}

void fill_config(ResultRecord& rec, const ArraySurfaceConfig& c)
{
    rec.psi = c.psi;
    rec.phi = c.phi;
    rec.q.assign(c.q.data(), c.q.data() + c.q.size());
}

ResultRecord run_single_user(const ExperimentConfig& config, SchemeId scheme, const StatisticalCsi& scsi,
                             std::uint64_t seed, ResultRecord rec, SchemeTraces* traces)
{
    const SchemeRestriction free = restriction(scheme);
    SingleUserParams p;
    p.de = config.algorithm.de;
    p.psi_points = config.algorithm.psi_points;
    p.phi_points = config.algorithm.phi_points;
    p.p32 = p32_options(config);
    p.power = config.power_watts();
    p.noise = config.noise_watts();
    p.rate_samples = config.run.test_samples;
    p.optimize_q = free.q;
    p.optimize_psi = free.psi;
    p.optimize_phi = free.phi;
    p.threads = config.run.threads;
    const SingleUserResult r = single_user_pipeline(scsi, config.layout(), config.radio(), config.regions(),
                                                    config.system.antennas, p, seed);
    rec.rate_mean = r.rate.mean;
    rec.rate_se = r.rate.std_error;
    rec.objective = r.predicted_gain;
    rec.converged = r.phi_search.best.sdp_converged;
    fill_config(rec, r.config);
    if (traces)
        traces->de_best = r.psi_search.best.trace;
    return rec;
}

} // namespace

namespace {

InnerContext inner_context(const ExperimentConfig& config, const StatisticalCsi& scsi, const IrsLayout& layout,
                           const RadioContext& radio)
{
    InnerContext ctx;
    ctx.scsi = &scsi;
    ctx.layout = &layout;
    ctx.radio = &radio;
    ctx.power = config.power_watts();
    ctx.noise = config.noise_watts();
    ctx.eval_samples = config.algorithm.ssca.batch;
    ctx.wmmse = config.algorithm.wmmse;
    ctx.threads = config.run.threads;
    return ctx;
}

SscaOptions ssca_options(const ExperimentConfig& config)
{
    SscaOptions o = config.algorithm.ssca;
    o.wmmse = config.algorithm.wmmse;
    return o;
}

} // namespace

InnerResult baseline_ssca(const ExperimentConfig& config, std::uint64_t seed)
{
    config.validate();
    const StatisticalCsi scsi = scenario_scsi(config, seed);
    const RadioContext radio = config.radio();
    const IrsLayout layout = config.layout();
    const ArraySurfaceConfig ula =
        ArraySurfaceConfig::centered_ula(config.system.antennas, radio.min_spacing(), config.regions());
    return ssca_inner(ula, inner_context(config, scsi, layout, radio), ssca_options(config),
                      derive_seed(seed, "outer-fitness"));
}

ResultRecord run_scheme(const ExperimentConfig& config, SchemeId scheme, std::uint64_t seed, SchemeTraces* traces)
{
    config.validate();
    const StatisticalCsi scsi = scenario_scsi(config, seed);
    const RadioContext radio = config.radio();
    const IrsLayout layout = config.layout();
    const ConfigRegions regions = config.regions();

    ResultRecord rec;
    rec.scheme = std::string(scheme_name(scheme));
    rec.seed = seed;
    rec.users = config.system.users;
    rec.antennas = config.system.antennas;
    rec.elements = layout.size();
    rec.test_samples = config.run.test_samples;
    rec.config_hash = config.hash();

    if (config.system.users == 1)
        return run_single_user(config, scheme, scsi, seed, rec, traces);

    const InnerContext ctx = inner_context(config, scsi, layout, radio);
    ExtendedDeParams params;
    params.de = config.algorithm.de;
    params.inner = inner_for(config, scheme);
    params.ssca = ssca_options(config);
    params.p32 = p32_options(config);
    params.warm_start = config.algorithm.warm_start;
    params.seed_baseline = config.algorithm.seed_baseline;

    const ArraySurfaceConfig baseline =
        ArraySurfaceConfig::centered_ula(config.system.antennas, radio.min_spacing(), regions);
    const SchemeRestriction free = restriction(scheme);
    ExtendedDeResult res;
    if (!free.q && !free.psi && !free.phi) {
        // Nothing to search: one inner solve at the baseline.
        const std::uint64_t inner_seed = derive_seed(seed, "outer-fitness");
        res.config = baseline;
        if (params.inner == InnerKind::scg)
            res.inner = scg_inner(baseline, ctx, params.p32, inner_seed);
        else
            res.inner = ssca_inner(baseline, ctx, params.ssca, inner_seed);
        res.fitness = res.inner.rate.mean;
    } else {
        res = extended_de(ctx, regions, config_bounds(baseline, free.q, free.psi, free.phi), params, seed);
    }

    const ChannelSampler sampler(scsi, res.config, layout, radio);
    Rng test = Rng::stream(seed, "rate-test");
    const RateEstimate rate = average_sum_rate(sampler, res.inner.v, ctx.power, ctx.noise, config.run.test_samples,
                                               test, ctx.wmmse, ctx.threads);
    rec.rate_mean = rate.mean;
    rec.rate_se = rate.std_error;
    rec.objective = res.fitness;
    rec.converged = res.inner.converged;
    fill_config(rec, res.config);
    if (traces) {
        traces->de_best = res.best_trace;
        traces->surrogate = res.inner.surrogate;
    }
    return rec;
}

} // namespace irsma
