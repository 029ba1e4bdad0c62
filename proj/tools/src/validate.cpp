#include "irsma_cli/cli.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "irsma/beamforming.hpp"
#include "irsma/config.hpp"
#include "irsma/multi_user.hpp"
#include "irsma/sdp.hpp"
#include "irsma/single_user.hpp"
#include "irsma/statistics.hpp"

namespace irsma::cli {

namespace {

struct Small {
    RadioContext radio = RadioContext::from_carrier(6e9);
    IrsLayout layout = IrsLayout::grid(4, 2, 0.025);
    ConfigRegions regions = ConfigRegions::standard(4, 0.025);
    ArraySurfaceConfig config = ArraySurfaceConfig::centered_ula(4, 0.025, regions);
    StatisticalCsi scsi;

    explicit Small(std::size_t users)
    {
        Rng rng(7, 1);
        const NodeGeometry geo = NodeGeometry::standard().with_random_users(users, rng);
        scsi = sample_scsi(geo, PathCounts::uniform(2), radio, 11);
    }
};

CVec random_phases(Eigen::Index n, Rng& rng)
{
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = unit_phasor(rng.uniform(0.0, kTwoPi));
    return v;
}

bool check_gain_vs_monte_carlo(std::string& detail)
{
    Small s(1);
    Rng rng(3, 2);
    const CVec v = random_phases(8, rng);
    const auto terms = expected_gain_terms(s.scsi, s.config, s.layout, s.radio, 0);
    const double closed = expected_equivalent_gain(terms, v);
    const auto mc = mc_gain_oracle(s.scsi, s.config, s.layout, s.radio, 0, v, 20000, rng);
    const double z = std::abs(closed - mc.mean) / mc.std_error;
    detail = fmt::format("closed {:.4e} mc {:.4e} z {:.2f}", closed, mc.mean, z);
    return z < 4.0;
}

bool check_wmmse_single_user(std::string& detail)
{
    Rng rng(5, 0);
    CMat H(4, 1);
    for (Eigen::Index i = 0; i < 4; ++i)
        H(i, 0) = rng.complex_normal(1.0);
    const auto res = wmmse(H, 1.0, 0.1);
    const double ref = mrt_rate(H.col(0), 1.0, 0.1);
    const double got = res.rate_trace.back();
    detail = fmt::format("wmmse {:.6f} mrt {:.6f}", got, ref);
    return std::abs(got - ref) < 1e-6 * ref;
}

bool check_wmmse_monotone(std::string& detail)
{
    Rng rng(9, 0);
    CMat H(4, 3);
    for (Eigen::Index i = 0; i < H.size(); ++i)
        H.data()[i] = rng.complex_normal(1.0);
    const auto res = wmmse(H, 1.0, 0.05);
    double worst = 0.0;
    for (std::size_t i = 1; i < res.rate_trace.size(); ++i)
        worst = std::min(worst, res.rate_trace[i] - res.rate_trace[i - 1]);
    detail = fmt::format("{} iterations, largest drop {:.2e}", res.iterations, std::max(0.0, -worst));
    return worst > -1e-9;
}

bool check_jacobian(std::string& detail)
{
    Small s(2);
    Rng rng(13, 0);
    const auto ch = sample_icsi(s.scsi, s.config, s.layout, s.radio, rng);
    const CVec v = random_phases(8, rng);
    const CMat H = effective_channels(ch, v);
    const CMat W = wmmse(H, 1.0, 1e-9).precoder.W;
    const double noise = 1e-9;
    const CVec J = rate_jacobian(ch, W, v, noise);
    const double h = 1e-6;
    double err = 0.0;
    double scale = 0.0;
    for (Eigen::Index n = 0; n < v.size(); ++n) {
        CVec vp = v, vm = v;
        vp[n] += h;
        vm[n] -= h;
        const double dre = (sum_rate_nat(ch, W, vp, noise) - sum_rate_nat(ch, W, vm, noise)) / (2 * h);
        vp = v, vm = v;
        vp[n] += cplx(0, h);
        vm[n] -= cplx(0, h);
        const double dim = (sum_rate_nat(ch, W, vp, noise) - sum_rate_nat(ch, W, vm, noise)) / (2 * h);
        // dR/dv* = (dR/dRe + j dR/dIm) / 2
        const cplx fd(0.5 * dre, 0.5 * dim);
        err = std::max(err, std::abs(fd - J[n]));
        scale = std::max(scale, std::abs(J[n]));
    }
    detail = fmt::format("max error {:.2e} relative {:.2e}", err, err / scale);
    return err <= 1e-4 * scale;
}

bool check_sdp_grid(std::string& detail)
{
    Rng rng(21, 0);
    CMat A(3, 3);
    for (Eigen::Index i = 0; i < A.size(); ++i)
        A.data()[i] = rng.complex_normal(1.0);
    const CMat H = A * A.adjoint();
    const auto sol = solve_diag_trace_sdp(H);
    double best = -1e300;
    for (int a = 0; a < 64; ++a)
        for (int b = 0; b < 64; ++b) {
            CVec v(2);
            v << unit_phasor(kTwoPi * a / 64), unit_phasor(kTwoPi * b / 64);
            best = std::max(best, lifted_objective(H, v));
        }
    CVec v = extract_rank_one(sol.V, H, 50, rng);
    v = refine_phases(H, v);
    const double got = lifted_objective(H, v);
    detail = fmt::format("sdp {:.6f} extracted {:.6f} grid {:.6f}", sol.objective, got, best);
    return sol.objective >= best - 1e-4 * best && got >= best - 1e-3 * best;
}

bool check_sparse_array(std::string& detail)
{
    const RadioContext radio = RadioContext::from_carrier(6e9);
    const double delta = delta_factor(1.2, 0.7, 0.1);
    const RVec q = sparse_array_positions(delta, 6, 0.0, radio.wavelength());
    const double c = bs_coupling(q, 0.1, 1.2, 0.7, radio);
    detail = fmt::format("coupling {:.9f} of 6", c);
    return std::abs(c - 6.0) < 1e-9;
}

bool check_dbm(std::string& detail)
{
    const double w = dbm_to_watts(30.0);
    const double back = watts_to_dbm(1e-7);
    detail = fmt::format("30 dBm = {} W, 1e-7 W = {} dBm", w, back);
    return std::abs(w - 1.0) < 1e-12 && std::abs(back + 40.0) < 1e-9;
}

} // namespace

bool run_validation(std::ostream& out)
{
    struct Check {
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const Check checks[] = {
        {"expected gain vs monte carlo", check_gain_vs_monte_carlo},
        {"wmmse single user equals mrt", check_wmmse_single_user},
        {"wmmse sum rate non-decreasing", check_wmmse_monotone},
        {"rate jacobian vs finite differences", check_jacobian},
        {"sdp relaxation vs phase grid", check_sdp_grid},
        {"sparse array full coupling", check_sparse_array},
        {"dBm conversions", check_dbm},
    };
    bool all = true;
    for (const auto& c : checks) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("threw: ") + e.what();
        }
        all = all && ok;
        out << fmt::format("{} {:<38} {}\n", ok ? "PASS" : "FAIL", c.name, detail);
    }
    return all;
}

} // namespace irsma::cli
