#include "irsma/beamforming.hpp"

#include <cmath>
#include <string>

namespace irsma {

CVec mrt(const CVec& h, double power)
{
    const double norm = h.norm();
    if (!(norm > 0.0))
        throw std::invalid_argument("mrt: zero channel");
    return (std::sqrt(power) / norm) * h;
}

RateReport sinr_and_rate(const CMat& H, const CMat& W, double noise_power)
{
    if (H.rows() != W.rows() || H.cols() != W.cols())
        throw std::invalid_argument("sinr_and_rate: H and W must both be M x K");
    if (!(noise_power > 0.0))
        throw std::invalid_argument("sinr_and_rate: noise power must be positive");
    const CMat A = H.adjoint() * W; // A(k, j) = h_k^H w_j
    const auto K = A.rows();
    RateReport out;
    out.sinr.resize(static_cast<std::size_t>(K));
    out.rate.resize(static_cast<std::size_t>(K));
    for (Eigen::Index k = 0; k < K; ++k) {
        const double signal = std::norm(A(k, k));
        const double interference = A.row(k).squaredNorm() - signal;
        const double g = signal / (std::max(interference, 0.0) + noise_power);
        out.sinr[static_cast<std::size_t>(k)] = g;
        out.rate[static_cast<std::size_t>(k)] = std::log2(1.0 + g);
        out.sum_rate += out.rate[static_cast<std::size_t>(k)];
    }
    return out;
}

double sum_rate(const CMat& H, const CMat& W, double noise_power)
{
    return sinr_and_rate(H, W, noise_power).sum_rate;
}

double mrt_rate(const CVec& h, double power, double noise_power)
{
    return std::log2(1.0 + power * h.squaredNorm() / noise_power);
}

namespace {

// Solves w_k = kappa_k chi_k (mu I + sum_i kappa_i |chi_i|^2 h_i h_i^H)^{-1} h_k with
// mu chosen so that the power budget holds (mu = 0 when it is slack).
CMat precoder_update(const CMat& H, const WmmseState& st, double power, const WmmseOptions& opt, double& mu_out)
{
    const auto M = H.rows();
    const auto K = H.cols();
    RVec d(K);
    CVec a(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        d[k] = st.kappa[i] * std::norm(st.chi[i]);
        a[k] = st.kappa[i] * st.chi[i];
    }
    const CMat B = H * d.asDiagonal() * H.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> eig(B);
    const RVec& lambda = eig.eigenvalues();
    const CMat T = eig.eigenvectors().adjoint() * H * a.asDiagonal();
    const RVec row_power = T.rowwise().squaredNorm();

    const double lambda_max = std::max(lambda.maxCoeff(), 0.0);
    const double null_tol = 1e-12 * std::max(lambda_max, std::numeric_limits<double>::min());

    auto power_at = [&](double mu) {
        double p = 0.0;
        for (Eigen::Index m = 0; m < M; ++m) {
            const double den = lambda[m] + mu;
            if (mu == 0.0 && lambda[m] <= null_tol)
                continue; // pseudo-inverse on the null space of B
            p += row_power[m] / (den * den);
        }
        return p;
    };

    double mu = 0.0;
    if (power_at(0.0) > power) {
        double hi = std::max(lambda_max, 1e-300) * 1e-6;
        int grow = 0;
        while (power_at(hi) > power) {
            hi *= 2.0;
            if (++grow > 4000)
                throw BisectionError("wmmse: could not bracket the power dual variable");
        }
        double lo = 0.0;
        bool done = false;
        for (int it = 0; it < 500; ++it) {
            mu = 0.5 * (lo + hi);
            const double p = power_at(mu);
            if (std::abs(p - power) <= opt.power_tol * power) {
                done = true;
                break;
            }
            if (p > power)
                lo = mu;
            else
                hi = mu;
        }
        if (!done)
            throw BisectionError("wmmse: bisection on the power dual variable did not converge");
    }
    mu_out = mu;

    RVec inv(M);
    for (Eigen::Index m = 0; m < M; ++m) {
        if (mu == 0.0 && lambda[m] <= null_tol)
            inv[m] = 0.0;
        else
            inv[m] = 1.0 / (lambda[m] + mu);
    }
    return eig.eigenvectors() * inv.asDiagonal() * T;
}

} // namespace

WmmseResult wmmse(const CMat& H, double power, double noise_power, const WmmseOptions& options)
{
    const auto M = H.rows();
    const auto K = H.cols();
    if (K < 1 || M < 1)
        throw std::invalid_argument("wmmse: need at least one antenna and one user");
    if (!(power > 0.0) || !(noise_power > 0.0))
        throw std::invalid_argument("wmmse: power and noise must be positive");

    WmmseResult res;
    res.precoder.power_budget = power;
    CMat& W = res.precoder.W;
    W = CMat::Zero(M, K);
    const double per_user = std::sqrt(power / static_cast<double>(K));
    for (Eigen::Index k = 0; k < K; ++k) {
        const double n = H.col(k).norm();
        if (n > 0.0)
            W.col(k) = (per_user / n) * H.col(k);
    }
    double rate = sum_rate(H, W, noise_power);
    res.rate_trace.push_back(rate);

    WmmseState& st = res.state;
    st.chi.assign(static_cast<std::size_t>(K), cplx(0.0, 0.0));
    st.kappa.assign(static_cast<std::size_t>(K), 1.0);

    for (int it = 1; it <= options.max_iter; ++it) {
        const CMat A = H.adjoint() * W;
        for (Eigen::Index k = 0; k < K; ++k) {
            const auto i = static_cast<std::size_t>(k);
            const double total = A.row(k).squaredNorm() + noise_power;
            st.chi[i] = A(k, k) / total;
            const double mse = 1.0 - std::norm(A(k, k)) / total;
            st.kappa[i] = 1.0 / std::max(mse, std::numeric_limits<double>::min());
        }
        W = precoder_update(H, st, power, options, st.mu);
        // The bisection stops within power_tol on either side of the budget.
        if (const double p = W.squaredNorm(); p > power)
            W *= std::sqrt(power / p);
        const double next = sum_rate(H, W, noise_power);
        res.rate_trace.push_back(next);
        res.iterations = it;
        const double change = next - rate;
        rate = next;
        if (std::abs(change) < options.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace irsma
