#pragma once

// Reference computations written directly from the model definitions, kept
// apart from the library so the tests do not grade the library against itself.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// h + G^H (conj(v) .* r)
inline CVec effective_channel(const CVec& h, const CVec& r, const CMat& G, const CVec& v)
{
    CVec t(r.size());
    for (Eigen::Index n = 0; n < r.size(); ++n)
        t[n] = std::conj(v[n]) * r[n];
    return h + G.adjoint() * t;
}

// SINR_k = |h_k^H w_k|^2 / (sum_{j != k} |h_k^H w_j|^2 + noise)
inline std::vector<double> sinr(const CMat& H, const CMat& W, double noise)
{
    std::vector<double> out(static_cast<std::size_t>(H.cols()));
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
        double signal = 0.0;
        double interference = noise;
        for (Eigen::Index j = 0; j < W.cols(); ++j) {
            cplx s = 0.0;
            for (Eigen::Index m = 0; m < H.rows(); ++m)
                s += std::conj(H(m, k)) * W(m, j);
            (j == k ? signal : interference) += std::norm(s);
        }
        out[static_cast<std::size_t>(k)] = signal / interference;
    }
    return out;
}

inline double sum_rate_bits(const CMat& H, const CMat& W, double noise)
{
    double r = 0.0;
    for (double s : sinr(H, W, noise))
        r += std::log2(1.0 + s);
    return r;
}

inline double sum_rate_nats(const CMat& H, const CMat& W, double noise)
{
    double r = 0.0;
    for (double s : sinr(H, W, noise))
        r += std::log1p(s);
    return r;
}

// log2(1 + P ||h||^2 / noise)
inline double mrt_rate(const CVec& h, double power, double noise)
{
    return std::log2(1.0 + power * h.squaredNorm() / noise);
}

// x^H H x with x = [conj(v); 1]
inline double lifted(const CMat& H, const CVec& v)
{
    const Eigen::Index n = v.size();
    CVec x(n + 1);
    for (Eigen::Index i = 0; i < n; ++i)
        x[i] = std::conj(v[i]);
    x[n] = 1.0;
    return (x.adjoint() * H * x)(0, 0).real();
}

// Exhaustive search over `steps` phases per coordinate. Returns the best value.
inline double phase_grid_max(const CMat& H, Eigen::Index n, int steps)
{
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    CVec v(n);
    double best = -1e300;
    while (true) {
        for (Eigen::Index i = 0; i < n; ++i)
            v[i] = std::polar(1.0, 2.0 * kPi * idx[static_cast<std::size_t>(i)] / steps);
        best = std::max(best, lifted(H, v));
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == steps)
            idx[i++] = 0;
        if (i == idx.size())
            break;
    }
    return best;
}

// |sum_m exp(-j k q_m (cos(a_irs + psi) + cos(a_user - psi)))|
inline double bs_coupling(const RVec& q, double psi, double a_irs, double a_user, double wavelength)
{
    const double k = 2.0 * kPi / wavelength;
    const double g = std::cos(a_irs + psi) + std::cos(a_user - psi);
    cplx s = 0.0;
    for (Eigen::Index m = 0; m < q.size(); ++m)
        s += std::polar(1.0, -k * q[m] * g);
    return std::abs(s);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs)
{
    MeanSe out;
    const double n = static_cast<double>(xs.size());
    for (double x : xs)
        out.mean += x;
    out.mean /= n;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - out.mean) * (x - out.mean);
    out.se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return out;
}

} // namespace oracle

namespace oracle {

// Global maximum of |sum_m exp(-j 2 pi g q_m / lambda)| over sorted positions
// in [lo, hi] with gaps >= d, on a grid of `cells` positions. For each
// alignment angle a the problem max sum cos(theta_m - a) is a chain DP.
inline double max_coupling(double g, std::size_t M, double lo, double hi, double d, double wavelength,
                           std::size_t cells = 4000, int angles = 720)
{
    const double step = (hi - lo) / static_cast<double>(cells - 1);
    const auto gap = static_cast<std::size_t>(std::ceil(d / step - 1e-9));
    std::vector<double> theta(cells);
    for (std::size_t i = 0; i < cells; ++i)
        theta[i] = -2.0 * kPi * g * (lo + static_cast<double>(i) * step) / wavelength;
    double best = 0.0;
    std::vector<double> prev(cells), cur(cells);
    for (int a = 0; a < angles; ++a) {
        const double alpha = 2.0 * kPi * a / angles;
        // prev[i]: best sum with the last antenna at or before cell i.
        for (std::size_t i = 0; i < cells; ++i)
            prev[i] = std::max(i ? prev[i - 1] : -1e300, std::cos(theta[i] - alpha));
        for (std::size_t m = 1; m < M; ++m) {
            for (std::size_t i = 0; i < cells; ++i) {
                const double here = i >= gap ? prev[i - gap] + std::cos(theta[i] - alpha) : -1e300;
                cur[i] = std::max(i ? cur[i - 1] : -1e300, here);
            }
            std::swap(prev, cur);
        }
        best = std::max(best, prev[cells - 1]);
    }
    return best;
}

} // namespace oracle
