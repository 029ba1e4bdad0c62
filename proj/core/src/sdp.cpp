#include "irsma/sdp.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace irsma {

namespace {

void require_square_hermitian(const CMat& H, const char* who)
{
    if (H.rows() != H.cols() || H.rows() < 1)
        throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
    const double scale = std::max(1.0, H.norm());
    if ((H - H.adjoint()).norm() > 1e-9 * scale)
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
}

CMat project_psd(const CMat& A)
{
    Eigen::SelfAdjointEigenSolver<CMat> eig(A);
    const RVec lam = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
}

void project_box(CMat& Z)
{
    const auto n = Z.rows();
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        Z(i, i) = cplx(std::min(Z(i, i).real(), 1.0), 0.0);
    Z(n - 1, n - 1) = cplx(1.0, 0.0);
}

double box_violation(const CMat& V)
{
    const auto n = V.rows();
    double worst = std::abs(V(n - 1, n - 1) - cplx(1.0, 0.0));
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        worst = std::max(worst, V(i, i).real() - 1.0);
    return std::max(worst, 0.0);
}

} // namespace

SdpSolution solve_diag_trace_sdp(const CMat& H, const SdpOptions& options)
{
    require_square_hermitian(H, "solve_diag_trace_sdp");
    const auto n = H.rows();

    // V(N,N) is pinned to 1, so H(N,N) only shifts the objective. Removing it
    // and normalizing keeps the remaining entries well scaled; the direct-link
    // power usually dwarfs the reflected terms.
    CMat Hs = 0.5 * (H + H.adjoint());
    Hs(n - 1, n - 1) = 0.0;
    const double scale = Hs.norm();

    SdpSolution sol;
    if (scale == 0.0) {
        sol.V = CMat::Identity(n, n);
        sol.objective = H.trace().real();
        sol.converged = true;
        return sol;
    }
    Hs /= scale;

    const double root_n = static_cast<double>(n);
    double rho = options.rho;
    CMat Z = CMat::Identity(n, n);
    CMat U = CMat::Zero(n, n);
    CMat V = Z;

    double best_score = std::numeric_limits<double>::infinity();
    CMat best_V = V;
    double best_prim = 0.0;
    double best_dual = 0.0;

    for (int it = 1; it <= options.max_iter; ++it) {
        V = project_psd(Z - U + Hs / rho);
        V = 0.5 * (V + V.adjoint());
        const CMat Z_prev = Z;
        Z = V + U;
        project_box(Z);
        U += V - Z;

        const double prim = (V - Z).norm();
        const double dual = rho * (Z - Z_prev).norm();
        const double eps_prim = options.tol * (root_n + std::max(V.norm(), Z.norm()));
        const double eps_dual = options.tol * (root_n + rho * U.norm());
        sol.iterations = it;

        const double score = std::max(prim / eps_prim, dual / eps_dual);
        if (score < best_score) {
            best_score = score;
            best_V = V;
            best_prim = prim;
            best_dual = dual;
        }
        if (prim <= eps_prim && dual <= eps_dual) {
            sol.converged = true;
            break;
        }
        if (options.adaptive_rho && it % 10 == 0) {
            if (prim > 10.0 * dual) {
                rho *= 2.0;
                U /= 2.0;
            } else if (dual > 10.0 * prim) {
                rho /= 2.0;
                U *= 2.0;
            }
        }
    }

    // On convergence the last iterate is also the best-scoring one.
    sol.V = best_V;
    sol.primal_residual = best_prim;
    sol.dual_residual = best_dual;
    sol.box_residual = box_violation(sol.V);
    sol.objective = (H * sol.V).trace().real();
    return sol;
}

double lifted_objective(const CMat& H, const CVec& v)
{
    if (H.rows() != v.size() + 1)
        throw std::invalid_argument("lifted_objective: size mismatch");
    CVec x(v.size() + 1);
    x.head(v.size()) = v.conjugate();
    x[v.size()] = 1.0;
    return x.dot(H * x).real();
}

namespace {

// Rotates x so that its last entry is real positive, then keeps only phases.
CVec to_reflection(const CVec& x)
{
    const auto N = x.size() - 1;
    cplx rot(1.0, 0.0);
    if (std::abs(x[N]) > 0.0)
        rot = std::conj(x[N]) / std::abs(x[N]);
    CVec v(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const cplx z = x[i] * rot;
        // v = conj(x), so the stored phase is the negated one.
        v[i] = std::abs(z) > 0.0 ? std::conj(z) / std::abs(z) : cplx(1.0, 0.0);
    }
    return v;
}

} // namespace

CVec extract_rank_one(const CMat& V, const CMat& H, std::size_t randomizations, Rng& rng)
{
    if (V.rows() != V.cols() || V.rows() != H.rows() || V.rows() < 2)
        throw std::invalid_argument("extract_rank_one: V and H must share a size of at least 2");
    Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (V + V.adjoint()));
    const auto n = V.rows();

    CVec best = to_reflection(eig.eigenvectors().col(n - 1));
    double best_value = lifted_objective(H, best);
    if (randomizations == 0)
        return best;

    const CMat L = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    CVec z(n);
    for (std::size_t r = 0; r < randomizations; ++r) {
        for (Eigen::Index i = 0; i < n; ++i)
            z[i] = rng.complex_normal(1.0);
        const CVec cand = to_reflection(L * z);
        const double value = lifted_objective(H, cand);
        if (value > best_value) {
            best_value = value;
            best = cand;
        }
    }
    return best;
}

CVec refine_phases(const CMat& H, const CVec& v, int max_sweeps, double rel_tol)
{
    const auto N = v.size();
    if (H.rows() != N + 1 || H.cols() != N + 1)
        throw std::invalid_argument("refine_phases: size mismatch");
    CVec x(N + 1);
    x.head(N) = v.conjugate();
    x[N] = 1.0;
    double value = x.dot(H * x).real();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (Eigen::Index i = 0; i < N; ++i) {
            const cplx s = (H.row(i) * x)(0) - H(i, i) * x[i];
            if (std::abs(s) > 0.0)
                x[i] = s / std::abs(s);
        }
        const double next = x.dot(H * x).real();
        const double gain = next - value;
        value = next;
        if (gain <= rel_tol * std::max(1.0, std::abs(value)))
            break;
    }
    return x.head(N).conjugate();
}

void write_matrix(std::ostream& os, const CMat& A)
{
    os << A.rows() << ' ' << A.cols() << '\n' << std::setprecision(17);
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            if (j > 0)
                os << ' ';
            os << A(i, j).real() << ' ' << A(i, j).imag();
        }
        os << '\n';
    }
}

CMat read_matrix(std::istream& is)
{
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    if (!(is >> rows >> cols) || rows < 0 || cols < 0)
        throw std::runtime_error("read_matrix: bad header");
    CMat A(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re = 0.0;
            double im = 0.0;
            if (!(is >> re >> im))
                throw std::runtime_error("read_matrix: truncated data");
            A(i, j) = cplx(re, im);
        }
    }
    return A;
}

} // namespace irsma
