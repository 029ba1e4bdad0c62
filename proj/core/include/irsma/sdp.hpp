#pragma once

#include <cstddef>
#include <iosfwd>

#include "irsma/rng.hpp"
#include "irsma/types.hpp"

namespace irsma {

struct SdpOptions {
    double tol = 1e-6;
    int max_iter = 5000;
    double rho = 0.1;          // initial penalty, applied to the normalized objective
    bool adaptive_rho = true;
};

struct SdpSolution {
    CMat V;                  // Hermitian PSD
    double objective = 0.0;  // Re Tr(H V)
    int iterations = 0;
    double primal_residual = 0.0; // ||V - Z||_F against the box-feasible copy
    double dual_residual = 0.0;
    double box_residual = 0.0;    // largest violation of diag(V) <= 1, V(N,N) = 1
    bool converged = false;
};

/// max Re Tr(H V)  s.t.  V >= 0,  V(n,n) <= 1 for n < N,  V(N,N) = 1,
/// where H is (N+1) x (N+1) Hermitian. ADMM splitting between the PSD cone and
/// the diagonal box. On hitting the iteration cap the iterate with the smallest
/// residual is returned with converged = false.
SdpSolution solve_diag_trace_sdp(const CMat& H, const SdpOptions& options = {});

/// x^H H x with x = [v^*; 1].
double lifted_objective(const CMat& H, const CVec& v);

/// Unit-modulus v from a relaxed solution: the leading eigenvector plus
/// `randomizations` Gaussian draws with covariance V, each rotated so the last
/// coordinate is real and then truncated to unit modulus. Returns the
/// candidate with the largest lifted objective.
CVec extract_rank_one(const CMat& V, const CMat& H, std::size_t randomizations, Rng& rng);

/// Cyclic coordinate ascent on the phases of v for the lifted objective. Never
/// decreases it.
CVec refine_phases(const CMat& H, const CVec& v, int max_sweeps = 50, double rel_tol = 1e-10);

/// Text format: a "rows cols" line followed by one line per row holding
/// "re im" pairs separated by spaces.
void write_matrix(std::ostream& os, const CMat& A);
CMat read_matrix(std::istream& is);

} // namespace irsma
