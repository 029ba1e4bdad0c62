#pragma once

#include <cstddef>

#include "irsma/channel_model.hpp"

namespace irsma {

/// S-CSI quantities that make the expected equivalent channel power gain of
/// one user a closed-form quadratic in the reflection vector v:
///
///   E||h_k + g_k||^2 = c1 + v^T G_hat v^* + 2 Re{ omega a_bs v^T a_irs }.
struct ExpectedGainTerms {
    double c1 = 0.0;   // expected direct-link power
    RVec xi;           // diagonal of M diag(|beta_0|^2, sigma_1^2, ..., sigma_L^2)
    CMat g_hat;        // N x N Hermitian PSD reflected-link matrix
    cplx omega;        // beta_0 conj(bar beta_k0) tilde beta_k0
    CVec a_hat_irs;    // conj(bar a_k0(phi)) .* a_r0(phi)
    cplx a_hat_bs;     // a_t0^H(q,psi) tilde a_k0(q,psi)

    std::size_t elements() const { return static_cast<std::size_t>(g_hat.rows()); }
};

double direct_power_c1(const LinkStatistics& bs_user, std::size_t antennas);

CMat reflected_gain_matrix(const LinkStatistics& bs_irs, const LinkStatistics& irs_user, const IrsLayout& layout,
                           double phi, std::size_t antennas, const RadioContext& radio);

ExpectedGainTerms expected_gain_terms(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                                      const IrsLayout& layout, const RadioContext& radio, std::size_t user);

/// Exact expectation E||h + g||^2 at reflection vector v.
double expected_equivalent_gain(const ExpectedGainTerms& terms, const CVec& v);

/// Form with omega and a_bs replaced by their moduli. It equals
/// expected_equivalent_gain(compensate_phase(terms, v)).
double decoupled_equivalent_gain(const ExpectedGainTerms& terms, const CVec& v);

/// Rotates v by the conjugate phase of omega * a_bs.
CVec compensate_phase(const ExpectedGainTerms& terms, const CVec& v);

/// (N+1) x (N+1) matrix [G_hat, b; b^H, c1] with b = omega a_bs a_irs, so that
/// Tr(H V) with V = [v^*; 1][v^T, 1] is the expected gain at v.
CMat heff_matrix(const ExpectedGainTerms& terms);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Sample mean of ||h_k + g_k||^2 over independent I-CSI draws.
MonteCarloEstimate mc_gain_oracle(const StatisticalCsi& scsi, const ArraySurfaceConfig& config,
                                  const IrsLayout& layout, const RadioContext& radio, std::size_t user,
                                  const CVec& v, std::size_t samples, Rng& rng);

} // namespace irsma
