#pragma once

#include <stdexcept>
#include <vector>

#include "irsma/types.hpp"

namespace irsma {

struct Precoder {
    CMat W;                    // M x K, column k serves user k
    double power_budget = 0.0; // watts

    double power() const { return W.squaredNorm(); }
};

struct WmmseState {
    std::vector<cplx> chi;     // receive scalars
    std::vector<double> kappa; // MSE weights, >= 1
    double mu = 0.0;           // dual variable of the power budget
};

struct WmmseOptions {
    double tol = 1e-4;        // stop when the sum-rate change drops below this (bps/Hz)
    int max_iter = 100;
    double power_tol = 1e-12; // relative residual of the active power constraint
};

struct WmmseResult {
    Precoder precoder;
    WmmseState state;
    std::vector<double> rate_trace; // sum-rate after initialization and after every iteration
    int iterations = 0;
    bool converged = false;
};

/// Raised when the bisection on the power dual variable cannot bracket or
/// reach the budget.
class BisectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RateReport {
    std::vector<double> sinr;
    std::vector<double> rate; // log2(1 + sinr)
    double sum_rate = 0.0;
};

/// Maximum-ratio transmission sqrt(P) h / ||h||.
CVec mrt(const CVec& h, double power);

/// SINR and rates for effective channels H (M x K, column per user) and precoder W.
RateReport sinr_and_rate(const CMat& H, const CMat& W, double noise_power);

double sum_rate(const CMat& H, const CMat& W, double noise_power);

/// Single-user rate log2(1 + P ||h||^2 / noise) achieved by MRT.
double mrt_rate(const CVec& h, double power, double noise_power);

/// Sum-rate maximization by the weighted MMSE iteration with unit weights,
/// starting from MRT directions with equal power.
WmmseResult wmmse(const CMat& H, double power, double noise_power, const WmmseOptions& options = {});

} // namespace irsma
