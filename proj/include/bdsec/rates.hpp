#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bdsec/channel.hpp"

namespace bdsec {

constexpr double kLog2e = 1.4426950408889634074;  // nats -> bits

// Per-user diagonal beam-power vectors under a total budget P.
struct PowerAllocation {
    std::vector<std::vector<double>> lambdas;  // K vectors of length M
    double budget = 0.0;                       // P

    int users() const { return static_cast<int>(lambdas.size()); }
    int beams() const { return lambdas.empty() ? 0 : static_cast<int>(lambdas[0].size()); }
    double total() const;
    void validate() const;

    static PowerAllocation zero(int K, int M, double P);
};

// Diagonal noise-plus-interference covariance (entries >= 1).
struct DiagonalCovariance {
    std::vector<double> diag;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct RateReport {
    std::vector<double> per_user_rate;          // R_k, bits
    std::vector<double> per_user_eve_bound;     // C^eve_{k,ub}, bits
    std::vector<double> per_user_eve_mc;        // C^eve_k MC, bits
    std::vector<double> per_user_rate_se;
    std::vector<double> per_user_eve_mc_se;
    double secrecy_sum_rate_lb = 0.0;           // sum_k [R_k - C_ub]^+
    double secrecy_sum_rate_mc = 0.0;           // sum_k [R_k - C_mc]^+
    double secrecy_lb_se = 0.0;
    double secrecy_mc_se = 0.0;
};

// diag[n] = 1 + sum_{i != k} sum_m omega_k[n][m] * lambda_i[m]
DiagonalCovariance interference_cov(const PowerAllocation& alloc, int k,
                                    const CouplingMatrix& omega_k);

// diag[j] = 1 + sum_m omega_eve[j][m] * lambda_k[m]
DiagonalCovariance eve_cov(const std::vector<double>& alloc_k, const CouplingMatrix& omega_eve);

// Jensen upper bound on the eavesdropper's rate, log2 det of eve_cov. Bits.
double eve_rate_upper_bound(const std::vector<double>& alloc_k, const CouplingMatrix& omega_eve);

// Monte-Carlo estimate of E[log2 det(I + Kbar^-1 G Lambda_k G^H)] for user k.
McEstimate user_rate_mc(const PowerAllocation& alloc, int k, const CouplingMatrix& omega_k,
                        int samples, std::uint64_t seed);

// Monte-Carlo estimate of E[log2 det(I + G_eve Lambda_k G_eve^H)].
McEstimate eve_rate_mc(const std::vector<double>& alloc_k, const CouplingMatrix& omega_eve,
                       int samples, std::uint64_t seed);

// Full MC rate report: per-user rates, eavesdropper MC rate and Jensen bound,
// clamped secrecy sums. Same seed => bit-identical report.
RateReport secrecy_rates(const PowerAllocation& alloc, const std::vector<CouplingMatrix>& omegas,
                         const CouplingMatrix& omega_eve, int samples, std::uint64_t seed);

}  // namespace bdsec
