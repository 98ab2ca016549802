#pragma once

#include <functional>
#include <vector>

#include "bdsec/rates.hpp"

namespace bdsec {

// Converged fixed point of the large-dimension approximation for one user.
// Every matrix in the system is diagonal here, so all quantities are stored
// as plain vectors.
struct DeterministicEquivalentState {
    std::vector<double> gamma;         // length M
    std::vector<double> gamma_tilde;   // length N_r
    std::vector<double> phi_de;        // length M, >= 1
    std::vector<double> phi_tilde_de;  // length N_r, >= 1
    double residual = 0.0;
    int iterations = 0;
};

// [eta]_m = sum_n omega[n][m] * x_tilde[n]
std::vector<double> eta(const CouplingMatrix& omega, const std::vector<double>& x_tilde);

// [eta_tilde]_n = sum_m omega[n][m] * x[m]
std::vector<double> eta_tilde(const CouplingMatrix& omega, const std::vector<double>& x);

// Optional per-iteration trace hook: (iteration, residual).
using DeTraceHook = std::function<void(int, double)>;

// Solves the coupled fixed point
//   phi_tilde = 1 + eta_tilde(phi^-1 * lambda) / kbar
//   phi       = 1 + eta(phi_tilde^-1 * kbar^-1) * lambda
// to max elementwise update <= xi1, then fills gamma / gamma_tilde.
// Throws on non-convergence.
DeterministicEquivalentState de_fixed_point(const CouplingMatrix& omega_k,
                                            const std::vector<double>& lambda_k,
                                            const DiagonalCovariance& kbar_k, double xi1,
                                            int max_iter, const DeTraceHook& hook = nullptr);

// Closed-form rate term log2 det(I+Gamma*Lambda) + log2 det(GammaTilde+Kbar)
// - tr(I - PhiTilde^-1) * log2(e). Bits.
double de_user_rate(const DeterministicEquivalentState& state, const std::vector<double>& lambda_k,
                    const DiagonalCovariance& kbar_k);

struct DeSecrecyResult {
    double value_bits = 0.0;                  // clamped per-user sum
    std::vector<double> per_user_r1;          // DE rate term, bits
    std::vector<double> per_user_r2;          // log2 det Kbar + log2 det Kbar_eve
    std::vector<DeterministicEquivalentState> states;
};

// DE of the secrecy sum-rate lower bound: sum_k [R1_k - R2_k]^+.
DeSecrecyResult de_secrecy_lower_bound(const PowerAllocation& alloc,
                                       const std::vector<CouplingMatrix>& omegas,
                                       const CouplingMatrix& omega_eve, double xi1, int max_iter);

}  // namespace bdsec
