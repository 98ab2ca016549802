#include "bdsec/de.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bdsec {

std::vector<double> eta(const CouplingMatrix& omega, const std::vector<double>& x_tilde) {
    if (static_cast<int>(x_tilde.size()) != omega.rows)
        throw std::invalid_argument("eta: receive-side dimension mismatch");
    std::vector<double> out(omega.cols, 0.0);
    for (int n = 0; n < omega.rows; ++n)
        for (int m = 0; m < omega.cols; ++m) out[m] += omega.at(n, m) * x_tilde[n];
    return out;
}

std::vector<double> eta_tilde(const CouplingMatrix& omega, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != omega.cols)
        throw std::invalid_argument("eta_tilde: transmit-side dimension mismatch");
    std::vector<double> out(omega.rows, 0.0);
    for (int n = 0; n < omega.rows; ++n)
        for (int m = 0; m < omega.cols; ++m) out[n] += omega.at(n, m) * x[m];
    return out;
}

DeterministicEquivalentState de_fixed_point(const CouplingMatrix& omega_k,
                                            const std::vector<double>& lambda_k,
                                            const DiagonalCovariance& kbar_k, double xi1,
                                            int max_iter, const DeTraceHook& hook) {
    if (!(xi1 > 0.0)) throw std::invalid_argument("de_fixed_point: xi1 must be > 0");
    if (static_cast<int>(lambda_k.size()) != omega_k.cols ||
        static_cast<int>(kbar_k.diag.size()) != omega_k.rows)
        throw std::invalid_argument("de_fixed_point: dimension mismatch");
    const int M = omega_k.cols;
    const int Nr = omega_k.rows;

    std::vector<double> phi(M, 1.0), phi_tilde(Nr, 1.0);
    std::vector<double> tmp_m(M), tmp_n(Nr);
    double residual = 0.0;
    int it = 0;
    double damping = 0.0;  // engaged only if the residual oscillates
    double prev_residual = std::numeric_limits<double>::infinity();
    int non_decreasing = 0;
    for (it = 1; it <= max_iter; ++it) {
        // phi_tilde update: 1 + eta_tilde(phi^-1 lambda) / kbar
        for (int m = 0; m < M; ++m) tmp_m[m] = lambda_k[m] / phi[m];
        std::vector<double> et = eta_tilde(omega_k, tmp_m);
        residual = 0.0;
        for (int n = 0; n < Nr; ++n) {
            const double next = 1.0 + et[n] / kbar_k.diag[n];
            const double mixed = damping * phi_tilde[n] + (1.0 - damping) * next;
            residual = std::max(residual, std::fabs(mixed - phi_tilde[n]));
            phi_tilde[n] = mixed;
        }
        // phi update: 1 + eta(phi_tilde^-1 kbar^-1) lambda
        for (int n = 0; n < Nr; ++n) tmp_n[n] = 1.0 / (phi_tilde[n] * kbar_k.diag[n]);
        std::vector<double> e = eta(omega_k, tmp_n);
        for (int m = 0; m < M; ++m) {
            const double next = 1.0 + e[m] * lambda_k[m];
            const double mixed = damping * phi[m] + (1.0 - damping) * next;
            residual = std::max(residual, std::fabs(mixed - phi[m]));
            phi[m] = mixed;
        }
        if (hook) hook(it, residual);
        if (residual <= xi1) break;
        if (residual >= prev_residual) {
            if (++non_decreasing >= 50) damping = 0.5;
        } else {
            non_decreasing = 0;
        }
        prev_residual = residual;
    }
    if (residual > xi1)
        throw std::runtime_error("de_fixed_point: no convergence, residual " +
                                 std::to_string(residual));

    DeterministicEquivalentState st;
    st.phi_de = phi;
    st.phi_tilde_de = phi_tilde;
    for (int n = 0; n < Nr; ++n) tmp_n[n] = 1.0 / (phi_tilde[n] * kbar_k.diag[n]);
    st.gamma = eta(omega_k, tmp_n);
    for (int m = 0; m < M; ++m) tmp_m[m] = lambda_k[m] / phi[m];
    st.gamma_tilde = eta_tilde(omega_k, tmp_m);
    st.residual = residual;
    st.iterations = it;
    return st;
}

double de_user_rate(const DeterministicEquivalentState& state, const std::vector<double>& lambda_k,
                    const DiagonalCovariance& kbar_k) {
    double r = 0.0;
    for (std::size_t m = 0; m < lambda_k.size(); ++m)
        r += std::log2(1.0 + state.gamma[m] * lambda_k[m]);
    for (std::size_t n = 0; n < kbar_k.diag.size(); ++n) {
        r += std::log2(state.gamma_tilde[n] + kbar_k.diag[n]);
        r -= (1.0 - 1.0 / state.phi_tilde_de[n]) * kLog2e;
    }
    return r;
}

DeSecrecyResult de_secrecy_lower_bound(const PowerAllocation& alloc,
                                       const std::vector<CouplingMatrix>& omegas,
                                       const CouplingMatrix& omega_eve, double xi1, int max_iter) {
    const int K = alloc.users();
    if (static_cast<int>(omegas.size()) != K)
        throw std::invalid_argument("de_secrecy_lower_bound: omegas count != K");
    DeSecrecyResult res;
    res.per_user_r1.resize(K);
    res.per_user_r2.resize(K);
    res.states.reserve(K);
    for (int k = 0; k < K; ++k) {
        const DiagonalCovariance kbar = interference_cov(alloc, k, omegas[k]);
        DeterministicEquivalentState st =
            de_fixed_point(omegas[k], alloc.lambdas[k], kbar, xi1, max_iter);
        const double r1 = de_user_rate(st, alloc.lambdas[k], kbar);
        double r2 = 0.0;
        for (double d : kbar.diag) r2 += std::log2(d);
        r2 += eve_rate_upper_bound(alloc.lambdas[k], omega_eve);
        res.per_user_r1[k] = r1;
        res.per_user_r2[k] = r2;
        if (r1 - r2 > 0.0) res.value_bits += r1 - r2;
        res.states.push_back(std::move(st));
    }
    return res;
}

}  // namespace bdsec
