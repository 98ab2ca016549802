#include "bdsec/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace bdsec {

double PowerAllocation::total() const {
    double s = 0.0;
    for (const auto& lam : lambdas)
        for (double v : lam) s += v;
    return s;
}

void PowerAllocation::validate() const {
    if (lambdas.empty()) throw std::invalid_argument("PowerAllocation: no users");
    const std::size_t M = lambdas[0].size();
    for (const auto& lam : lambdas) {
        if (lam.size() != M) throw std::invalid_argument("PowerAllocation: ragged lambdas");
        for (double v : lam)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("PowerAllocation: powers must be finite and >= 0");
    }
    if (total() > budget * (1.0 + 1e-9) + 1e-15)
        throw std::invalid_argument("PowerAllocation: total power exceeds budget");
}

PowerAllocation PowerAllocation::zero(int K, int M, double P) {
    PowerAllocation a;
    a.lambdas.assign(K, std::vector<double>(M, 0.0));
    a.budget = P;
    return a;
}

DiagonalCovariance interference_cov(const PowerAllocation& alloc, int k,
                                    const CouplingMatrix& omega_k) {
    if (k < 0 || k >= alloc.users()) throw std::out_of_range("interference_cov: user index");
    if (omega_k.cols != alloc.beams())
        throw std::invalid_argument("interference_cov: beam count mismatch");
    const int M = omega_k.cols;
    // sum of all interfering allocations per beam
    std::vector<double> lam_sum(M, 0.0);
    for (int i = 0; i < alloc.users(); ++i) {
        if (i == k) continue;
        for (int m = 0; m < M; ++m) lam_sum[m] += alloc.lambdas[i][m];
    }
    DiagonalCovariance cov;
    cov.diag.assign(omega_k.rows, 1.0);
    for (int n = 0; n < omega_k.rows; ++n)
        for (int m = 0; m < M; ++m) cov.diag[n] += omega_k.at(n, m) * lam_sum[m];
    return cov;
}

DiagonalCovariance eve_cov(const std::vector<double>& alloc_k, const CouplingMatrix& omega_eve) {
    if (omega_eve.cols != static_cast<int>(alloc_k.size()))
        throw std::invalid_argument("eve_cov: beam count mismatch");
    DiagonalCovariance cov;
    cov.diag.assign(omega_eve.rows, 1.0);
    for (int j = 0; j < omega_eve.rows; ++j)
        for (int m = 0; m < omega_eve.cols; ++m)
            cov.diag[j] += omega_eve.at(j, m) * alloc_k[m];
    return cov;
}

double eve_rate_upper_bound(const std::vector<double>& alloc_k, const CouplingMatrix& omega_eve) {
    const DiagonalCovariance cov = eve_cov(alloc_k, omega_eve);
    double r = 0.0;
    for (double d : cov.diag) r += std::log2(d);
    return r;
}

namespace {

// log2 det(I + D^-1 G Lam G^H) with diagonal D >= I, via Cholesky of the
// whitened Hermitian form.
double logdet_rate_bits(const Eigen::MatrixXcd& G, const std::vector<double>& lam,
                        const std::vector<double>& dinv_sqrt) {
    const int N = static_cast<int>(G.rows());
    const int M = static_cast<int>(G.cols());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(N, N);
    for (int m = 0; m < M; ++m) {
        if (lam[m] == 0.0) continue;
        Eigen::VectorXcd col = G.col(m);
        for (int n = 0; n < N; ++n) col(n) *= dinv_sqrt[n];
        A.noalias() += lam[m] * col * col.adjoint();
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    double ld = 0.0;
    for (int n = 0; n < N; ++n) ld += std::log(std::real(llt.matrixLLT()(n, n)));
    return 2.0 * ld * kLog2e;
}

struct Welford {
    long long n = 0;
    double mean = 0.0, m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double std_error() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / (static_cast<double>(n) * (static_cast<double>(n) - 1)));
    }
};

McEstimate rate_mc_impl(const CouplingMatrix& omega, const std::vector<double>& lam,
                        const std::vector<double>& kbar_diag, int samples, std::uint64_t seed,
                        std::uint64_t stream_id) {
    std::vector<double> dinv_sqrt(kbar_diag.size());
    for (std::size_t n = 0; n < kbar_diag.size(); ++n) dinv_sqrt[n] = 1.0 / std::sqrt(kbar_diag[n]);
    Welford acc;
    for (int i = 0; i < samples; ++i) {
        Rng rng = Rng::substream(seed, stream_id, static_cast<std::uint64_t>(i));
        const Eigen::MatrixXcd G = sample_beam_channel(omega, rng);
        acc.add(logdet_rate_bits(G, lam, dinv_sqrt));
    }
    return {acc.mean, acc.std_error()};
}

}  // namespace

McEstimate user_rate_mc(const PowerAllocation& alloc, int k, const CouplingMatrix& omega_k,
                        int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("user_rate_mc: samples must be >= 1");
    const DiagonalCovariance kbar = interference_cov(alloc, k, omega_k);
    return rate_mc_impl(omega_k, alloc.lambdas[k], kbar.diag, samples, seed,
                        static_cast<std::uint64_t>(k));
}

McEstimate eve_rate_mc(const std::vector<double>& alloc_k, const CouplingMatrix& omega_eve,
                       int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("eve_rate_mc: samples must be >= 1");
    std::vector<double> ones(omega_eve.rows, 1.0);
    return rate_mc_impl(omega_eve, alloc_k, ones, samples, seed, 0x5EEEULL);
}

RateReport secrecy_rates(const PowerAllocation& alloc, const std::vector<CouplingMatrix>& omegas,
                         const CouplingMatrix& omega_eve, int samples, std::uint64_t seed) {
    alloc.validate();
    const int K = alloc.users();
    if (static_cast<int>(omegas.size()) != K)
        throw std::invalid_argument("secrecy_rates: omegas count != K");
    RateReport rep;
    rep.per_user_rate.resize(K);
    rep.per_user_eve_bound.resize(K);
    rep.per_user_eve_mc.resize(K);
    rep.per_user_rate_se.resize(K);
    rep.per_user_eve_mc_se.resize(K);
    double var_lb = 0.0, var_mc = 0.0;
    for (int k = 0; k < K; ++k) {
        const DiagonalCovariance kbar = interference_cov(alloc, k, omegas[k]);
        const McEstimate rk = rate_mc_impl(omegas[k], alloc.lambdas[k], kbar.diag, samples, seed,
                                           static_cast<std::uint64_t>(k));
        std::vector<double> ones(omega_eve.rows, 1.0);
        const McEstimate ek = rate_mc_impl(omega_eve, alloc.lambdas[k], ones, samples, seed,
                                           0x10000ULL + static_cast<std::uint64_t>(k));
        rep.per_user_rate[k] = rk.value;
        rep.per_user_rate_se[k] = rk.std_error;
        rep.per_user_eve_mc[k] = ek.value;
        rep.per_user_eve_mc_se[k] = ek.std_error;
        rep.per_user_eve_bound[k] = eve_rate_upper_bound(alloc.lambdas[k], omega_eve);
        const double margin_lb = rk.value - rep.per_user_eve_bound[k];
        if (margin_lb > 0.0) {
            rep.secrecy_sum_rate_lb += margin_lb;
            var_lb += rk.std_error * rk.std_error;
        }
        const double margin_mc = rk.value - ek.value;
        if (margin_mc > 0.0) {
            rep.secrecy_sum_rate_mc += margin_mc;
            var_mc += rk.std_error * rk.std_error + ek.std_error * ek.std_error;
        }
    }
    rep.secrecy_lb_se = std::sqrt(var_lb);
    rep.secrecy_mc_se = std::sqrt(var_mc);
    return rep;
}

}  // namespace bdsec
