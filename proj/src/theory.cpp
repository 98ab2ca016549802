#include "bdsec/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bdsec {

ExclusionReport theorem2_excluded_beams(const std::vector<CouplingMatrix>& omegas,
                                        const CouplingMatrix& omega_eve) {
    for (const auto& om : omegas)
        if (om.rows != 1)
            throw std::invalid_argument("theorem2_excluded_beams: requires N_r = 1");
    const std::vector<double> gains_eve = beam_gains(omega_eve);
    ExclusionReport rep;
    for (int k = 0; k < static_cast<int>(omegas.size()); ++k) {
        const std::vector<double> gains = beam_gains(omegas[k]);
        for (int m = 0; m < omegas[k].cols; ++m) {
            if (gains_eve[m] >= gains[m]) {  // boundary (equality) is excluded
                rep.excluded.emplace_back(k, m);
                rep.margins.push_back(gains[m] - gains_eve[m]);
            }
        }
    }
    return rep;
}

Lemma1Result lemma1_check(const std::function<double(Rng&)>& sampler, double a, double b,
                          int samples, std::uint64_t seed) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("lemma1_check: need a > 0, b > 0");
    if (samples < 1) throw std::invalid_argument("lemma1_check: samples >= 1");
    std::vector<double> xs(samples);
    double xbar = 0.0;
    for (int i = 0; i < samples; ++i) {
        Rng rng = Rng::substream(seed, 0x11ULL, static_cast<std::uint64_t>(i));
        xs[i] = sampler(rng);
        xbar += xs[i];
    }
    xbar /= samples;
    Lemma1Result res;
    double mean_d = 0.0, m2 = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double den = a + b * xs[i];
        res.lhs += xs[i] / den / samples;
        res.rhs += xbar / den / samples;
        const double d = (xs[i] - xbar) / den;
        const double delta = d - mean_d;
        mean_d += delta / (i + 1);
        m2 += delta * (d - mean_d);
    }
    res.diff_se = samples > 1 ? std::sqrt(m2 / (static_cast<double>(samples) *
                                                (static_cast<double>(samples) - 1)))
                              : 0.0;
    res.holds = (res.lhs - res.rhs) <= 3.0 * res.diff_se + 1e-12;
    return res;
}

namespace {

// log2 det(I + D^-1 A Lam A^H) for diagonal D, columns of A weighted by lam.
double logdet_bits(const Eigen::MatrixXcd& A, const std::vector<double>& lam,
                   const std::vector<double>& d) {
    const int N = static_cast<int>(A.rows());
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Identity(N, N);
    for (int m = 0; m < static_cast<int>(A.cols()); ++m) {
        if (lam[m] == 0.0) continue;
        Eigen::VectorXcd col = A.col(m);
        for (int n = 0; n < N; ++n) col(n) /= std::sqrt(d[n]);
        H.noalias() += lam[m] * col * col.adjoint();
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(H);
    double ld = 0.0;
    for (int n = 0; n < N; ++n) ld += std::log(std::real(llt.matrixLLT()(n, n)));
    return 2.0 * ld * kLog2e;
}

Eigen::MatrixXcd random_unitary(int M, Rng& rng) {
    Eigen::MatrixXcd Z(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) Z(i, j) = rng.cgauss(1.0);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
    Eigen::MatrixXcd Q = qr.householderQ();
    // fix column phases so the distribution is Haar
    Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < M; ++j) {
        const std::complex<double> r = R(j, j);
        if (std::abs(r) > 0) Q.col(j) *= r / std::abs(r);
    }
    return Q;
}

struct PairedMean {
    double mean_a = 0.0, mean_b = 0.0, mean_d = 0.0, m2_d = 0.0;
    long long n = 0;
    void add(double a, double b) {
        ++n;
        mean_a += (a - mean_a) / n;
        mean_b += (b - mean_b) / n;
        const double d = a - b;
        const double delta = d - mean_d;
        mean_d += delta / n;
        m2_d += delta * (d - mean_d);
    }
    double se_diff() const {
        return n > 1 ? std::sqrt(m2_d / (static_cast<double>(n) * (n - 1))) : 0.0;
    }
};

}  // namespace

RotationTrialReport theorem1_rotation_test(const std::vector<CouplingMatrix>& omegas,
                                           const CouplingMatrix& omega_eve,
                                           const PowerAllocation& alloc, int trials,
                                           int mc_samples, std::uint64_t seed) {
    alloc.validate();
    const int K = alloc.users();
    const int M = alloc.beams();
    RotationTrialReport rep;
    rep.trials = trials;
    for (int r = 0; r < trials; ++r) {
        Rng wrng = Rng::substream(seed, 0x777ULL, static_cast<std::uint64_t>(r));
        const Eigen::MatrixXcd W = random_unitary(M, wrng);
        // diagonals of the rotated covariances Q_k = W Lam_k W^H
        std::vector<std::vector<double>> qdiag(K, std::vector<double>(M, 0.0));
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m)
                for (int j = 0; j < M; ++j)
                    qdiag[k][m] += std::norm(W(m, j)) * alloc.lambdas[k][j];

        double lb_diag = 0.0, lb_rot = 0.0, var_diff = 0.0;
        for (int k = 0; k < K; ++k) {
            // interference covariances (diagonal in both configurations)
            std::vector<double> kd(omegas[k].rows, 1.0), kr(omegas[k].rows, 1.0);
            for (int i = 0; i < K; ++i) {
                if (i == k) continue;
                for (int n = 0; n < omegas[k].rows; ++n)
                    for (int m = 0; m < M; ++m) {
                        kd[n] += omegas[k].at(n, m) * alloc.lambdas[i][m];
                        kr[n] += omegas[k].at(n, m) * qdiag[i][m];
                    }
            }
            PairedMean pm;
            for (int i = 0; i < mc_samples; ++i) {
                Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(k),
                                         static_cast<std::uint64_t>(i));
                const Eigen::MatrixXcd G = sample_beam_channel(omegas[k], rng);
                const double rd = logdet_bits(G, alloc.lambdas[k], kd);
                const Eigen::MatrixXcd GW = G * W;
                const double rr = logdet_bits(GW, alloc.lambdas[k], kr);
                pm.add(rd, rr);
            }
            double cub_d = 0.0, cub_r = 0.0;
            for (int j = 0; j < omega_eve.rows; ++j) {
                double ed = 1.0, er = 1.0;
                for (int m = 0; m < M; ++m) {
                    ed += omega_eve.at(j, m) * alloc.lambdas[k][m];
                    er += omega_eve.at(j, m) * qdiag[k][m];
                }
                cub_d += std::log2(ed);
                cub_r += std::log2(er);
            }
            lb_diag += std::max(0.0, pm.mean_a - cub_d);
            lb_rot += std::max(0.0, pm.mean_b - cub_r);
            var_diff += pm.se_diff() * pm.se_diff();
        }
        rep.diagonal_values.push_back(lb_diag);
        rep.rotated_values.push_back(lb_rot);
        if (lb_diag >= lb_rot - 3.0 * std::sqrt(var_diff)) ++rep.diagonal_wins;
    }
    return rep;
}

std::vector<double> project_capped_simplex(std::vector<double> x, double P) {
    std::vector<double> y(x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = std::max(x[i], 0.0);
        s += y[i];
    }
    if (s <= P) return y;
    // project onto the simplex sum = P
    std::vector<double> u = x;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    int rho = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cum += u[i];
        const double t = (cum - P) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            rho = static_cast<int>(i + 1);
            tau = t;
        }
    }
    (void)rho;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::max(x[i] - tau, 0.0);
    return y;
}

std::vector<double> oracle_projected_gradient(
    const std::function<double(const std::vector<double>&)>& objective, int dim, double P,
    const ProjectedGradientConfig& config, const std::vector<double>& x0) {
    std::vector<double> x = x0.empty() ? std::vector<double>(dim, P / (2.0 * dim)) : x0;
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("oracle_projected_gradient: x0 dimension mismatch");
    x = project_capped_simplex(std::move(x), P);
    const double step0 = config.step0 > 0.0 ? config.step0 : P / 10.0;
    std::vector<double> grad(dim), best = x;
    double best_val = objective(x);
    std::vector<double> xp = x;
    for (int it = 0; it < config.iterations; ++it) {
        for (int i = 0; i < dim; ++i) {
            const double h = config.fd_step * (1.0 + std::fabs(x[i]));
            xp = x;
            xp[i] = x[i] + h;
            const double fp = objective(xp);
            xp[i] = std::max(0.0, x[i] - h);
            const double fm = objective(xp);
            grad[i] = (fp - fm) / (x[i] + h - xp[i]);
        }
        const double step = step0 / std::sqrt(1.0 + it);
        for (int i = 0; i < dim; ++i) x[i] += step * grad[i];
        x = project_capped_simplex(std::move(x), P);
        const double val = objective(x);
        if (val > best_val) {
            best_val = val;
            best = x;
        }
    }
    return best;
}

}  // namespace bdsec
