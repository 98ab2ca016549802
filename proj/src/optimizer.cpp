#include "bdsec/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace bdsec {

namespace {

// Diagonal of Kbar_k at allocation x: 1 + sum_{i != k} sum_m omega_k[n][m] x_i[m].
std::vector<double> kbar_diag_at(const std::vector<std::vector<double>>& x, int k,
                                 const CouplingMatrix& omega_k,
                                 const std::vector<double>& tot) {
    std::vector<double> d(omega_k.rows, 1.0);
    for (int n = 0; n < omega_k.rows; ++n)
        for (int m = 0; m < omega_k.cols; ++m)
            d[n] += omega_k.at(n, m) * (tot[m] - x[k][m]);
    return d;
}

std::vector<double> column_totals(const std::vector<std::vector<double>>& x) {
    std::vector<double> tot(x[0].size(), 0.0);
    for (const auto& row : x)
        for (std::size_t m = 0; m < row.size(); ++m) tot[m] += row[m];
    return tot;
}

}  // namespace

std::vector<std::vector<double>> delta_matrices(const PowerAllocation& alloc_prev,
                                                const std::vector<CouplingMatrix>& omegas,
                                                const CouplingMatrix& omega_eve) {
    const int K = alloc_prev.users();
    const int M = alloc_prev.beams();
    const std::vector<double> tot = column_totals(alloc_prev.lambdas);

    // t[l][j] = tr(Lambda_{\l} Rcheck_{l,j})
    std::vector<std::vector<double>> t(K);
    for (int l = 0; l < K; ++l) {
        t[l].assign(omegas[l].rows, 0.0);
        for (int j = 0; j < omegas[l].rows; ++j)
            for (int m = 0; m < M; ++m)
                t[l][j] += omegas[l].at(j, m) * (tot[m] - alloc_prev.lambdas[l][m]);
    }
    // S[m] = sum over all (l,j) of omega_l[j][m] / (1 + t[l][j])
    std::vector<double> S(M, 0.0);
    for (int l = 0; l < K; ++l)
        for (int j = 0; j < omegas[l].rows; ++j) {
            const double w = 1.0 / (1.0 + t[l][j]);
            for (int m = 0; m < M; ++m) S[m] += omegas[l].at(j, m) * w;
        }

    std::vector<std::vector<double>> delta(K, std::vector<double>(M, 0.0));
    for (int k = 0; k < K; ++k) {
        for (int m = 0; m < M; ++m) delta[k][m] = S[m];
        for (int j = 0; j < omegas[k].rows; ++j) {
            const double w = 1.0 / (1.0 + t[k][j]);
            for (int m = 0; m < M; ++m) delta[k][m] -= omegas[k].at(j, m) * w;
        }
        for (int j = 0; j < omega_eve.rows; ++j) {
            double e = 1.0;
            for (int m = 0; m < M; ++m) e += omega_eve.at(j, m) * alloc_prev.lambdas[k][m];
            const double w = 1.0 / e;
            for (int m = 0; m < M; ++m) delta[k][m] += omega_eve.at(j, m) * w;
        }
    }
    return delta;
}

CccpState build_cccp_state(const PowerAllocation& alloc, const std::vector<CouplingMatrix>& omegas,
                           const CouplingMatrix& omega_eve, const SolverConfig& config,
                           int iteration) {
    CccpState st;
    st.alloc = alloc;
    st.iteration = iteration;
    const int K = alloc.users();
    st.kbars.reserve(K);
    st.de_states.reserve(K);
    for (int k = 0; k < K; ++k) {
        DiagonalCovariance kbar = interference_cov(alloc, k, omegas[k]);
        DeterministicEquivalentState de =
            de_fixed_point(omegas[k], alloc.lambdas[k], kbar, config.xi1, config.de_max_iter);
        const double r1 = de_user_rate(de, alloc.lambdas[k], kbar);
        double r2 = 0.0;
        for (double d : kbar.diag) r2 += std::log2(d);
        r2 += eve_rate_upper_bound(alloc.lambdas[k], omega_eve);
        if (r1 - r2 > 0.0) st.objective_bits += r1 - r2;
        st.objective_unclamped_bits += r1 - r2;
        st.kbars.push_back(std::move(kbar));
        st.de_states.push_back(std::move(de));
    }
    st.delta = delta_matrices(alloc, omegas, omega_eve);
    return st;
}

double surrogate_objective(const PowerAllocation& x, const CccpState& cccp,
                           const std::vector<CouplingMatrix>& omegas) {
    const int K = x.users();
    const int M = x.beams();
    const std::vector<double> tot = column_totals(x.lambdas);
    double nats = 0.0;
    for (int k = 0; k < K; ++k) {
        const auto& gamma = cccp.de_states[k].gamma;
        const auto& gtil = cccp.de_states[k].gamma_tilde;
        for (int m = 0; m < M; ++m) {
            nats += std::log(1.0 + gamma[m] * x.lambdas[k][m]);
            nats -= cccp.delta[k][m] * x.lambdas[k][m];
        }
        const std::vector<double> kbar = kbar_diag_at(x.lambdas, k, omegas[k], tot);
        for (int n = 0; n < omegas[k].rows; ++n) nats += std::log(gtil[n] + kbar[n]);
    }
    return nats * kLog2e;
}

ResidualPair water_fill_residual(double x_km, int k, int m, const CccpState& cccp,
                                 const std::vector<CouplingMatrix>& omegas,
                                 const PowerAllocation& x, double mu) {
    const int K = x.users();
    const std::vector<double> tot = column_totals(x.lambdas);
    const double g = cccp.de_states[k].gamma[m];
    ResidualPair rp;
    const double den0 = 1.0 + g * x_km;
    rp.rho = g / den0 - cccp.delta[k][m] - mu;
    rp.rho_prime = -(g * g) / (den0 * den0);
    for (int l = 0; l < K; ++l) {
        if (l == k) continue;
        const auto& gtil = cccp.de_states[l].gamma_tilde;
        for (int j = 0; j < omegas[l].rows; ++j) {
            // Gamma_tilde_l + Kbar_l diagonal, with the (k,m) contribution
            // replaced by the candidate x_km.
            double d = 1.0 + gtil[j];
            for (int mm = 0; mm < omegas[l].cols; ++mm)
                d += omegas[l].at(j, mm) * (tot[mm] - x.lambdas[l][mm]);
            const double r = omegas[l].at(j, m);
            d += r * (x_km - x.lambdas[k][m]);
            rp.rho += r / d;
            rp.rho_prime -= (r * r) / (d * d);
        }
    }
    return rp;
}

double newton_root(const std::function<ResidualPair(double)>& f, double x0, double lo, double hi,
                   double xi3, int max_iter) {
    double a = lo, b = hi;
    const double fa = f(a).rho;
    const double fb = f(b).rho;
    if (fa < 0.0 || fb > 0.0)
        throw std::runtime_error("newton_root: no sign change on the bracket");
    double x = std::clamp(x0, a, b);
    for (int it = 0; it < max_iter; ++it) {
        const ResidualPair p = f(x);
        if (p.rho >= 0.0) a = x; else b = x;
        double xn;
        if (p.rho_prime < 0.0 && std::isfinite(p.rho_prime)) {
            xn = x - p.rho / p.rho_prime;
            if (!std::isfinite(xn) || xn <= a || xn >= b) xn = 0.5 * (a + b);
        } else {
            xn = 0.5 * (a + b);
        }
        if (std::fabs(xn - x) <= xi3) return xn;
        x = xn;
    }
    // bisection fallback
    for (int it = 0; it < 200 && (b - a) > xi3; ++it) {
        const double mid = 0.5 * (a + b);
        if (f(mid).rho >= 0.0) a = mid; else b = mid;
    }
    return 0.5 * (a + b);
}

PowerAllocation initial_allocation(const std::vector<CouplingMatrix>& omegas,
                                   const CouplingMatrix& omega_eve, double P,
                                   const SolverConfig& config) {
    const int K = static_cast<int>(omegas.size());
    const int M = omegas[0].cols;
    PowerAllocation alloc = PowerAllocation::zero(K, M, P);
    if (config.init == SolverConfig::Init::Custom) {
        alloc = config.custom_init;
        alloc.budget = P;
        alloc.validate();
        return alloc;
    }
    if (config.init == SolverConfig::Init::Uniform) {
        const double p = P / (static_cast<double>(K) * M);
        for (auto& lam : alloc.lambdas) std::fill(lam.begin(), lam.end(), p);
        return alloc;
    }
    const std::vector<double> gains_eve = beam_gains(omega_eve);
    const int B = std::min(config.strongest_beams, M);
    for (int k = 0; k < K; ++k) {
        const std::vector<double> gains = beam_gains(omegas[k]);
        std::vector<int> idx(M);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return gains[a] - gains_eve[a] > gains[b] - gains_eve[b];
        });
        const double p = P / (static_cast<double>(K) * B);
        for (int i = 0; i < B; ++i) alloc.lambdas[k][idx[i]] = p;
    }
    return alloc;
}

namespace {

// One CCCP iteration's frozen surrogate, with per-sweep caches for the
// Jacobi coordinate solves.
class SurrogateSweep {
  public:
    SurrogateSweep(const CccpState& cccp, const std::vector<CouplingMatrix>& omegas, double P,
                   const SolverConfig& cfg)
        : cccp_(cccp), omegas_(omegas), P_(P), cfg_(cfg),
          K_(static_cast<int>(omegas.size())), M_(omegas[0].cols) {}

    // Freeze the background x for this sweep.
    void set_background(const std::vector<std::vector<double>>& x) {
        bg_ = &x;
        tot_ = column_totals(x);
        // base_[l][j] = 1 + gamma_tilde[l][j] + tr(Rcheck_{l,j} X_{\l})
        base_.assign(K_, {});
        for (int l = 0; l < K_; ++l) {
            base_[l].assign(omegas_[l].rows, 0.0);
            for (int j = 0; j < omegas_[l].rows; ++j) {
                double d = 1.0 + cccp_.de_states[l].gamma_tilde[j];
                for (int m = 0; m < M_; ++m)
                    d += omegas_[l].at(j, m) * (tot_[m] - x[l][m]);
                base_[l][j] = d;
            }
        }
        // coupling_all_[m] = sum over (l,j) of omega_l[j][m] / base_[l][j];
        // coupling_own_[k][m] excludes everything but user k. Together they
        // give the cross-user part of the residual at the background in O(1)
        // per coordinate, which keeps a sweep linear in K*M.
        coupling_all_.assign(M_, 0.0);
        coupling_own_.assign(K_, std::vector<double>(M_, 0.0));
        for (int l = 0; l < K_; ++l)
            for (int j = 0; j < omegas_[l].rows; ++j) {
                const double w = 1.0 / base_[l][j];
                for (int m = 0; m < M_; ++m) {
                    const double c = omegas_[l].at(j, m) * w;
                    coupling_all_[m] += c;
                    coupling_own_[l][m] += c;
                }
            }
    }

    ResidualPair residual(int k, int m, double x_km, double mu) const {
        const double g = cccp_.de_states[k].gamma[m];
        ResidualPair rp;
        const double den0 = 1.0 + g * x_km;
        rp.rho = g / den0 - cccp_.delta[k][m] - mu;
        rp.rho_prime = -(g * g) / (den0 * den0);
        const double xk_frozen = (*bg_)[k][m];
        for (int l = 0; l < K_; ++l) {
            if (l == k) continue;
            for (int j = 0; j < omegas_[l].rows; ++j) {
                const double r = omegas_[l].at(j, m);
                const double d = base_[l][j] + r * (x_km - xk_frozen);
                rp.rho += r / d;
                rp.rho_prime -= (r * r) / (d * d);
            }
        }
        return rp;
    }

    // Per-coordinate water-filling solve at multiplier mu, clamped to [0, P].
    // The closed form with the cross-user coupling held at its background
    // value seeds the exact Newton solve; near a fixed point the seed is
    // already the root, so Newton usually verifies it in one evaluation.
    double solve_coordinate(int k, int m, double mu, double warm) const {
        const double g = cccp_.de_states[k].gamma[m];
        const double c = cccp_.delta[k][m] + mu - (coupling_all_[m] - coupling_own_[k][m]);
        if ((*bg_)[k][m] == 0.0) {
            // with a zero background the frozen coupling is exact at the
            // origin, so the stay-at-zero test is O(1)
            if (g <= c) return 0.0;
        } else if (residual(k, m, 0.0, mu).rho <= 0.0) {
            return 0.0;
        }
        double seed = warm;
        if (c > 0.0 && c < g) seed = std::min(1.0 / c - 1.0 / g, P_);
        if (residual(k, m, P_, mu).rho > 0.0) return P_;
        auto f = [&](double x) { return residual(k, m, x, mu); };
        return newton_root(f, seed, 0.0, P_, cfg_.xi3, cfg_.newton_max_iter);
    }

    double sweep_at_mu(double mu, std::vector<std::vector<double>>& xbar) const {
        double ptot = 0.0;
        for (int k = 0; k < K_; ++k)
            for (int m = 0; m < M_; ++m) {
                xbar[k][m] = solve_coordinate(k, m, mu, xbar[k][m]);
                ptot += xbar[k][m];
            }
        return ptot;
    }

    int users() const { return K_; }
    int beams() const { return M_; }
    double budget() const { return P_; }

  private:
    const CccpState& cccp_;
    const std::vector<CouplingMatrix>& omegas_;
    double P_;
    const SolverConfig& cfg_;
    int K_, M_;
    const std::vector<std::vector<double>>* bg_ = nullptr;
    std::vector<double> tot_;
    std::vector<std::vector<double>> base_;
    std::vector<double> coupling_all_;
    std::vector<std::vector<double>> coupling_own_;
};

}  // namespace

IwfaResult iwfa(const CccpState& cccp, const std::vector<CouplingMatrix>& omegas,
                const SolverConfig& config, ConvergenceTrace* trace) {
    config.validate();
    const int K = static_cast<int>(omegas.size());
    const int M = omegas[0].cols;
    const double P = cccp.alloc.budget;
    const double xi4 = std::max(config.xi4_rel * P, 1e-300);
    const auto t0 = std::chrono::steady_clock::now();
    SurrogateSweep sweep(cccp, omegas, P, config);

    PowerAllocation x = cccp.alloc;
    IwfaResult res;
    res.mu_rule_sufficed = true;
    double c_prev = surrogate_objective(x, cccp, omegas);
    res.sweep_objectives.push_back(c_prev);

    std::vector<std::vector<double>> xbar = x.lambdas;
    PowerAllocation cand = x;
    double mu_warm = 0.0;
    for (int t = 1; t <= config.iwfa_max_sweeps; ++t) {
        sweep.set_background(x.lambdas);

        // multiplier search: mu = 0 first, then increment + bisection refine.
        // The accepted xbar must satisfy p_tot <= P and P - p_tot <= xi4.
        double mu = 0.0;
        double ptot = sweep.sweep_at_mu(mu, xbar);
        if (ptot > P) {
            double mu_lo = 0.0, mu_hi = -1.0;
            double last_dmu = 0.0;
            // the previous sweep's multiplier is usually already one side of
            // the bracket, which saves most of the increment walk
            if (mu_warm > 0.0) {
                const double pw = sweep.sweep_at_mu(mu_warm, xbar);
                mu = mu_warm;
                ptot = pw;
                if (pw > P) mu_lo = mu_warm; else mu_hi = mu_warm;
            }
            for (int u = 0; u < config.mu_max_iter && mu_hi < 0.0; ++u) {
                // Algorithm-2 increment rule, evaluated at the current xbar
                double dmu = std::numeric_limits<double>::infinity();
                const double shift = (P - ptot) / M;
                for (int k = 0; k < K; ++k)
                    for (int m = 0; m < M; ++m) {
                        const double x0 = xbar[k][m];
                        const double x1 = std::max(0.0, x0 + shift);
                        const double d = std::fabs(sweep.residual(k, m, x1, mu).rho -
                                                   sweep.residual(k, m, x0, mu).rho);
                        dmu = std::min(dmu, d);
                    }
                if (!(dmu > 0.0) || !std::isfinite(dmu)) dmu = std::max(2.0 * last_dmu, 1e-8);
                // the increment rule minimizes over every coordinate, so its
                // steps shrink as K*M grows; grow geometrically past the rule
                // so the bracket is found in logarithmically many sweeps (the
                // bisection refine below makes overshoot harmless)
                if (u >= 1) dmu = std::max(dmu, std::max(2.0 * last_dmu, 1e-8));
                last_dmu = dmu;
                const double mu_next = mu + dmu;
                const double ptot_next = sweep.sweep_at_mu(mu_next, xbar);
                mu = mu_next;
                ptot = ptot_next;
                if (ptot > P) mu_lo = mu; else mu_hi = mu;
            }
            if (mu_hi < 0.0)
                throw std::runtime_error("iwfa: multiplier search failed to bracket P");
            // accept only when the slack also satisfies the complementary-
            // slackness certificate mu * (P - p_tot) <= kkt_tol * P
            const auto accepted = [&](double m, double p) {
                return p <= P && P - p <= xi4 && m * (P - p) <= config.kkt_tol * P;
            };
            if (!accepted(mu, ptot)) {
                res.mu_rule_sufficed = false;
                for (int it = 0; it < config.mu_max_iter; ++it) {
                    if (accepted(mu, ptot)) break;
                    const double mu_mid = 0.5 * (mu_lo + mu_hi);
                    const double ptot_mid = sweep.sweep_at_mu(mu_mid, xbar);
                    if (ptot_mid > P) mu_lo = mu_mid; else mu_hi = mu_mid;
                    mu = mu_mid;
                    ptot = ptot_mid;
                }
                if (!accepted(mu, ptot)) {
                    // land exactly on the feasible side of the bracket
                    mu = mu_hi;
                    ptot = sweep.sweep_at_mu(mu, xbar);
                    if (!accepted(mu, ptot))
                        throw std::runtime_error(
                            "iwfa: |P - p_tot| tolerance not reached, residual " +
                            std::to_string(std::fabs(P - ptot)));
                }
            }
            // With mu > 0 the budget is active: spend the residual P - p_tot
            // exactly. Scaling moves along a near-stationary direction of the
            // Lagrangian, so the surrogate cannot drop to first order, and it
            // keeps the power total identical across sweeps (otherwise the
            // mu * (P - p_tot) slack would leak into the objective
            // comparison as a spurious decrease).
            if (ptot > 0.0 && ptot < P) {
                const double scale = P / ptot;
                for (auto& rowv : xbar)
                    for (auto& v : rowv) v *= scale;
                ptot = P;
            }
        }
        mu_warm = mu;

        // Fast path: take the full step when it improves the surrogate.
        // Otherwise backtrack along the step direction, which is an ascent
        // direction because each coordinate was solved to its own optimum;
        // the floor 1/(K*M) is the averaged step whose improvement is
        // guaranteed, so the sweep never stalls.
        cand.lambdas = xbar;
        const double c_bar = surrogate_objective(cand, cccp, omegas);
        if (c_bar > c_prev) {
            ++res.fast_path_accepts;
        } else {
            const double a_min = 1.0 / (static_cast<double>(K) * M);
            for (double a = 0.5;; a *= 0.5) {
                if (a < a_min) a = a_min;
                for (int k = 0; k < K; ++k)
                    for (int m = 0; m < M; ++m)
                        cand.lambdas[k][m] = a * xbar[k][m] + (1.0 - a) * x.lambdas[k][m];
                if (a == a_min || surrogate_objective(cand, cccp, omegas) > c_prev) break;
            }
        }
        const double c_next = surrogate_objective(cand, cccp, omegas);
        if (c_next < c_prev - 1e-9)
            throw std::runtime_error("iwfa: surrogate objective decreased by " +
                                     std::to_string(c_prev - c_next));

        // KKT certificate at the accepted iterate
        sweep.set_background(cand.lambdas);
        double kkt = 0.0;
        double power = 0.0;
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m) {
                const double xv = cand.lambdas[k][m];
                power += xv;
                const double r = sweep.residual(k, m, xv, mu).rho;
                kkt = std::max(kkt, xv > 0.0 ? std::fabs(r) : std::max(r, 0.0));
            }
        res.comp_slack = std::fabs(mu * (power - P));
        res.kkt_stationarity = kkt;
        res.mu = mu;
        res.sweeps = t;
        res.sweep_objectives.push_back(c_next);
        if (trace)
            trace->add({"iwfa", t, c_next, kkt, power, mu,
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count()});

        const bool obj_done = std::fabs(c_next - c_prev) <= config.xi5;
        x = cand;
        c_prev = c_next;
        if (obj_done && kkt <= config.kkt_tol && res.comp_slack <= config.kkt_tol * P)
            break;
    }
    res.alloc = x;
    res.objective_bits = c_prev;
    return res;
}

CccpResult cccp_solve(const std::vector<CouplingMatrix>& omegas, const CouplingMatrix& omega_eve,
                      double P, const SolverConfig& config) {
    config.validate();
    if (omegas.empty()) throw std::invalid_argument("cccp_solve: no users");
    if (!(P > 0.0)) throw std::invalid_argument("cccp_solve: P must be > 0");

    CccpResult res;
    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    PowerAllocation alloc = initial_allocation(omegas, omega_eve, P, config);
    CccpState state = build_cccp_state(alloc, omegas, omega_eve, config, 0);
    // the trace and the stopping rule follow the unclamped margin sum, which
    // is what surrogate ascent makes monotone
    res.trace.add({"cccp", 0, state.objective_unclamped_bits, 0.0, alloc.total(), 0.0, elapsed()});
    double obj_prev = state.objective_unclamped_bits;

    bool converged = false;
    for (int i = 1; i <= config.cccp_max_iter; ++i) {
        const double c_before = surrogate_objective(state.alloc, state, omegas);
        IwfaResult iw;
        try {
            iw = iwfa(state, omegas, config, &res.trace);
        } catch (const std::exception& e) {
            throw std::runtime_error("cccp iteration " + std::to_string(i) + ": " + e.what());
        }
        if (iw.objective_bits < c_before - 1e-9)
            throw std::runtime_error("cccp: surrogate ascent violated at iteration " +
                                     std::to_string(i));
        // The inner step maximizes a model whose fixed-point auxiliaries are
        // frozen at the current allocation. The model matches the objective
        // gradient there but is not a global lower bound, so the full step
        // can overshoot and cycle. Safeguard: accept the full step only when
        // the recomputed objective does not decrease; otherwise backtrack
        // along the segment toward the previous allocation, which is an
        // ascent direction by the first-order match.
        const auto blend_at = [&](double step) {
            PowerAllocation blend = state.alloc;
            double tot = 0.0;
            for (std::size_t k = 0; k < blend.lambdas.size(); ++k)
                for (std::size_t m = 0; m < blend.lambdas[k].size(); ++m) {
                    const double v = (1.0 - step) * state.alloc.lambdas[k][m] +
                                     step * iw.alloc.lambdas[k][m];
                    blend.lambdas[k][m] = std::max(v, 0.0);
                    tot += blend.lambdas[k][m];
                }
            // clamping extrapolated steps can push the total above P
            if (tot > P) {
                const double s = P / tot;
                for (auto& row : blend.lambdas)
                    for (double& v : row) v *= s;
            }
            return blend;
        };
        CccpState cand = build_cccp_state(iw.alloc, omegas, omega_eve, config, i);
        double step = 1.0;
        while (cand.objective_unclamped_bits < state.objective_unclamped_bits - 1e-12 &&
               step > 1.0 / 1024.0) {
            step *= 0.5;
            cand = build_cccp_state(blend_at(step), omegas, omega_eve, config, i);
        }
        if (step == 1.0 && cand.objective_unclamped_bits > state.objective_unclamped_bits) {
            // the map often contracts slowly along a fixed direction, so try
            // lengthening the accepted full step while it keeps improving
            for (double over = 2.0; over <= 64.0; over *= 2.0) {
                CccpState far;
                try {
                    far = build_cccp_state(blend_at(over), omegas, omega_eve, config, i);
                } catch (const std::exception&) {
                    break;
                }
                if (far.objective_unclamped_bits <= cand.objective_unclamped_bits) break;
                cand = std::move(far);
            }
        }
        res.iterations = i;
        res.last_iwfa = std::move(iw);
        if (cand.objective_unclamped_bits < state.objective_unclamped_bits - 1e-12) {
            // even the smallest step fails to improve: stationary up to the
            // backtracking resolution
            converged = true;
            break;
        }
        state = std::move(cand);
        res.trace.add({"cccp", i, state.objective_unclamped_bits, res.last_iwfa.kkt_stationarity,
                       state.alloc.total(), res.last_iwfa.mu, elapsed()});
        if (std::fabs(state.objective_unclamped_bits - obj_prev) <= config.xi2) {
            converged = true;
            break;
        }
        obj_prev = state.objective_unclamped_bits;
    }
    if (!converged && !config.allow_cap_exit)
        throw std::runtime_error("cccp_solve: no convergence within " +
                                 std::to_string(config.cccp_max_iter) + " iterations");
    res.alloc = state.alloc;
    res.objective_bits = state.objective_bits;
    return res;
}

}  // namespace bdsec
