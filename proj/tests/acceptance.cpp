// Acceptance gate: one check per shipped claim, each printing a single
// PASS/FAIL line with the measured values. Run with no arguments for the full
// gate or with a single criterion number (1..10).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bdsec/scenario.hpp"

using namespace bdsec;

namespace {

struct Check {
    bool pass = false;
    std::string detail;
};

double now_minus(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CouplingSet cluster_set(int M, int K, int Nr, int Ne, std::uint64_t seed) {
    SystemDims dims;
    dims.M = M;
    dims.K = K;
    dims.N_r = Nr;
    dims.N_e = Ne;
    CouplingProfile prof;
    prof.kind = ProfileKind::ExponentialCluster;
    prof.floor = 0.05;
    prof.seed = seed;
    return synth_coupling(dims, prof);
}

ScenarioConfig paper_scale_config() {
    ScenarioConfig cfg;
    cfg.dims.M = 128;
    cfg.dims.K = 8;
    cfg.dims.N_r = 4;
    cfg.dims.N_e = 4;
    cfg.coupling.profile.kind = ProfileKind::ExponentialCluster;
    cfg.coupling.profile.cluster_width = 8.0;  // M / (2K): separated clusters
    cfg.coupling.profile.floor = 0.01;
    cfg.coupling.profile.seed = 1234;
    cfg.snr_db = {-10, -5, 0, 5, 10, 15, 20};
    cfg.mc_samples = 2000;
    cfg.seed = 1;
    return cfg;
}

struct PaperSweep {
    SweepArtifact art;
    CouplingSet set;
    double wall_s = 0.0;
};

// shared between criteria 1 and 2 when both run in one process
const PaperSweep& paper_sweep() {
    static const PaperSweep cached = [] {
        PaperSweep ps;
        const ScenarioConfig cfg = paper_scale_config();
        ps.set = resolve_coupling(cfg);
        const auto t0 = std::chrono::steady_clock::now();
        ps.art = run_sweep(cfg, ps.set);
        ps.wall_s = now_minus(t0);
        return ps;
    }();
    return cached;
}

// --- 1: the lower bound stays below the MC secrecy rate on the large grid ---
Check criterion1() {
    const PaperSweep& ps = paper_sweep();
    Check c;
    c.pass = true;
    double max_rel_gap = 0.0;
    for (const SweepRow& row : ps.art.rows) {
        if (!row.ok) {
            c.pass = false;
            c.detail = "point " + std::to_string(row.snr_db) + " dB failed: " + row.error;
            return c;
        }
        const double band = 3.0 * std::sqrt(row.se_lb * row.se_lb + row.se_mc * row.se_mc);
        if (row.r_sec_lb_mc > row.r_sec_mc + band) c.pass = false;
        if (row.r_sec_mc > 0.0)
            max_rel_gap = std::max(max_rel_gap,
                                   (row.r_sec_mc - row.r_sec_lb_mc) / row.r_sec_mc);
    }
    if (ps.wall_s > 600.0) c.pass = false;
    std::ostringstream os;
    os << "M=128 K=8 sweep, bound <= MC + 3SE at all " << ps.art.rows.size()
       << " points, max relative gap " << max_rel_gap << ", wall " << ps.wall_s << " s";
    c.detail = os.str();
    return c;
}

// --- 2: deterministic-equivalent accuracy against the MC bound ---
Check criterion2() {
    const PaperSweep& ps = paper_sweep();
    Check c;
    c.pass = true;
    double max_err = 0.0, max_tol = 0.0;
    for (const SweepRow& row : ps.art.rows) {
        if (!row.ok) {
            c.pass = false;
            c.detail = "point " + std::to_string(row.snr_db) + " dB failed: " + row.error;
            return c;
        }
        const double err = std::fabs(row.r_sec_lb_de - row.r_sec_lb_mc);
        const double tol = std::max(0.03 * row.r_sec_lb_mc, 3.0 * row.se_lb);
        if (err > tol) c.pass = false;
        max_err = std::max(max_err, err);
        max_tol = std::max(max_tol, tol);
    }
    // zero transmit power: both sides are exactly zero
    const int K = static_cast<int>(ps.set.users.size());
    const int M = ps.set.users[0].cols;
    const PowerAllocation zero = PowerAllocation::zero(K, M, 1.0);
    const double de0 = de_secrecy_lower_bound(zero, ps.set.users, ps.set.eve, 1e-10, 1000).value_bits;
    const double mc0 = secrecy_rates(zero, ps.set.users, ps.set.eve, 100, 1).secrecy_sum_rate_lb;
    if (std::fabs(de0 - mc0) > 1e-10) c.pass = false;
    std::ostringstream os;
    os << "max |DE - MC bound| " << max_err << " (tolerance up to " << max_tol
       << "), zero-power gap " << std::fabs(de0 - mc0);
    c.detail = os.str();
    return c;
}

// --- 3: outer-loop monotone convergence on default scenarios ---
Check criterion3() {
    Check c;
    c.pass = true;
    const std::vector<double> snrs = {-10, -5, 0, 5, 10, 15, 20};
    int max_iters = 0;
    double worst_early = 1.0;
    {
        const CouplingSet set = resolve_coupling(paper_scale_config());
        for (double snr : snrs) {
            const double P = std::pow(10.0, snr / 10.0);
            SolverConfig cfg;
            CccpResult res;
            try {
                res = cccp_solve(set.users, set.eve, P, cfg);
            } catch (const std::exception& e) {
                c.pass = false;
                c.detail = std::string("solver failed at ") + std::to_string(snr) + " dB: " +
                           e.what();
                return c;
            }
            max_iters = std::max(max_iters, res.iterations);
            double prev = -std::numeric_limits<double>::infinity();
            double at5 = 0.0, final_v = 0.0;
            for (const TraceRow& r : res.trace.rows) {
                if (r.loop != "cccp") continue;
                if (r.objective_bits < prev - 1e-9) c.pass = false;
                prev = r.objective_bits;
                if (r.iteration >= 1 && r.iteration <= 5) at5 = std::max(at5, r.objective_bits);
                final_v = r.objective_bits;
            }
            if (snr <= 0.0 && final_v > 0.0) {
                worst_early = std::min(worst_early, at5 / final_v);
                if (at5 < 0.99 * final_v) c.pass = false;
            }
        }
    }
    std::ostringstream os;
    os << "monotone within 1e-9, max iterations " << max_iters
       << " (cap 50), low-SNR 5-iteration fraction >= " << worst_early;
    c.detail = os.str();
    return c;
}

// --- 4: inner-loop convergence: nondecreasing sweeps, big first step ---
Check criterion4() {
    Check c;
    c.pass = true;
    double worst_first = 1.0;
    const CouplingSet set = resolve_coupling(paper_scale_config());
    for (double snr : {0.0, 10.0}) {
        const double P = std::pow(10.0, snr / 10.0);
        SolverConfig cfg;
        const PowerAllocation init = initial_allocation(set.users, set.eve, P, cfg);
        const CccpState st = build_cccp_state(init, set.users, set.eve, cfg);
        const IwfaResult res = iwfa(st, set.users, cfg);
        for (std::size_t t = 1; t < res.sweep_objectives.size(); ++t)
            if (res.sweep_objectives[t] < res.sweep_objectives[t - 1] - 1e-9) c.pass = false;
        const double final_v = res.sweep_objectives.back();
        const double first = res.sweep_objectives.size() > 1 ? res.sweep_objectives[1] : final_v;
        if (final_v > 0.0) {
            worst_first = std::min(worst_first, first / final_v);
            if (first < 0.99 * final_v) c.pass = false;
        }
    }
    std::ostringstream os;
    os << "sweeps nondecreasing within 1e-9, first sweep reaches >= " << worst_first
       << " of the converged value";
    c.detail = os.str();
    return c;
}

// --- 5: per-coordinate KKT certificate at solver exit ---
Check criterion5() {
    Check c;
    c.pass = true;
    double worst_active = 0.0, worst_inactive = 0.0, worst_slack = 0.0;
    for (int inst = 0; inst < 3; ++inst) {
        const CouplingSet set = cluster_set(32, 4, 2, 2, 200 + inst);
        for (double P : {1.0, 10.0}) {
            SolverConfig cfg;
            // run the outer loop with the public primitives so the state fed
            // to the last inner solve stays in hand for the certificate
            PowerAllocation alloc = initial_allocation(set.users, set.eve, P, cfg);
            CccpState st = build_cccp_state(alloc, set.users, set.eve, cfg, 0);
            double prev_obj = st.objective_bits;
            IwfaResult iw;
            CccpState used = st;
            for (int i = 1; i <= cfg.cccp_max_iter; ++i) {
                used = st;
                iw = iwfa(st, set.users, cfg);
                st = build_cccp_state(iw.alloc, set.users, set.eve, cfg, i);
                if (std::fabs(st.objective_bits - prev_obj) <= cfg.xi2) break;
                prev_obj = st.objective_bits;
            }
            double power = 0.0;
            for (int k = 0; k < 4; ++k)
                for (int m = 0; m < 32; ++m) {
                    const double x = iw.alloc.lambdas[k][m];
                    power += x;
                    const double rho =
                        water_fill_residual(x, k, m, used, set.users, iw.alloc, iw.mu).rho;
                    if (x > 0.0) {
                        worst_active = std::max(worst_active, std::fabs(rho));
                        if (std::fabs(rho) > 1e-6) c.pass = false;
                    } else {
                        worst_inactive = std::max(worst_inactive, rho);
                        if (rho > 1e-6) c.pass = false;
                    }
                }
            const double slack = std::fabs(iw.mu * (power - P)) / P;
            worst_slack = std::max(worst_slack, slack);
            if (slack > 1e-6) c.pass = false;
        }
    }
    std::ostringstream os;
    os << "max |rho| active " << worst_active << ", max rho inactive " << worst_inactive
       << ", max relative slack " << worst_slack << " (tolerance 1e-6)";
    c.detail = os.str();
    return c;
}

// --- 6: provably excluded beams end with zero power ---
Check criterion6() {
    Check c;
    c.pass = true;
    const int M = 32, K = 4;
    const double P = 10.0;
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        Rng rng(300 + inst);
        CouplingMatrix eve(1, M);
        for (auto& v : eve.entries) v = 0.2 + 1.6 * rng.uniform();
        std::vector<CouplingMatrix> users;
        for (int k = 0; k < K; ++k) {
            CouplingMatrix om(1, M);
            for (int m = 0; m < M; ++m) {
                om.at(0, m) = 0.2 + 1.6 * rng.uniform();
                // forced overlap: on every fourth beam the eavesdropper wins
                if ((m + k) % 4 == 0) om.at(0, m) = 0.5 * eve.at(0, m);
            }
            users.push_back(std::move(om));
        }
        const ExclusionReport excl = theorem2_excluded_beams(users, eve);
        if (excl.excluded.empty()) {
            c.pass = false;
            c.detail = "instance " + std::to_string(inst) + " has no excluded beams";
            return c;
        }
        SolverConfig cfg;
        PowerAllocation alloc;
        try {
            alloc = cccp_solve(users, eve, P, cfg).alloc;
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = "instance " + std::to_string(inst) + " failed: " + e.what();
            return c;
        }
        double excluded_power = 0.0;
        for (const auto& [k, m] : excl.excluded) excluded_power += alloc.lambdas[k][m];
        worst = std::max(worst, excluded_power / P);
        if (excluded_power > 1e-6 * P) c.pass = false;
    }
    std::ostringstream os;
    os << "20 single-antenna instances, max excluded-beam power fraction " << worst
       << " (tolerance 1e-6)";
    c.detail = os.str();
    return c;
}

// --- 7: independent projected-gradient oracle on small instances ---
Check criterion7() {
    Check c;
    c.pass = true;
    struct Shape {
        int K, M, Nr, Ne;
    };
    const Shape shapes[] = {{1, 2, 1, 1}, {1, 4, 1, 1}, {2, 2, 1, 1}, {2, 4, 2, 2},
                            {1, 8, 2, 2}, {2, 3, 1, 1}, {1, 6, 1, 2}, {2, 2, 2, 1},
                            {1, 5, 1, 1}, {1, 7, 2, 1}};
    const double P = 4.0;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const Shape sh = shapes[inst % 10];
        const CouplingSet set = cluster_set(sh.M, sh.K, sh.Nr, sh.Ne, 400 + inst);
        SolverConfig cfg;
        CccpResult sol;
        try {
            sol = cccp_solve(set.users, set.eve, P, cfg);
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = "instance " + std::to_string(inst) + " failed: " + e.what();
            return c;
        }
        // both sides maximize the same concave surrogate (the one frozen at
        // the solver's final allocation)
        const CccpState fin = build_cccp_state(sol.alloc, set.users, set.eve, cfg);
        const double solver_obj = iwfa(fin, set.users, cfg).objective_bits;
        auto unpack = [&](const std::vector<double>& v) {
            PowerAllocation a = PowerAllocation::zero(sh.K, sh.M, P);
            for (int k = 0; k < sh.K; ++k)
                for (int m = 0; m < sh.M; ++m) a.lambdas[k][m] = v[k * sh.M + m];
            return a;
        };
        ProjectedGradientConfig pg;
        pg.iterations = 30000;
        const std::vector<double> best = oracle_projected_gradient(
            [&](const std::vector<double>& v) {
                return surrogate_objective(unpack(v), fin, set.users);
            },
            sh.K * sh.M, P, pg);
        const double oracle_obj = surrogate_objective(unpack(best), fin, set.users);
        const double rel =
            std::fabs(solver_obj - oracle_obj) / std::max(std::fabs(oracle_obj), 1e-9);
        worst = std::max(worst, rel);
        if (rel > 1e-3) c.pass = false;
    }
    const double wall = now_minus(t0);
    if (wall > 120.0) c.pass = false;
    std::ostringstream os;
    os << "20 instances, max relative gap to the oracle " << worst << " (tolerance 1e-3), wall "
       << wall << " s";
    c.detail = os.str();
    return c;
}

// --- 8: single-user inner solve equals the analytic water filling ---
Check criterion8() {
    Check c;
    c.pass = true;
    double worst = 0.0;
    for (int inst = 0; inst < 10; ++inst) {
        Rng rng(500 + inst);
        CouplingMatrix om(1, 6), eve(1, 6);
        for (auto& v : om.entries) v = 0.2 + 1.8 * rng.uniform();
        for (auto& v : eve.entries) v = 0.1 + 0.9 * rng.uniform();
        const std::vector<CouplingMatrix> users = {om};
        const double P = 5.0;
        SolverConfig cfg;
        // precision-matched tolerances: the comparison target is 1e-8
        cfg.xi3 = 1e-13;
        cfg.xi5 = 1e-12;
        cfg.xi4_rel = 1e-12;
        cfg.kkt_tol = 1e-10;
        const PowerAllocation init = initial_allocation(users, eve, P, cfg);
        const CccpState st = build_cccp_state(init, users, eve, cfg);
        const IwfaResult res = iwfa(st, users, cfg);

        // analytic: lambda_m = [1/(delta_m + mu) - 1/gamma_m]^+ with mu from
        // the power budget
        const auto alloc_at = [&](double mu) {
            std::vector<double> lam(6);
            for (int m = 0; m < 6; ++m) {
                const double d = st.delta[0][m] + mu;
                lam[m] = d > 0.0 ? std::max(0.0, 1.0 / d - 1.0 / st.de_states[0].gamma[m])
                                 : std::numeric_limits<double>::infinity();
            }
            return lam;
        };
        const auto total = [](const std::vector<double>& lam) {
            double s = 0.0;
            for (double v : lam) s += v;
            return s;
        };
        std::vector<double> closed = alloc_at(0.0);
        if (total(closed) > P) {
            double lo = 0.0, hi = 1.0;
            while (total(alloc_at(hi)) > P) hi *= 2.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (total(alloc_at(mid)) > P) lo = mid; else hi = mid;
            }
            closed = alloc_at(hi);
        }
        for (int m = 0; m < 6; ++m)
            worst = std::max(worst, std::fabs(res.alloc.lambdas[0][m] - closed[m]));
        if (worst > 1e-8) c.pass = false;
    }
    std::ostringstream os;
    os << "10 single-user instances, max deviation from the closed form " << worst
       << " (tolerance 1e-8)";
    c.detail = os.str();
    return c;
}

// --- 9: statistical-mean inequality and rotation-trial suites ---
Check criterion9() {
    Check c;
    c.pass = true;
    const Lemma1Result deg = lemma1_check([](Rng&) { return 2.5; }, 1.0, 1.0, 2000, 600);
    if (!deg.holds || std::fabs(deg.lhs - deg.rhs) > 1e-12) c.pass = false;
    const Lemma1Result expo =
        lemma1_check([](Rng& r) { return r.exponential(); }, 1.0, 1.0, 1000000, 601);
    if (!expo.holds) c.pass = false;
    const Lemma1Result bern = lemma1_check(
        [](Rng& r) { return r.uniform() < 0.5 ? 0.0 : 2.0; }, 1.0, 1.0, 400000, 602);
    if (!bern.holds) c.pass = false;

    Rng prof(603);
    std::vector<CouplingMatrix> omegas;
    for (int k = 0; k < 2; ++k) {
        CouplingMatrix om(2, 8);
        for (auto& v : om.entries) v = 0.2 + 1.8 * prof.uniform();
        omegas.push_back(std::move(om));
    }
    CouplingMatrix eve(2, 8);
    for (auto& v : eve.entries) v = 0.1 + 0.4 * prof.uniform();
    PowerAllocation alloc = PowerAllocation::zero(2, 8, 8.0);
    for (auto& lam : alloc.lambdas)
        for (auto& v : lam) v = 0.5;
    const RotationTrialReport rot = theorem1_rotation_test(omegas, eve, alloc, 20, 300, 604);
    if (rot.win_fraction() < 0.95) c.pass = false;

    std::ostringstream os;
    os << "inequality holds on 3 families (degenerate gap " << std::fabs(deg.lhs - deg.rhs)
       << "), rotation win fraction " << rot.win_fraction() << " (threshold 0.95)";
    c.detail = os.str();
    return c;
}

// --- 10: per-iteration cost scales roughly linearly in K*M ---
Check criterion10() {
    ScenarioConfig cfg;
    cfg.dims.N_r = 2;
    cfg.dims.N_e = 2;
    cfg.coupling.profile.kind = ProfileKind::ExponentialCluster;
    cfg.coupling.profile.floor = 0.05;
    cfg.snr_db = {0.0};
    cfg.seed = 700;
    for (int K : {2, 4, 8})
        for (int M : {32, 64, 128, 256}) cfg.bench_grid.emplace_back(K, M);
    Check c;
    BenchArtifact art;
    try {
        art = bench_complexity(cfg);
    } catch (const std::exception& e) {
        c.detail = std::string("bench failed: ") + e.what();
        return c;
    }
    c.pass = art.loglog_slope >= 0.8 && art.loglog_slope <= 1.3;
    std::ostringstream os;
    os << "log-log slope of seconds/iteration vs K*M is " << art.loglog_slope
       << " (required in [0.8, 1.3]) over " << art.rows.size() << " grid cells";
    c.detail = os.str();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    const std::function<Check()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, criterion8,
                                               criterion9, criterion10};
    int lo = 1, hi = 10;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > 10) {
            std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
            return 2;
        }
        lo = hi = n;
    }
    bool all = true;
    for (int i = lo; i <= hi; ++i) {
        Check c;
        try {
            c = criteria[i - 1]();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("unexpected error: ") + e.what();
        }
        std::printf("%s criterion %d: %s\n", c.pass ? "PASS" : "FAIL", i, c.detail.c_str());
        std::fflush(stdout);
        all = all && c.pass;
    }
    return all ? 0 : 1;
}
