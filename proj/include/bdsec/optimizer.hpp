#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdsec/de.hpp"

namespace bdsec {

struct SolverConfig {
    double xi1 = 1e-10;     // DE fixed-point tolerance
    double xi2 = 1e-4;      // CCCP objective change, bits
    double xi3 = 1e-9;      // Newton step tolerance
    double xi4_rel = 1e-6;  // power residual tolerance, relative to P
    double xi5 = 1e-6;      // IWFA objective change, bits
    double kkt_tol = 1e-6;  // stationarity residual at exit
    int de_max_iter = 10000;
    int cccp_max_iter = 50;
    int iwfa_max_sweeps = 200;
    int newton_max_iter = 100;
    int mu_max_iter = 400;
    int strongest_beams = 16;  // B: beams per user in the initial allocation
    // Return the best iterate instead of throwing when the outer-iteration cap
    // is reached; used by trace emitters that deliberately cap iterations.
    bool allow_cap_exit = false;
    enum class Init { StrongestBeams, Uniform, Custom } init = Init::StrongestBeams;
    PowerAllocation custom_init;  // used when init == Custom

    void validate() const {
        if (!(xi1 > 0 && xi2 > 0 && xi3 > 0 && xi4_rel > 0 && xi5 > 0 && kkt_tol > 0))
            throw std::invalid_argument("SolverConfig: tolerances must be > 0");
        if (strongest_beams < 1) throw std::invalid_argument("SolverConfig: B must be >= 1");
    }
};

// Frozen per-CCCP-iteration data: the DE state at the current allocation and
// the linearized concave part.
struct CccpState {
    PowerAllocation alloc;                               // current Lambda^(i)
    std::vector<std::vector<double>> delta;              // K x M, nats
    std::vector<DeterministicEquivalentState> de_states; // per user
    std::vector<DiagonalCovariance> kbars;               // per user, at alloc
    double objective_bits = 0.0;           // DE secrecy lower bound (clamped)
    // Sum of per-user margins without the clamp at zero: the quantity the
    // outer loop actually ascends (the clamped sum may dip while a hopeless
    // user's margin sinks further below zero).
    double objective_unclamped_bits = 0.0;
    int iteration = 0;
};

struct TraceRow {
    std::string loop;  // "cccp" | "iwfa" | "de-fixed-point"
    int iteration = 0;
    double objective_bits = 0.0;
    double kkt_residual = 0.0;
    double power_used = 0.0;
    double mu = 0.0;
    double wall_s = 0.0;  // seconds since the owning loop started
};

struct ConvergenceTrace {
    std::vector<TraceRow> rows;
    void add(TraceRow r) { rows.push_back(std::move(r)); }
};

struct IwfaResult {
    PowerAllocation alloc;
    double mu = 0.0;
    double objective_bits = 0.0;        // surrogate value at exit
    double kkt_stationarity = 0.0;      // max per-coordinate residual
    double comp_slack = 0.0;            // |mu * (sum - P)|
    int sweeps = 0;
    int fast_path_accepts = 0;          // Remark-5 full steps taken
    bool mu_rule_sufficed = false;      // increment rule alone hit xi4
    std::vector<double> sweep_objectives;
};

struct CccpResult {
    PowerAllocation alloc;
    double objective_bits = 0.0;
    int iterations = 0;  // L
    ConvergenceTrace trace;
    IwfaResult last_iwfa;
};

// Gradient of the concave part sum_l R_{l,2} at alloc_prev, per user (nats).
std::vector<std::vector<double>> delta_matrices(const PowerAllocation& alloc_prev,
                                                const std::vector<CouplingMatrix>& omegas,
                                                const CouplingMatrix& omega_eve);

// Stationarity residual of the surrogate problem at coordinate (k,m) and its
// derivative in x. Strictly decreasing in x.
struct ResidualPair {
    double rho = 0.0;
    double rho_prime = 0.0;
};

// Safeguarded Newton on a strictly decreasing function: Newton steps with a
// bracketed-bisection fallback on [lo, hi]. Requires f(lo) >= 0 >= f(hi).
double newton_root(const std::function<ResidualPair(double)>& f, double x0, double lo, double hi,
                   double xi3, int max_iter);

// Builds the frozen CCCP state (DE fixed points, Delta, Kbar) at alloc.
CccpState build_cccp_state(const PowerAllocation& alloc, const std::vector<CouplingMatrix>& omegas,
                           const CouplingMatrix& omega_eve, const SolverConfig& config,
                           int iteration = 0);

// Surrogate objective of the inner convex program at allocation x (bits).
double surrogate_objective(const PowerAllocation& x, const CccpState& cccp,
                           const std::vector<CouplingMatrix>& omegas);

// Per-coordinate residual of the surrogate problem, with all other
// coordinates frozen at x.
ResidualPair water_fill_residual(double x_km, int k, int m, const CccpState& cccp,
                                 const std::vector<CouplingMatrix>& omegas,
                                 const PowerAllocation& x, double mu);

// Inner solver for one CCCP iteration: Jacobi water-filling sweeps with the
// multiplier search and the averaged fallback update.
IwfaResult iwfa(const CccpState& cccp, const std::vector<CouplingMatrix>& omegas,
                const SolverConfig& config, ConvergenceTrace* trace = nullptr);

// Initial allocation: equal power over the min(B, M) strongest beams per user
// (ranked by user-minus-eavesdropper beam gain, ties by beam index).
PowerAllocation initial_allocation(const std::vector<CouplingMatrix>& omegas,
                                   const CouplingMatrix& omega_eve, double P,
                                   const SolverConfig& config);

// Full outer loop.
CccpResult cccp_solve(const std::vector<CouplingMatrix>& omegas, const CouplingMatrix& omega_eve,
                      double P, const SolverConfig& config);

}  // namespace bdsec
