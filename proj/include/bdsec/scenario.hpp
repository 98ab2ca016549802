#pragma once

#include <string>
#include <vector>

#include "bdsec/io.hpp"
#include "bdsec/theory.hpp"

namespace bdsec {

// One SNR point of a sweep. `ok == false` carries a diagnostic and leaves the
// numeric fields at 0; the run continues past failed points.
struct SweepRow {
    double snr_db = 0.0;
    double P = 0.0;
    bool ok = false;
    std::string error;
    double r_sec_mc = 0.0;
    double r_sec_lb_mc = 0.0;
    double r_sec_lb_de = 0.0;
    double c_eve_ub_sum = 0.0;
    double c_eve_mc_sum = 0.0;
    double se_mc = 0.0;
    double se_lb = 0.0;
    int cccp_iterations = 0;
    double kkt_residual = 0.0;
    double power_used = 0.0;
};

struct SweepArtifact {
    std::vector<SweepRow> rows;
    std::string csv;
    json sidecar;  // config hash + seed + worker count
};

SweepArtifact run_sweep(const ScenarioConfig& cfg, const CouplingSet& coupling);

struct ConvergencePoint {
    double snr_db = 0.0;
    ConvergenceTrace trace;          // cccp + iwfa rows, globally renumbered per loop
    std::vector<std::pair<int, double>> de_trace;  // (iteration, residual)
    CccpResult result;
    bool ok = false;
    std::string error;
};

struct ConvergenceArtifact {
    std::vector<ConvergencePoint> points;
    std::string csv;
    json sidecar;
};

ConvergenceArtifact run_convergence(const ScenarioConfig& cfg, const CouplingSet& coupling);

struct VerifySuite {
    std::string name;
    bool pass = false;
    json details;
};

struct VerifyReport {
    bool all_pass = false;
    std::vector<VerifySuite> suites;
    json to_json() const;
};

// Runs the property suites (statistical inequality, rotation trials, beam
// exclusion, oracle equivalence) on small instances derived from cfg.seed.
// `inject_delta_sign_fault` corrupts the linearization gradient sign inside
// the exclusion suite; used to prove the suite can fail.
VerifyReport run_verify(const ScenarioConfig& cfg, bool inject_delta_sign_fault = false);

struct BenchRow {
    int K = 0;
    int M = 0;
    int iterations = 0;       // outer-loop count L
    double seconds_per_iteration = 0.0;
    double wall_s = 0.0;
};

struct BenchArtifact {
    std::vector<BenchRow> rows;
    std::string csv;
    double loglog_slope = 0.0;  // fit of log(sec/iter) vs log(K*M)
    json sidecar;
};

BenchArtifact bench_complexity(const ScenarioConfig& cfg);

std::string sweep_csv_header();
std::string convergence_csv_header();
std::string bench_csv_header();

}  // namespace bdsec
