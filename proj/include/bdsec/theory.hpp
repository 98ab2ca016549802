#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "bdsec/optimizer.hpp"

namespace bdsec {

// Beams provably carrying zero optimal power for single-antenna users.
struct ExclusionReport {
    std::vector<std::pair<int, int>> excluded;  // (user k, beam m)
    std::vector<double> margins;                // gain_k[m] - gain_eve[m] per pair
};

// Compares per-beam gains; a pair is excluded when the eavesdropper's gain
// meets or exceeds the user's. Only valid for N_r = 1.
ExclusionReport theorem2_excluded_beams(const std::vector<CouplingMatrix>& omegas,
                                        const CouplingMatrix& omega_eve);

struct Lemma1Result {
    double lhs = 0.0;  // E[x / (a + b x)]
    double rhs = 0.0;  // E[xbar / (a + b x)]
    double diff_se = 0.0;
    bool holds = false;
};

// Monte-Carlo check of E[x/(a+bx)] <= E[xbar/(a+bx)] for a nonnegative
// random variable sampled by `sampler`.
Lemma1Result lemma1_check(const std::function<double(Rng&)>& sampler, double a, double b,
                          int samples, std::uint64_t seed);

struct RotationTrialReport {
    int trials = 0;
    int diagonal_wins = 0;  // diagonal >= rotated - 3 SE
    std::vector<double> diagonal_values;
    std::vector<double> rotated_values;
    double win_fraction() const {
        return trials ? static_cast<double>(diagonal_wins) / trials : 1.0;
    }
};

// Statistical rendering of the beam-domain optimality claim: random unitary
// rotations of the input covariance eigenbasis should not beat the diagonal
// configuration beyond MC noise.
RotationTrialReport theorem1_rotation_test(const std::vector<CouplingMatrix>& omegas,
                                           const CouplingMatrix& omega_eve,
                                           const PowerAllocation& alloc, int trials,
                                           int mc_samples, std::uint64_t seed);

struct ProjectedGradientConfig {
    int iterations = 100000;
    double step0 = 0.0;  // 0 => P / 10
    double fd_step = 1e-6;
};

// Independent maximization oracle over {x >= 0, sum x <= P}: projected
// ascent with central finite-difference gradients.
std::vector<double> oracle_projected_gradient(
    const std::function<double(const std::vector<double>&)>& objective, int dim, double P,
    const ProjectedGradientConfig& config, const std::vector<double>& x0 = {});

// Euclidean projection onto {x >= 0, sum x <= P}.
std::vector<double> project_capped_simplex(std::vector<double> x, double P);

}  // namespace bdsec
