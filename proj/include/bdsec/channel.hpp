#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "bdsec/rng.hpp"

namespace bdsec {

struct SystemDims {
    int M = 1;    // BS antennas / beams
    int K = 1;    // legitimate users
    int N_r = 1;  // antennas per legitimate user
    int N_e = 1;  // eavesdropper antennas
    double P = 0.0;  // total transmit power, linear scale (unit noise)

    void validate() const;
};

// Nonnegative per-terminal beam-gain matrix: variance profile of the
// beam-domain channel entries. Row-major storage.
struct CouplingMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> entries;  // rows*cols, row-major

    CouplingMatrix() = default;
    CouplingMatrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), entries(static_cast<std::size_t>(r) * c, fill) {}

    double& at(int n, int m) { return entries[static_cast<std::size_t>(n) * cols + m]; }
    double at(int n, int m) const { return entries[static_cast<std::size_t>(n) * cols + m]; }

    void validate() const;
    double total() const;
};

// M x M unitary DFT basis, entry (a,b) = exp(-2*pi*i*a*b/M)/sqrt(M).
Eigen::MatrixXcd dft_basis(int M);

// Column sums of the coupling matrix: the diagonal of the transmit
// correlation matrix in the beam basis.
std::vector<double> beam_gains(const CouplingMatrix& omega);

// One realization of the beam-domain channel: independent CN(0, omega[n][m])
// entries. Deterministic for a given rng state.
Eigen::MatrixXcd sample_beam_channel(const CouplingMatrix& omega, Rng& rng);

enum class ProfileKind { Uniform, ExponentialCluster, SparseBeams };

ProfileKind profile_kind_from_string(const std::string& s);
std::string to_string(ProfileKind k);

struct CouplingProfile {
    ProfileKind kind = ProfileKind::Uniform;
    double cluster_width = 0.0;      // exponential-cluster decay length; 0 => M/8
    double floor = 0.0;              // additive floor before normalization
    int support_size = 0;            // sparse-beams: beams per terminal; 0 => M/4
    std::vector<int> support;        // sparse-beams: explicit support (overrides size)
    std::uint64_t seed = 0;
};

struct CouplingSet {
    std::vector<CouplingMatrix> users;  // K matrices, N_r x M
    CouplingMatrix eve;                 // N_e x M
};

// Synthesizes coupling matrices for all terminals. Per-terminal energy is
// normalized to rows*M (average unit beam gain) so SNR sweeps read as P in dB.
CouplingSet synth_coupling(const SystemDims& dims, const CouplingProfile& profile);

}  // namespace bdsec
