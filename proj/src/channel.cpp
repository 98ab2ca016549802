#include "bdsec/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bdsec {

void SystemDims::validate() const {
    if (M < 1 || K < 1 || N_r < 1 || N_e < 1)
        throw std::invalid_argument("SystemDims: M, K, N_r, N_e must be >= 1");
    if (!(P >= 0.0) || !std::isfinite(P))
        throw std::invalid_argument("SystemDims: P must be finite and >= 0");
}

void CouplingMatrix::validate() const {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("CouplingMatrix: empty dimensions");
    if (entries.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("CouplingMatrix: entry count mismatch");
    for (double v : entries)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("CouplingMatrix: entries must be finite and >= 0");
}

double CouplingMatrix::total() const {
    double s = 0.0;
    for (double v : entries) s += v;
    return s;
}

Eigen::MatrixXcd dft_basis(int M) {
    if (M < 1) throw std::invalid_argument("dft_basis: M must be >= 1");
    Eigen::MatrixXcd V(M, M);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (int a = 0; a < M; ++a) {
        for (int b = 0; b < M; ++b) {
            // reduce a*b mod M before forming the angle to keep phases exact
            const long long ab = (static_cast<long long>(a) * b) % M;
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(ab) / M;
            V(a, b) = scale * std::complex<double>(std::cos(angle), std::sin(angle));
        }
    }
    return V;
}

std::vector<double> beam_gains(const CouplingMatrix& omega) {
    omega.validate();
    std::vector<double> g(omega.cols, 0.0);
    for (int n = 0; n < omega.rows; ++n)
        for (int m = 0; m < omega.cols; ++m) g[m] += omega.at(n, m);
    return g;
}

Eigen::MatrixXcd sample_beam_channel(const CouplingMatrix& omega, Rng& rng) {
    Eigen::MatrixXcd G(omega.rows, omega.cols);
    for (int n = 0; n < omega.rows; ++n)
        for (int m = 0; m < omega.cols; ++m) G(n, m) = rng.cgauss(omega.at(n, m));
    return G;
}

ProfileKind profile_kind_from_string(const std::string& s) {
    if (s == "uniform") return ProfileKind::Uniform;
    if (s == "exponential-cluster") return ProfileKind::ExponentialCluster;
    if (s == "sparse-beams") return ProfileKind::SparseBeams;
    throw std::invalid_argument("unknown coupling profile kind: " + s);
}

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::Uniform: return "uniform";
        case ProfileKind::ExponentialCluster: return "exponential-cluster";
        case ProfileKind::SparseBeams: return "sparse-beams";
    }
    return "?";
}

namespace {

void normalize_energy(CouplingMatrix& om) {
    const double target = static_cast<double>(om.rows) * om.cols;
    const double tot = om.total();
    if (tot <= 0.0) return;  // all-zero profile stays zero
    const double s = target / tot;
    for (double& v : om.entries) v *= s;
}

// circular beam distance
double beam_dist(double a, double b, int M) {
    double d = std::fabs(a - b);
    return std::min(d, M - d);
}

// center01 in [0, 1) fixes the cluster position; negative draws it uniformly
CouplingMatrix make_one(int rows, int M, const CouplingProfile& profile, Rng& rng,
                        double center01 = -1.0) {
    CouplingMatrix om(rows, M, 0.0);
    switch (profile.kind) {
        case ProfileKind::Uniform: {
            for (double& v : om.entries) v = 1.0;
            break;
        }
        case ProfileKind::ExponentialCluster: {
            const double width =
                profile.cluster_width > 0.0 ? profile.cluster_width : std::max(1.0, M / 8.0);
            const double center = (center01 >= 0.0 ? center01 : rng.uniform()) * M;
            for (int n = 0; n < rows; ++n) {
                // receive antennas see slightly shifted copies of the cluster
                const double cn = center + n * 0.5;
                for (int m = 0; m < M; ++m)
                    om.at(n, m) = std::exp(-beam_dist(m, cn, M) / width) + profile.floor;
            }
            break;
        }
        case ProfileKind::SparseBeams: {
            std::vector<int> support = profile.support;
            if (support.empty()) {
                int s = profile.support_size > 0 ? profile.support_size : std::max(1, M / 4);
                if (s > M) throw std::invalid_argument("sparse-beams: support size > M");
                std::vector<int> idx(M);
                for (int m = 0; m < M; ++m) idx[m] = m;
                // Fisher-Yates prefix shuffle
                for (int i = 0; i < s; ++i) {
                    int j = i + static_cast<int>(rng.next_u64() % (M - i));
                    std::swap(idx[i], idx[j]);
                }
                support.assign(idx.begin(), idx.begin() + s);
            }
            for (int m : support)
                if (m < 0 || m >= M)
                    throw std::invalid_argument("sparse-beams: support index out of range");
            for (int n = 0; n < rows; ++n)
                for (int m : support) om.at(n, m) = 0.5 + rng.uniform();
            break;
        }
    }
    normalize_energy(om);
    return om;
}

}  // namespace

CouplingSet synth_coupling(const SystemDims& dims, const CouplingProfile& profile) {
    dims.validate();
    if (profile.floor < 0.0) throw std::invalid_argument("coupling profile: floor must be >= 0");
    CouplingSet set;
    set.users.reserve(dims.K);
    for (int k = 0; k < dims.K; ++k) {
        Rng rng = Rng::substream(profile.seed, 0xC0FFEEULL, static_cast<std::uint64_t>(k));
        // users get stratified (jittered, evenly spaced) cluster positions so
        // a multi-user draw resembles spatially separated terminals; other
        // profile kinds ignore the hint
        const double jitter = rng.uniform();
        const double center01 = (k + 0.25 + 0.5 * jitter) / dims.K;
        set.users.push_back(make_one(dims.N_r, dims.M, profile, rng, center01));
    }
    Rng rng_eve = Rng::substream(profile.seed, 0xC0FFEEULL, 0xEEEEULL);
    set.eve = make_one(dims.N_e, dims.M, profile, rng_eve);
    return set;
}

}  // namespace bdsec
