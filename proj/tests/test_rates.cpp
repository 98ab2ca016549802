#include <doctest.h>

#include <cmath>
#include <random>

#include "bdsec/rates.hpp"

using namespace bdsec;

namespace {

CouplingMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    CouplingMatrix om(static_cast<int>(rows.size()),
                      static_cast<int>(rows.begin()->size()));
    int n = 0;
    for (const auto& r : rows) {
        int m = 0;
        for (double v : r) om.at(n, m++) = v;
        ++n;
    }
    return om;
}

}  // namespace

TEST_CASE("interference covariance, single user is the identity") {
    PowerAllocation alloc = PowerAllocation::zero(1, 2, 5.0);
    alloc.lambdas[0] = {2.0, 3.0};
    const auto cov = interference_cov(alloc, 0, from_rows({{1.0, 2.0}}));
    CHECK(cov.diag == std::vector<double>{1.0});
}

TEST_CASE("interference covariance, two users") {
    PowerAllocation alloc = PowerAllocation::zero(2, 2, 5.0);
    alloc.lambdas[1] = {1.0, 1.0};
    const auto cov = interference_cov(alloc, 0, from_rows({{1.0, 2.0}}));
    CHECK(cov.diag == std::vector<double>{4.0});
    CHECK_THROWS_AS(interference_cov(alloc, 5, from_rows({{1.0, 2.0}})), std::out_of_range);
}

TEST_CASE("interference covariance matches the sampled expectation") {
    const CouplingMatrix om = from_rows({{0.3, 1.7, 0.9}, {2.0, 0.1, 0.5}});
    PowerAllocation alloc = PowerAllocation::zero(2, 3, 10.0);
    alloc.lambdas[1] = {0.5, 2.0, 1.0};
    const auto cov = interference_cov(alloc, 0, om);

    const int n = 100000;
    std::vector<double> mean(2, 0.0), m2(2, 0.0);
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::substream(17, 0, i);
        const Eigen::MatrixXcd g = sample_beam_channel(om, rng);
        for (int r = 0; r < 2; ++r) {
            double x = 1.0;
            for (int m = 0; m < 3; ++m) x += alloc.lambdas[1][m] * std::norm(g(r, m));
            const double d = x - mean[r];
            mean[r] += d / (i + 1);
            m2[r] += d * (x - mean[r]);
        }
    }
    for (int r = 0; r < 2; ++r) {
        const double se = std::sqrt(m2[r] / (static_cast<double>(n) * (n - 1)));
        CHECK(std::fabs(mean[r] - cov.diag[r]) <= 4.0 * se);
    }
}

TEST_CASE("eavesdropper covariance basics") {
    CHECK(eve_cov({0.0, 0.0}, from_rows({{2.0, 0.0}})).diag == std::vector<double>{1.0});
    CHECK(eve_cov({0.5, 7.0}, from_rows({{2.0, 0.0}})).diag == std::vector<double>{2.0});
}

TEST_CASE("eavesdropper rate bound basics") {
    CHECK(eve_rate_upper_bound({0.0, 0.0}, from_rows({{2.0, 0.0}})) == 0.0);
    CHECK(eve_rate_upper_bound({0.5, 3.0}, from_rows({{2.0, 0.0}})) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bound dominates the MC eavesdropper rate") {
    const CouplingMatrix eve = from_rows({{1.2, 0.4, 2.0}, {0.3, 1.1, 0.6}});
    const std::vector<double> lam = {1.0, 0.5, 2.0};
    const McEstimate mc = eve_rate_mc(lam, eve, 20000, 29);
    CHECK(mc.value <= eve_rate_upper_bound(lam, eve) + 3.0 * mc.std_error);
}

TEST_CASE("user rate at zero power is exactly zero") {
    PowerAllocation alloc = PowerAllocation::zero(1, 2, 1.0);
    const McEstimate mc = user_rate_mc(alloc, 0, from_rows({{1.0, 1.0}}), 50, 3);
    CHECK(mc.value == 0.0);
    CHECK(mc.std_error == 0.0);
}

TEST_CASE("scalar user rate matches an independent exponential oracle") {
    // M = N_r = K = 1, unit coupling: rate is E[log2(1 + p X)], X ~ Exp(1).
    const double p = 10.0;
    PowerAllocation alloc = PowerAllocation::zero(1, 1, p);
    alloc.lambdas[0] = {p};
    const McEstimate mc = user_rate_mc(alloc, 0, from_rows({{1.0}}), 50000, 101);

    // brute-force oracle with an unrelated generator
    std::mt19937 gen(12345);
    std::exponential_distribution<double> exp_dist(1.0);
    double mean = 0.0, m2 = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double x = std::log2(1.0 + p * exp_dist(gen));
        const double d = x - mean;
        mean += d / (i + 1);
        m2 += d * (x - mean);
    }
    const double oracle_se = std::sqrt(m2 / (static_cast<double>(n) * (n - 1)));
    const double band = 4.0 * std::sqrt(mc.std_error * mc.std_error + oracle_se * oracle_se);
    CHECK(std::fabs(mc.value - mean) <= band);
}

TEST_CASE("scalar eavesdropper rate matches the same oracle family") {
    const double p = 3.0;
    const McEstimate mc = eve_rate_mc({p}, from_rows({{1.0}}), 50000, 55);
    std::mt19937 gen(777);
    std::exponential_distribution<double> exp_dist(1.0);
    double mean = 0.0;
    const int n = 500000;
    for (int i = 0; i < n; ++i) mean += std::log2(1.0 + p * exp_dist(gen));
    mean /= n;
    CHECK(std::fabs(mc.value - mean) <= 4.0 * mc.std_error + 0.01);
}

TEST_CASE("standard error scales like one over sqrt(samples)") {
    PowerAllocation alloc = PowerAllocation::zero(1, 2, 4.0);
    alloc.lambdas[0] = {2.0, 2.0};
    const CouplingMatrix om = from_rows({{1.0, 0.5}, {0.5, 1.0}});
    const McEstimate a = user_rate_mc(alloc, 0, om, 4000, 9);
    const McEstimate b = user_rate_mc(alloc, 0, om, 16000, 9);
    const double ratio = a.std_error / b.std_error;  // expect ~2
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
}

TEST_CASE("all-zero allocation reports zero rates") {
    PowerAllocation alloc = PowerAllocation::zero(2, 3, 1.0);
    const std::vector<CouplingMatrix> omegas = {from_rows({{1.0, 1.0, 1.0}}),
                                                from_rows({{1.0, 1.0, 1.0}})};
    const RateReport rep = secrecy_rates(alloc, omegas, from_rows({{1.0, 1.0, 1.0}}), 100, 1);
    CHECK(rep.secrecy_sum_rate_lb == 0.0);
    CHECK(rep.secrecy_sum_rate_mc == 0.0);
    for (double v : rep.per_user_rate) CHECK(v == 0.0);
}

TEST_CASE("zero eavesdropper coupling removes the secrecy penalty") {
    PowerAllocation alloc = PowerAllocation::zero(1, 2, 1.0);
    alloc.lambdas[0] = {0.5, 0.5};
    const std::vector<CouplingMatrix> omegas = {from_rows({{1.0, 1.0}})};
    const RateReport rep = secrecy_rates(alloc, omegas, from_rows({{0.0, 0.0}}), 2000, 5);
    CHECK(rep.per_user_eve_bound[0] == 0.0);
    CHECK(rep.per_user_eve_mc[0] == 0.0);
    CHECK(rep.secrecy_sum_rate_lb == doctest::Approx(rep.per_user_rate[0]).epsilon(1e-14));
}

TEST_CASE("lower bound never exceeds the MC secrecy rate beyond noise") {
    Rng prof(31);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<CouplingMatrix> omegas;
        CouplingMatrix eve(2, 4);
        for (auto& v : eve.entries) v = prof.uniform();
        PowerAllocation alloc = PowerAllocation::zero(2, 4, 8.0);
        for (int k = 0; k < 2; ++k) {
            CouplingMatrix om(2, 4);
            for (auto& v : om.entries) v = 2.0 * prof.uniform();
            omegas.push_back(std::move(om));
            for (auto& v : alloc.lambdas[k]) v = 1.0;
        }
        const RateReport rep = secrecy_rates(alloc, omegas, eve, 4000, 1000 + trial);
        const double band =
            3.0 * std::sqrt(rep.secrecy_lb_se * rep.secrecy_lb_se +
                            rep.secrecy_mc_se * rep.secrecy_mc_se);
        CHECK(rep.secrecy_sum_rate_lb <= rep.secrecy_sum_rate_mc + band);
    }
}

TEST_CASE("stronger eavesdropper coupling never raises the bound") {
    PowerAllocation alloc = PowerAllocation::zero(2, 3, 6.0);
    alloc.lambdas[0] = {1.0, 1.0, 1.0};
    alloc.lambdas[1] = {1.0, 1.0, 1.0};
    const std::vector<CouplingMatrix> omegas = {from_rows({{1.5, 0.2, 0.8}}),
                                                from_rows({{0.4, 1.9, 0.3}})};
    const CouplingMatrix eve_lo = from_rows({{0.1, 0.2, 0.1}});
    CouplingMatrix eve_hi = eve_lo;
    for (auto& v : eve_hi.entries) v *= 3.0;
    const RateReport lo = secrecy_rates(alloc, omegas, eve_lo, 500, 4);
    const RateReport hi = secrecy_rates(alloc, omegas, eve_hi, 500, 4);
    CHECK(hi.secrecy_sum_rate_lb <= lo.secrecy_sum_rate_lb + 1e-12);
}

TEST_CASE("reports are recomputable and clamped") {
    Rng prof(8);
    std::vector<CouplingMatrix> omegas;
    CouplingMatrix eve(1, 3);
    for (auto& v : eve.entries) v = 2.0 * prof.uniform();
    PowerAllocation alloc = PowerAllocation::zero(2, 3, 3.0);
    for (int k = 0; k < 2; ++k) {
        CouplingMatrix om(1, 3);
        for (auto& v : om.entries) v = prof.uniform();
        omegas.push_back(std::move(om));
        alloc.lambdas[k] = {0.5, 0.5, 0.5};
    }
    const RateReport rep = secrecy_rates(alloc, omegas, eve, 300, 77);
    double lb = 0.0;
    for (int k = 0; k < 2; ++k)
        lb += std::max(0.0, rep.per_user_rate[k] - rep.per_user_eve_bound[k]);
    CHECK(rep.secrecy_sum_rate_lb == doctest::Approx(lb).epsilon(1e-14));
    CHECK(rep.secrecy_sum_rate_lb >= 0.0);
}

TEST_CASE("same seed gives bit-identical reports") {
    PowerAllocation alloc = PowerAllocation::zero(1, 2, 2.0);
    alloc.lambdas[0] = {1.0, 1.0};
    const std::vector<CouplingMatrix> omegas = {from_rows({{1.0, 0.5}})};
    const CouplingMatrix eve = from_rows({{0.5, 0.5}});
    const RateReport a = secrecy_rates(alloc, omegas, eve, 500, 42);
    const RateReport b = secrecy_rates(alloc, omegas, eve, 500, 42);
    CHECK(a.per_user_rate == b.per_user_rate);
    CHECK(a.secrecy_sum_rate_mc == b.secrecy_sum_rate_mc);
}

TEST_CASE("allocation validation enforces the budget") {
    PowerAllocation alloc = PowerAllocation::zero(1, 2, 1.0);
    alloc.lambdas[0] = {0.7, 0.7};
    CHECK_THROWS_AS(alloc.validate(), std::invalid_argument);
    alloc.lambdas[0] = {0.5, -0.1};
    CHECK_THROWS_AS(alloc.validate(), std::invalid_argument);
}
