#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "contagion/analysis.hpp"
#include "contagion/stationarity.hpp"
#include "oracles.hpp"

using namespace contagion;

namespace {

ModelParams shot_noise() {
    ModelParams p;
    p.delta1 = 1.5;
    p.rho1 = 2.0;
    p.h1 = MarkDistribution::exponential(2.0);
    return p;
}

EnsembleConfig small(std::size_t paths, double horizon = 20.0) {
    EnsembleConfig c;
    c.n_paths = paths;
    c.horizon = horizon;
    c.burn_in = horizon;
    c.threads = 1;
    return c;
}

double uniform_cdf(double x, const void*) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : x; }

}  // namespace

TEST(Analysis, PairwiseSum) {
    std::vector<double> v(1000001, 0.1);
    double naive = 0;
    for (double x : v) naive += x;
    EXPECT_NEAR(pairwise_sum(v), 100000.1, 1e-8);
    EXPECT_GT(std::abs(naive - 100000.1), std::abs(pairwise_sum(v) - 100000.1));
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
    EXPECT_EQ(pairwise_sum(std::vector<double>{3.0}), 3.0);
}

TEST(Analysis, ZeroModelHasZeroMoments) {
    ModelParams p;
    const auto m = estimate_moments(p, small(500));
    for (int k = 0; k < 2; ++k) {
        EXPECT_EQ(m.mean[k].value, 0.0);
        EXPECT_EQ(m.mean[k].std_error, 0.0);
        EXPECT_EQ(m.variance[k].value, 0.0);
    }
    EXPECT_FALSE(m.correlation.has_value());
    EXPECT_EQ(empirical_laplace(p, 1.0, 1.0, small(100)).value, 1.0);
}

TEST(Analysis, ShotNoiseMean) {
    const ModelParams p = shot_noise();
    const auto m = estimate_moments(p, small(20000));
    const double exact = 2.0 * 0.5 / 1.5;
    EXPECT_LT(std::abs(m.mean[0].value - exact), 4 * m.mean[0].std_error);
    EXPECT_EQ(m.mean[1].value, 0.0);
    EXPECT_EQ(m.n_paths, 20000u);
    EXPECT_EQ(m.t_sample, 20.0);
}

TEST(Analysis, LaplaceAtOriginIsOne) {
    const auto e = empirical_laplace(oracle::symmetric_benchmark(), 0.0, 0.0, small(2000));
    EXPECT_EQ(e.value, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(Analysis, StandardErrorScalesAsRootN) {
    const ModelParams p = oracle::symmetric_benchmark();
    auto c = small(5000);
    const auto a = estimate_moments(p, c);
    c.n_paths = 20000;
    c.seed = 2;
    const auto b = estimate_moments(p, c);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.mean[k].std_error / b.mean[k].std_error, 2.0, 0.4);
}

TEST(Analysis, ReproducibleAcrossThreadCounts) {
    const ModelParams p = oracle::symmetric_benchmark();
    VerifyConfig c;
    c.n_paths = 3000;
    c.threads = 1;
    const std::string one = verification_to_json(verify(p, c));
    c.threads = 4;
    EXPECT_EQ(one, verification_to_json(verify(p, c)));
}

TEST(Analysis, SampleAndEstimatorAgree) {
    const ModelParams p = oracle::symmetric_benchmark();
    const auto c = small(4000);
    const auto s = sample_intensities(p, c);
    ASSERT_EQ(s.lambda1.size(), 4000u);
    const auto m = moments_from_sample(s);
    const auto direct = estimate_moments(p, c);
    EXPECT_NEAR(m.mean[0].value, direct.mean[0].value, 1e-12);
    EXPECT_NEAR(m.cross_moment.value, direct.cross_moment.value, 1e-12);

    double mean1 = 0, m2 = 0, cross = 0, lap = 0;
    for (std::size_t i = 0; i < s.lambda1.size(); ++i) {
        mean1 += s.lambda1[i];
        m2 += s.lambda1[i] * s.lambda1[i];
        cross += s.lambda1[i] * s.lambda2[i];
        lap += std::exp(-0.5 * s.lambda1[i] - 0.7 * s.lambda2[i]);
    }
    const double n = static_cast<double>(s.lambda1.size());
    EXPECT_NEAR(m.mean[0].value, mean1 / n, 1e-12);
    EXPECT_NEAR(m.second_moment[0].value, m2 / n, 1e-10);
    EXPECT_NEAR(m.cross_moment.value, cross / n, 1e-10);
    EXPECT_NEAR(m.variance[0].value, m2 / n - (mean1 / n) * (mean1 / n), 1e-3 * m.variance[0].value);
    EXPECT_NEAR(laplace_from_sample(s, 0.5, 0.7).value, lap / n, 1e-12);
    ASSERT_TRUE(m.correlation.has_value());
    EXPECT_LE(std::abs(m.correlation->value), 1.0);
}

TEST(Analysis, ThinningAndClusterEnsemblesAgree) {
    const ModelParams p = oracle::symmetric_benchmark();
    auto c = small(20000);
    const auto a = estimate_moments(p, c);
    c.algorithm = Algorithm::Cluster;
    c.seed = 9;
    const auto b = estimate_moments(p, c);
    for (int k = 0; k < 2; ++k) {
        const double se = std::hypot(a.mean[k].std_error, b.mean[k].std_error);
        EXPECT_LT(std::abs(a.mean[k].value - b.mean[k].value), 4 * se);
    }
}

TEST(Analysis, BurnInPastHorizonRejected) {
    auto c = small(10);
    c.burn_in = 30.0;
    EXPECT_THROW(estimate_moments(oracle::symmetric_benchmark(), c), std::exception);
}

TEST(Verify, SymmetricBenchmarkPasses) {
    VerifyConfig c;
    c.n_paths = 20000;
    const auto r = verify(oracle::symmetric_benchmark(), c);
    EXPECT_FALSE(r.non_stationary);
    EXPECT_DOUBLE_EQ(r.burn_in, 20.0);
    EXPECT_EQ(r.rows.size(), 7u + c.v_panel.size());
    for (const auto& row : r.rows) EXPECT_TRUE(row.pass) << row.name << " z=" << row.z_score;
    EXPECT_TRUE(r.overall_pass);
    EXPECT_TRUE(r.warnings.empty());
    const std::string text = verification_to_text(r);
    EXPECT_NE(text.find("mean1"), std::string::npos);
}

TEST(Verify, ExplosiveIsFlaggedWithoutRows) {
    const auto r = verify(oracle::explosive(), {});
    EXPECT_TRUE(r.non_stationary);
    EXPECT_NEAR(r.radius, 1.2, 1e-12);
    EXPECT_TRUE(r.rows.empty());
    EXPECT_FALSE(r.overall_pass);
    EXPECT_FALSE(r.warnings.empty());
}

TEST(Verify, NearCriticalWarnsAndDoublesBurnIn) {
    ModelParams p = oracle::symmetric_benchmark();
    p.g11 = p.g12 = p.g21 = p.g22 = MarkDistribution::exponential(1.1);  // radius 2/2.2
    VerifyConfig c;
    c.n_paths = 200;
    const auto r = verify(p, c);
    EXPECT_GT(r.radius, 0.8);
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings.front().find("slow mixing"), std::string::npos);
    EXPECT_NEAR(r.burn_in, 2 * 20.0 / (1 - r.radius) * 0.5, 1e-9);
}

TEST(Ks, OneAndTwoSample) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<double> a(5000), b(5000), c(5000);
    for (auto& x : a) x = U(rng);
    for (auto& x : b) x = U(rng);
    for (auto& x : c) x = U(rng) * 0.9;
    EXPECT_GT(ks_one_sample(a, uniform_cdf, nullptr).p_value, 0.01);
    EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
    EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
    EXPECT_LT(ks_one_sample(c, uniform_cdf, nullptr).p_value, 1e-6);

    // D for {0.5} against U(0,1) is 0.5.
    EXPECT_NEAR(ks_one_sample({0.5}, uniform_cdf, nullptr).statistic, 0.5, 1e-15);
    EXPECT_NEAR(ks_two_sample({1.0, 2.0}, {3.0, 4.0}).statistic, 1.0, 1e-15);
}

TEST(Increments, ShotNoisePasses) {
    ModelParams p;
    p.rho1 = 1.0;
    p.h1 = MarkDistribution::point_mass(1.0);
    IncrementTestConfig c;
    c.windows = {5.0, 15.0};
    c.n_paths = 3000;
    c.threads = 1;
    const auto r = increment_stationarity_test(p, c);
    EXPECT_TRUE(r.stationary);
    EXPECT_FALSE(r.comparisons.empty());
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.per_test_alpha, c.alpha / r.comparisons.size(), 1e-15);
}

TEST(Compensator, SmallEnsemble) {
    const auto rows = compensator_check(oracle::symmetric_benchmark(), 10.0, 5000, 4, 1);
    for (const auto& r : rows) {
        EXPECT_LT(std::abs(r.z_score), 4.0);
        EXPECT_NEAR(r.difference.value, r.count.value - r.compensator.value, 1e-9);
    }
}

TEST(Analysis, SampleCsv) {
    const auto s = sample_intensities(shot_noise(), small(3));
    std::ostringstream out;
    write_sample_csv(out, s);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "path,lambda1,lambda2");
}
