#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "contagion/params.hpp"

namespace contagion {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

enum class Algorithm { Thinning, Cluster };

struct EnsembleConfig {
    std::size_t n_paths = 10000;
    /// Sampling time T; paths run on [0, T].
    double horizon = 40.0;
    /// Declared discarded prefix; must be <= horizon.
    double burn_in = 20.0;
    std::uint64_t seed = 1;
    /// 0 selects default_thread_count().
    unsigned threads = 0;
    Algorithm algorithm = Algorithm::Thinning;
    int generations = 30;  ///< cluster truncation
};

/// (lambda^1_T, lambda^2_T) from independent paths; index i is path i.
struct IntensitySample {
    std::vector<double> lambda1;
    std::vector<double> lambda2;
    double t_sample = 0.0;
};

IntensitySample sample_intensities(const ModelParams& params, const EnsembleConfig& config);

struct MomentEstimate {
    std::array<Estimate, 2> mean;
    std::array<Estimate, 2> second_moment;
    std::array<Estimate, 2> variance;
    Estimate cross_moment;
    Estimate covariance;
    /// Empty when either sample variance is zero.
    std::optional<Estimate> correlation;
    std::size_t n_paths = 0;
    double t_sample = 0.0;
    bool stationary = true;
    double radius = 0.0;
};

/// Mean, second moments and cross moment use the per-path standard error;
/// variance, covariance and correlation use batch means.
MomentEstimate moments_from_sample(const IntensitySample& sample, std::size_t batches = 100);

/// Non-stationary parameters are simulated and flagged, not rejected.
MomentEstimate estimate_moments(const ModelParams& params, const EnsembleConfig& config);

Estimate laplace_from_sample(const IntensitySample& sample, double v1, double v2);
Estimate empirical_laplace(const ModelParams& params, double v1, double v2,
                           const EnsembleConfig& config);

struct VerificationRow {
    std::string name;
    double analytic = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
    bool pass = false;
};

struct VerificationReport {
    bool non_stationary = false;
    double radius = 0.0;
    std::size_t n_paths = 0;
    double burn_in = 0.0;
    double horizon = 0.0;
    double z_threshold = 4.0;
    std::vector<VerificationRow> rows;
    std::vector<std::string> warnings;
    bool overall_pass = false;
};

struct VerifyConfig {
    std::size_t n_paths = 100000;
    /// Defaults to default_burn_in, doubled when the radius exceeds 0.8.
    std::optional<double> burn_in;
    /// Defaults to burn_in.
    std::optional<double> horizon;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::vector<std::pair<double, double>> v_panel{{0.5, 0.5}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    double z_threshold = 4.0;
    double laplace_tol = 1e-9;
};

/// Monte Carlo against closed-form moments and limiting transforms.
VerificationReport verify(const ModelParams& params, const VerifyConfig& config = {});

std::string verification_to_json(const VerificationReport& report, int indent = 2);
std::string verification_to_text(const VerificationReport& report);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov with the asymptotic Kolmogorov law.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::vector<double> sample, double (*cdf)(double, const void*),
                       const void* context);

struct IncrementTestConfig {
    /// Window start times; each later window is compared to the first.
    std::vector<double> windows{20.0, 40.0};
    std::vector<double> lags{1.0};
    std::size_t n_paths = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double alpha = 0.01;
};

struct IncrementComparison {
    double lag = 0.0;
    int component = 1;
    double window_a = 0.0;
    double window_b = 0.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    KsResult ks;
    bool reject = false;
};

struct IncrementTestReport {
    bool stationary = true;  ///< spectral-radius condition
    double radius = 0.0;
    /// alpha divided by the number of comparisons (Bonferroni).
    double per_test_alpha = 0.0;
    std::vector<IncrementComparison> comparisons;
    bool pass = false;
};

/// Compares the law of N^k_{t+h} - N^k_t across windows t at fixed lag h
/// with independent path sets per window. Integer counts get independent
/// U(0,1) jitter so the continuous-law KS null applies.
IncrementTestReport increment_stationarity_test(const ModelParams& params,
                                                const IncrementTestConfig& config);

struct CompensatorRow {
    int component = 1;
    Estimate count;
    Estimate compensator;
    Estimate difference;  ///< paired N^k_T - int_0^T lambda^k
    double z_score = 0.0;
};

std::array<CompensatorRow, 2> compensator_check(const ModelParams& params, double horizon,
                                                std::size_t n_paths, std::uint64_t seed,
                                                unsigned threads = 0);

void write_sample_csv(std::ostream& out, const IntensitySample& sample);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

}  // namespace contagion
