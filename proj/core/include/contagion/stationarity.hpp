#pragma once

#include <array>
#include <optional>
#include <string>

#include "contagion/params.hpp"

namespace contagion {

/// Mean-mark-to-decay ratios
///
///     [ mu_G22/delta2  mu_G12/delta2 ]
///     [ mu_G21/delta1  mu_G11/delta1 ]
///
/// Row 0 belongs to the type-2 generation functions, row 1 to type 1.
struct ExcitationMatrix {
    std::array<std::array<double, 2>, 2> a{};

    double operator()(int i, int j) const { return a[i][j]; }
    double trace() const { return a[0][0] + a[1][1]; }
    double determinant() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }
};

ExcitationMatrix excitation_matrix(const ModelParams& params);

/// Largest eigenvalue of a nonnegative 2x2 matrix.
double spectral_radius(const ExcitationMatrix& m);

/// The variant with (x+y)^2 under the root. Never smaller than
/// spectral_radius(); equal only when a diagonal entry vanishes.
double sum_form_radius(const ExcitationMatrix& m);

/// Distance from 1 below which a radius counts as critical.
inline constexpr double kCriticalBand = 1e-12;

struct C2Result {
    bool ok = false;
    double radius = 0.0;
    bool near_critical = false;
};

C2Result check_c2(const ModelParams& params);

/// Throws NonStationaryError unless check_c2 holds.
void require_stationary(const ModelParams& params);

struct Pair {
    double first = 0.0;
    double second = 0.0;
};

struct SecondMoments {
    double m2_1 = 0.0;  ///< E[(lambda^1)^2]
    double m2_2 = 0.0;  ///< E[(lambda^2)^2]
    double m12 = 0.0;   ///< E[lambda^1 lambda^2]
};

/// Coefficients of the generator applied to lambda_1^2, lambda_2^2 and
/// lambda_1 lambda_2, laid out as columns (x11, x22, x12, x1, x2, x0).
struct GeneratorCoefficients {
    std::array<double, 6> a{};
    std::array<double, 6> b{};
    std::array<double, 6> c{};
};

struct MomentReport {
    double radius = 0.0;
    double delta1_eff = 0.0;  ///< delta1 - mu_G11
    double delta2_eff = 0.0;  ///< delta2 - mu_G22
    double delta_det = 0.0;   ///< delta1_eff * delta2_eff - mu_G12 * mu_G21

    /// m_i = mean_coef[i][0] rho1 + mean_coef[i][1] rho2
    std::array<std::array<double, 2>, 2> mean_coef{};
    /// v_i = var_coef[i][0] rho1 + var_coef[i][1] rho2
    std::array<std::array<double, 2>, 2> var_coef{};
    GeneratorCoefficients table;

    Pair mean;
    SecondMoments second;
    Pair variance;                ///< from var_coef
    Pair variance_linear_system;  ///< second - mean^2 from the 3x3 system
    double covariance = 0.0;
    std::optional<double> correlation;
};

Pair stationary_mean(const ModelParams& params);
SecondMoments stationary_second_moments(const ModelParams& params);

struct VarianceCorrelation {
    double v1 = 0.0;
    double v2 = 0.0;
    /// Empty when either variance is zero.
    std::optional<double> rho12;
};

VarianceCorrelation stationary_variance_correlation(const ModelParams& params);

/// Everything above plus the intermediates, in one pass.
MomentReport moment_report(const ModelParams& params);

std::string moment_report_to_json(const MomentReport& report, int indent = 2);

}  // namespace contagion
