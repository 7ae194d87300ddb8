#pragma once

// Reference computations used as test oracles. Nothing here calls into
// the library's numerics.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "contagion/params.hpp"

namespace oracle {

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Spectral radius of a nonnegative 2x2 matrix by power iteration on
/// I + A (aperiodic even when A is not), minus one.
inline double power_iteration(const std::array<std::array<double, 2>, 2>& a, int iters = 20000) {
    double x0 = 1.0, x1 = 1.0, est = 1.0;
    for (int k = 0; k < iters; ++k) {
        const double y0 = x0 + a[0][0] * x0 + a[0][1] * x1;
        const double y1 = x1 + a[1][0] * x0 + a[1][1] * x1;
        const double norm = std::max(y0, y1);
        est = norm / std::max(x0, x1);
        x0 = y0 / norm;
        x1 = y1 / norm;
    }
    return est - 1.0;
}

/// Mean-mark matrix in the layout [[mu22/d2, mu12/d2], [mu21/d1, mu11/d1]].
inline std::array<std::array<double, 2>, 2> mean_matrix(const contagion::ModelParams& p) {
    return {{{p.g22.mean() / p.delta2, p.g12.mean() / p.delta2},
             {p.g21.mean() / p.delta1, p.g11.mean() / p.delta1}}};
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

struct Moments {
    double m1, m2, s11, s22, s12;  // means, E[l1^2], E[l2^2], E[l1 l2]
};

/// Stationary first and second moments from the generator applied to
/// l1, l2, l1^2, l2^2, l1 l2, each set to zero in expectation.
inline Moments generator_moments(const contagion::ModelParams& p) {
    const double g11 = p.g11.mean(), g12 = p.g12.mean(), g21 = p.g21.mean(), g22 = p.g22.mean();
    const double q11 = p.g11.moments().second_moment, q12 = p.g12.moments().second_moment;
    const double q21 = p.g21.moments().second_moment, q22 = p.g22.moments().second_moment;
    const double a1 = p.rho1 * p.h1.mean(), a2 = p.rho2 * p.h2.mean();
    const double b1 = p.rho1 * p.h1.moments().second_moment;
    const double b2 = p.rho2 * p.h2.moments().second_moment;

    // E[dl1] = -d1 m1 + a1 + g11 m1 + g12 m2 = 0, likewise for l2.
    const auto m = solve({{p.delta1 - g11, -g12}, {-g21, p.delta2 - g22}}, {a1, a2});
    const double m1 = m[0], m2 = m[1];

    // Unknowns (s11, s22, s12).
    // l1^2: -2 d1 s11 + 2 a1 m1 + b1 + 2 g11 s11 + 2 g12 s12 + q11 m1 + q12 m2
    // l2^2: -2 d2 s22 + 2 a2 m2 + b2 + 2 g22 s22 + 2 g21 s12 + q21 m1 + q22 m2
    // l1 l2: -(d1+d2) s12 + a1 m2 + a2 m1 + g21 s11 + g12 s22 + (g11 + g22) s12
    //        + g11 g21 m1 + g12 g22 m2
    std::vector<std::vector<double>> A{
        {2 * (p.delta1 - g11), 0.0, -2 * g12},
        {0.0, 2 * (p.delta2 - g22), -2 * g21},
        {-g21, -g12, p.delta1 + p.delta2 - g11 - g22}};
    std::vector<double> rhs{2 * a1 * m1 + b1 + q11 * m1 + q12 * m2,
                            2 * a2 * m2 + b2 + q21 * m1 + q22 * m2,
                            a1 * m2 + a2 * m1 + g11 * g21 * m1 + g12 * g22 * m2};
    const auto s = solve(A, rhs);
    return {m1, m2, s[0], s[1], s[2]};
}

/// Random catalogue mark with the given mean.
inline contagion::MarkDistribution mark_with_mean(double mean, std::mt19937_64& rng) {
    using contagion::MarkDistribution;
    if (mean == 0.0) return MarkDistribution::zero();
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: return MarkDistribution::point_mass(mean);
        case 1: return MarkDistribution::exponential(1.0 / mean);
        default: {
            const double shape = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
            return MarkDistribution::gamma(shape, mean / shape);
        }
    }
}

/// Random parameters whose mean-mark matrix has spectral radius at most
/// max_radius.
inline contagion::ModelParams random_stationary(std::mt19937_64& rng, double max_radius = 0.8) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    contagion::ModelParams p;
    for (;;) {
        p.delta1 = 0.5 + 2.5 * U(rng);
        p.delta2 = 0.5 + 2.5 * U(rng);
        p.rho1 = 0.2 + 1.5 * U(rng);
        p.rho2 = 0.2 + 1.5 * U(rng);
        p.h1 = mark_with_mean(0.3 + 1.5 * U(rng), rng);
        p.h2 = mark_with_mean(0.3 + 1.5 * U(rng), rng);
        p.g11 = mark_with_mean(p.delta1 * 0.6 * U(rng), rng);
        p.g12 = mark_with_mean(p.delta1 * 0.6 * U(rng), rng);
        p.g21 = mark_with_mean(p.delta2 * 0.6 * U(rng), rng);
        p.g22 = mark_with_mean(p.delta2 * 0.6 * U(rng), rng);
        if (power_iteration(mean_matrix(p)) < max_radius) return p;
    }
}

/// Symmetric cross-exciting benchmark: delta 2, every G exponential with
/// mean 0.5, H exponential with mean 1, rho 1; spectral radius 0.5.
inline contagion::ModelParams symmetric_benchmark() {
    using contagion::MarkDistribution;
    contagion::ModelParams p;
    p.delta1 = p.delta2 = 2.0;
    p.rho1 = p.rho2 = 1.0;
    p.h1 = p.h2 = MarkDistribution::exponential(1.0);
    p.g11 = p.g12 = p.g21 = p.g22 = MarkDistribution::exponential(2.0);
    return p;
}

/// Every mark a point mass; G means 0.6 against delta 1 give radius 1.2.
inline contagion::ModelParams explosive() {
    using contagion::MarkDistribution;
    contagion::ModelParams p;
    p.delta1 = p.delta2 = 1.0;
    p.rho1 = p.rho2 = 1.0;
    p.h1 = p.h2 = MarkDistribution::point_mass(1.0);
    p.g11 = p.g12 = p.g21 = p.g22 = MarkDistribution::point_mass(0.6);
    return p;
}

}  // namespace oracle
