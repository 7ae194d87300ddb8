#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "contagion/analysis.hpp"
#include "contagion/errors.hpp"
#include "contagion/laplace.hpp"
#include "contagion/simulator.hpp"
#include "contagion/stationarity.hpp"
#include "oracles.hpp"

using namespace contagion;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string format(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double trapezoid(const TimeGrid& g, std::span<const double> f) {
    double s = 0;
    for (std::size_t j = 1; j < g.size(); ++j) s += 0.5 * (g[j] - g[j - 1]) * (f[j] + f[j - 1]);
    return s;
}

ModelParams shot_noise() {
    ModelParams p;
    p.delta1 = 1.5;
    p.rho1 = 2.0;
    p.h1 = MarkDistribution::exponential(2.0);
    return p;
}

Outcome shot_noise_closed_form() {
    const ModelParams p = shot_noise();
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (double v : {0.5, 1.0, 2.0}) {
        const double exact = std::pow(1 + v / 2.0, -2.0 / 1.5);
        worst = std::max(worst, std::abs(limiting_laplace(p, v, 0.0, 1e-10).value - exact));
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-6 && dt < 1.0, format("max |error| %.2e, %.3f s", worst, dt)};
}

Outcome benchmark_moments() {
    VerifyConfig c;
    c.n_paths = 100000;
    const auto t0 = std::chrono::steady_clock::now();
    const VerificationReport r = verify(oracle::symmetric_benchmark(), c);
    const double dt = seconds_since(t0);
    Outcome o;
    double worst = 0;
    bool have_corr = false;
    for (const auto& row : r.rows) {
        worst = std::max(worst, std::abs(row.z_score));
        if (std::abs(row.z_score) > 4.0) o.pass = false;
        have_corr = have_corr || row.name == "correlation";
    }
    o.pass = o.pass && have_corr && !r.non_stationary && dt < 300.0;
    o.detail = format("%zu rows, max |z| %.2f, %.1f s", r.rows.size(), worst, dt);
    return o;
}

Outcome thinning_vs_cluster() {
    std::mt19937_64 rng(101);
    ModelParams hawkes;
    hawkes.delta1 = 1.0;
    hawkes.delta2 = 2.0;
    hawkes.rho1 = 0.8;
    hawkes.h1 = MarkDistribution::gamma(2.0, 0.5);
    hawkes.g11 = MarkDistribution::exponential(2.5);
    hawkes.g21 = MarkDistribution::point_mass(0.7);
    hawkes.g22 = MarkDistribution::point_mass(0.4);
    const std::vector<ModelParams> sets{oracle::symmetric_benchmark(), hawkes,
                                        oracle::random_stationary(rng, 0.7)};
    Outcome o;
    double worst = 0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        EnsembleConfig c;
        c.n_paths = 20000;
        c.horizon = c.burn_in = default_burn_in(sets[s]);
        c.seed = 10 + s;
        const auto a = estimate_moments(sets[s], c);
        c.algorithm = Algorithm::Cluster;
        c.generations = 30;
        c.seed = 20 + s;
        const auto b = estimate_moments(sets[s], c);
        for (int k = 0; k < 2; ++k) {
            for (const auto& [x, y] : {std::pair{a.mean[k], b.mean[k]}, std::pair{a.variance[k], b.variance[k]}}) {
                const double se = std::hypot(x.std_error, y.std_error);
                const double z = se > 0 ? (x.value - y.value) / se : (x.value == y.value ? 0.0 : INFINITY);
                worst = std::max(worst, std::abs(z));
                if (std::abs(z) > 4.0) o.pass = false;
            }
        }
    }
    o.detail = format("3 parameter sets, means and variances, max |z| %.2f", worst);
    return o;
}

Outcome residual() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> U(0.0, 2.0);
    Outcome o;
    double worst = 0;
    std::vector<ModelParams> sets;
    for (int s = 0; s < 5; ++s) sets.push_back(oracle::random_stationary(rng, 0.8));
    for (const auto& p : sets) {
        for (int n = 1; n <= 3; ++n) {
            for (int i = 0; i < 20; ++i) {
                std::vector<double> v(2 * n);
                for (auto& x : v) x = U(rng);
                worst = std::max(worst, std::abs(stationarity_residual(p, v, n)));
            }
        }
    }
    // Halving dt must cut the residual about fourfold.
    double coarse = 0, fine = 0;
    ResidualOptions half;
    half.dt /= 2;
    for (int i = 0; i < 5; ++i) {
        std::vector<double> v(4);
        for (auto& x : v) x = 0.2 + U(rng);
        coarse += std::abs(stationarity_residual(sets[i], v, 2));
        fine += std::abs(stationarity_residual(sets[i], v, 2, half));
    }
    const double ratio = coarse / fine;
    o.pass = worst < 1e-4 && ratio > 3.0;
    o.detail = format("300 points, max |residual| %.2e, dt-halving ratio %.2f", worst, ratio);
    return o;
}

Outcome l_functions() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> U(0.1, 2.0);
    Outcome o;
    double worst_decay = 0, worst_slack = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const ModelParams p = oracle::random_stationary(rng, 0.9);
        const auto A = oracle::mean_matrix(p);
        const int n = 6;
        const auto sol = limiting_l_grid(p, U(rng), U(rng), n);
        const TimeGrid& g = sol.grid();
        const std::size_t last = g.size() - 1;
        for (std::size_t i = 1; i <= sol.system_size(); ++i) {
            const auto l = sol.l(i);
            worst_decay = std::max(worst_decay, l[last]);
            for (double x : l)
                if (x < 0.0) o.pass = false;
            if (i > 2)
                for (std::size_t j = 0; j < g.size(); ++j)
                    if (l[j] < sol.l(i - 2)[j] - 1e-15) o.pass = false;
        }
        std::vector<std::array<double, 2>> d(n);
        d[0] = {trapezoid(g, sol.l(1)), trapezoid(g, sol.l(2))};
        for (int k = 2; k <= n; ++k) {
            std::vector<double> a(g.size()), b(g.size());
            for (std::size_t j = 0; j < g.size(); ++j) {
                a[j] = sol.l(2 * k - 1)[j] - sol.l(2 * k - 3)[j];
                b[j] = sol.l(2 * k)[j] - sol.l(2 * k - 2)[j];
            }
            d[k - 1] = {trapezoid(g, a), trapezoid(g, b)};
        }
        for (int i = 0; i + 1 < n; ++i)
            for (int r = 0; r < 2; ++r) {
                const double bound = A[r][0] * d[i][0] + A[r][1] * d[i][1];
                const double slack = d[i + 1][r] - bound;
                worst_slack = std::max(worst_slack, slack / std::max(bound, 1e-300));
                if (slack > 1e-6 * bound + 1e-9) o.pass = false;
            }
    }
    if (worst_decay >= 1e-8) o.pass = false;
    o.detail = format("10 parameter sets, max l at horizon %.1e, worst relative contraction slack %.1e",
                      worst_decay, worst_slack);
    return o;
}

Outcome finite_t_vs_cluster() {
    ModelParams a = oracle::symmetric_benchmark();
    a.lambda0 = {0.5, 1.0};
    ModelParams b;
    b.delta1 = 1.2;
    b.delta2 = 0.8;
    b.rho1 = 0.7;
    b.rho2 = 0.4;
    b.h1 = MarkDistribution::point_mass(1.0);
    b.h2 = MarkDistribution::gamma(3.0, 0.4);
    b.g11 = MarkDistribution::exponential(3.0);
    b.g12 = MarkDistribution::point_mass(0.3);
    b.g21 = MarkDistribution::gamma(2.0, 0.2);
    b.g22 = MarkDistribution::exponential(4.0);
    b.lambda0 = {1.5, 0.0};

    const double T = 5.0;
    const std::vector<double> v{0.6, 0.4, 1.1, 0.9};
    const TimeGrid grid = TimeGrid::uniform(T, 1e-3);
    Outcome o;
    std::string detail;
    for (const auto* p : {&a, &b}) {
        const double exact = finite_T_laplace(*p, v, T, grid);
        const int paths = 100000;
        std::vector<double> x(paths);
        for (int i = 0; i < paths; ++i) {
            RandomStream rng(31, static_cast<std::uint64_t>(i));
            const auto h = simulate_cluster(*p, T, 1, rng);
            const auto layers = layer_intensities(h, *p, T, 2);
            x[i] = std::exp(-v[0] * layers[0][0] - v[1] * layers[0][1] - v[2] * layers[1][0] -
                            v[3] * layers[1][1]);
        }
        double m = 0, s2 = 0;
        for (double y : x) m += y;
        m /= paths;
        for (double y : x) s2 += (y - m) * (y - m);
        const double se = std::sqrt(s2 / (paths - 1) / paths);
        const double z = (m - exact) / se;
        if (std::abs(z) > 4.0) o.pass = false;
        detail += format("%s%.5f vs %.5f (z %.2f)", detail.empty() ? "" : "; ", exact, m, z);
    }
    o.detail = detail;
    return o;
}

Outcome compensator_identity() {
    const auto rows = compensator_check(oracle::symmetric_benchmark(), 10.0, 100000, 41);
    Outcome o;
    for (const auto& r : rows) {
        if (std::abs(r.z_score) > 4.0) o.pass = false;
        o.detail += format("%sN%d z %.2f", o.detail.empty() ? "" : ", ", r.component, r.z_score);
    }
    return o;
}

Outcome stationary_increments() {
    IncrementTestConfig c;
    c.n_paths = 10000;
    c.seed = 51;
    const auto good = increment_stationarity_test(oracle::symmetric_benchmark(), c);
    IncrementTestConfig e;
    e.windows = {5.0, 15.0};
    e.n_paths = 2000;
    e.seed = 52;
    const auto bad = increment_stationarity_test(oracle::explosive(), e);
    double min_p = 1;
    for (const auto& cmp : good.comparisons) min_p = std::min(min_p, cmp.ks.p_value);
    double bad_p = 1;
    for (const auto& cmp : bad.comparisons) bad_p = std::min(bad_p, cmp.ks.p_value);
    return {good.pass && !bad.pass,
            format("benchmark min p %.3f (%s), radius %.1f min p %.1e (%s)", min_p,
                   good.pass ? "pass" : "reject", bad.radius, bad_p, bad.pass ? "pass" : "reject")};
}

ModelParams from_matrix(const std::array<std::array<double, 2>, 2>& a) {
    auto mark = [](double x) { return x == 0.0 ? MarkDistribution::zero() : MarkDistribution::point_mass(x); };
    ModelParams p;
    p.rho1 = p.rho2 = 1.0;
    p.h1 = p.h2 = MarkDistribution::point_mass(1.0);
    p.g22 = mark(a[0][0]);
    p.g12 = mark(a[0][1]);
    p.g21 = mark(a[1][0]);
    p.g11 = mark(a[1][1]);
    return p;
}

Outcome spectral_gate() {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> U(0.0, 1.2);
    std::bernoulli_distribution zero(0.15);
    int mismatches = 0, stationary = 0;
    for (int i = 0; i < 1000; ++i) {
        std::array<std::array<double, 2>, 2> a{};
        for (auto& row : a)
            for (auto& x : row) x = zero(rng) ? 0.0 : U(rng);
        const bool expected = oracle::power_iteration(a) < 1.0;
        const bool got = check_c2(from_matrix(a)).ok;
        if (got != expected) ++mismatches;
        stationary += got;
    }
    const bool boundary_rejected = !check_c2(from_matrix({{{0.5, 0.5}, {0.5, 0.5}}})).ok &&
                                   !check_c2(from_matrix({{{1.0, 0.0}, {0.0, 0.3}}})).ok &&
                                   !check_c2(from_matrix({{{0.0, 1.0}, {1.0, 0.0}}})).ok;
    return {mismatches == 0 && boundary_rejected,
            format("%d mismatches on 1000 matrices (%d stationary), radius 1 %s", mismatches, stationary,
                   boundary_rejected ? "rejected" : "accepted")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"shot-noise closed form", shot_noise_closed_form},
        {"benchmark moments", benchmark_moments},
        {"thinning vs cluster", thinning_vs_cluster},
        {"stationarity residual", residual},
        {"l-function properties", l_functions},
        {"finite-T Laplace vs cluster", finite_t_vs_cluster},
        {"compensator identity", compensator_identity},
        {"stationary increments", stationary_increments},
        {"spectral-radius gate", spectral_gate},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
