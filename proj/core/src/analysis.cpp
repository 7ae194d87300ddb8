#include "contagion/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "contagion/errors.hpp"
#include "contagion/laplace.hpp"
#include "contagion/parallel.hpp"
#include "contagion/random.hpp"
#include "contagion/simulator.hpp"
#include "contagion/stationarity.hpp"

namespace contagion {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double x : values) s += x;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

unsigned resolve_threads(unsigned threads) { return threads == 0 ? default_thread_count() : threads; }

double mean_of(std::span<const double> x) {
    return x.empty() ? 0.0 : pairwise_sum(x) / static_cast<double>(x.size());
}

/// Sample mean with the iid standard error.
Estimate iid_estimate(std::span<const double> x) {
    Estimate e;
    const std::size_t n = x.size();
    if (n == 0) return e;
    e.value = mean_of(x);
    if (n < 2) return e;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (x[i] - e.value) * (x[i] - e.value);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(n));
    return e;
}

double covariance_of(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (n < 2) return 0.0;
    const double ma = mean_of(a), mb = mean_of(b);
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
    return pairwise_sum(prod) / static_cast<double>(n - 1);
}

/// Full-sample statistic with a batch-means standard error.
template <class Stat>
Estimate batch_estimate(const IntensitySample& s, std::size_t batches, Stat&& stat) {
    const std::span<const double> a = s.lambda1, b = s.lambda2;
    Estimate e;
    const auto full = stat(a, b);
    if (!full) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    e.value = *full;
    const std::size_t n = a.size();
    batches = std::min(batches, n / 2);
    if (batches < 2) return e;
    std::vector<double> values;
    values.reserve(batches);
    for (std::size_t k = 0; k < batches; ++k) {
        const std::size_t lo = k * n / batches, hi = (k + 1) * n / batches;
        const auto v = stat(a.subspan(lo, hi - lo), b.subspan(lo, hi - lo));
        if (v) values.push_back(*v);
    }
    if (values.size() < 2) return e;
    const Estimate spread = iid_estimate(values);
    e.std_error = spread.std_error;
    return e;
}

void check_ensemble(const EnsembleConfig& c) {
    if (c.n_paths < 2) throw DomainError("n_paths must be >= 2");
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon))
        throw DomainError("horizon must be finite and > 0");
    if (!(c.burn_in >= 0.0) || c.burn_in > c.horizon)
        throw DomainError("burn_in must lie in [0, horizon]");
    if (c.algorithm == Algorithm::Cluster && c.generations < 0)
        throw DomainError("generations must be >= 0");
}

EventHistory simulate_path(const ModelParams& p, const EnsembleConfig& c, double horizon,
                           RandomStream& rng) {
    return c.algorithm == Algorithm::Thinning ? simulate_thinning(p, horizon, rng)
                                              : simulate_cluster(p, horizon, c.generations, rng);
}

double z_of(double empirical, double analytic, double se) {
    const double diff = empirical - analytic;
    if (se > 0.0) return diff / se;
    return std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(analytic))
               ? 0.0
               : std::numeric_limits<double>::infinity();
}

}  // namespace

IntensitySample sample_intensities(const ModelParams& params, const EnsembleConfig& config) {
    require_valid(params);
    check_ensemble(config);
    IntensitySample s;
    s.t_sample = config.horizon;
    s.lambda1.resize(config.n_paths);
    s.lambda2.resize(config.n_paths);
    parallel_for(config.n_paths, resolve_threads(config.threads), [&](std::size_t i) {
        RandomStream rng(config.seed, i);
        const EventHistory h = simulate_path(params, config, config.horizon, rng);
        const Intensity l = intensity_at(h, params, config.horizon);
        s.lambda1[i] = l[0];
        s.lambda2[i] = l[1];
    });
    return s;
}

MomentEstimate moments_from_sample(const IntensitySample& s, std::size_t batches) {
    if (s.lambda1.size() != s.lambda2.size()) throw DomainError("sample components differ in size");
    const std::size_t n = s.lambda1.size();
    MomentEstimate m;
    m.n_paths = n;
    m.t_sample = s.t_sample;

    std::vector<double> sq1(n), sq2(n), cross(n);
    for (std::size_t i = 0; i < n; ++i) {
        sq1[i] = s.lambda1[i] * s.lambda1[i];
        sq2[i] = s.lambda2[i] * s.lambda2[i];
        cross[i] = s.lambda1[i] * s.lambda2[i];
    }
    m.mean = {iid_estimate(s.lambda1), iid_estimate(s.lambda2)};
    m.second_moment = {iid_estimate(sq1), iid_estimate(sq2)};
    m.cross_moment = iid_estimate(cross);

    using Span = std::span<const double>;
    m.variance[0] = batch_estimate(s, batches, [](Span a, Span) {
        return std::optional<double>(covariance_of(a, a));
    });
    m.variance[1] = batch_estimate(s, batches, [](Span, Span b) {
        return std::optional<double>(covariance_of(b, b));
    });
    m.covariance = batch_estimate(s, batches, [](Span a, Span b) {
        return std::optional<double>(covariance_of(a, b));
    });
    if (m.variance[0].value > 0.0 && m.variance[1].value > 0.0) {
        m.correlation = batch_estimate(s, batches, [](Span a, Span b) -> std::optional<double> {
            const double va = covariance_of(a, a), vb = covariance_of(b, b);
            if (!(va > 0.0) || !(vb > 0.0)) return std::nullopt;
            return covariance_of(a, b) / std::sqrt(va * vb);
        });
    }
    return m;
}

MomentEstimate estimate_moments(const ModelParams& params, const EnsembleConfig& config) {
    MomentEstimate m = moments_from_sample(sample_intensities(params, config));
    const C2Result c2 = check_c2(params);
    m.stationary = c2.ok;
    m.radius = c2.radius;
    return m;
}

Estimate laplace_from_sample(const IntensitySample& s, double v1, double v2) {
    if (!(v1 >= 0.0) || !(v2 >= 0.0)) throw DomainError("Laplace arguments must be >= 0");
    std::vector<double> x(s.lambda1.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::exp(-v1 * s.lambda1[i] - v2 * s.lambda2[i]);
    return iid_estimate(x);
}

Estimate empirical_laplace(const ModelParams& params, double v1, double v2,
                           const EnsembleConfig& config) {
    return laplace_from_sample(sample_intensities(params, config), v1, v2);
}

VerificationReport verify(const ModelParams& params, const VerifyConfig& config) {
    require_valid(params);
    VerificationReport r;
    r.n_paths = config.n_paths;
    r.z_threshold = config.z_threshold;
    const C2Result c2 = check_c2(params);
    r.radius = c2.radius;
    if (!c2.ok) {
        r.non_stationary = true;
        std::ostringstream msg;
        msg << "NonStationary: spectral radius " << c2.radius << " >= 1; no comparisons made";
        r.warnings.push_back(msg.str());
        return r;
    }

    double burn_in = config.burn_in ? *config.burn_in : default_burn_in(params);
    if (c2.radius > 0.8) {
        if (!config.burn_in) burn_in *= 2.0;
        std::ostringstream msg;
        msg << "slow mixing: spectral radius " << c2.radius << " > 0.8"
            << (config.burn_in ? "" : ", burn-in doubled");
        r.warnings.push_back(msg.str());
    }
    const double horizon = config.horizon ? *config.horizon : burn_in;
    r.burn_in = burn_in;
    r.horizon = horizon;

    EnsembleConfig ec;
    ec.n_paths = config.n_paths;
    ec.horizon = horizon;
    ec.burn_in = burn_in;
    ec.seed = config.seed;
    ec.threads = config.threads;
    const IntensitySample sample = sample_intensities(params, ec);
    const MomentEstimate est = moments_from_sample(sample);
    const MomentReport exact = moment_report(params);

    auto add = [&](std::string name, double analytic, const Estimate& e) {
        VerificationRow row;
        row.name = std::move(name);
        row.analytic = analytic;
        row.empirical = e.value;
        row.std_error = e.std_error;
        row.z_score = z_of(e.value, analytic, e.std_error);
        row.pass = std::abs(row.z_score) <= config.z_threshold;
        r.rows.push_back(row);
    };
    add("mean1", exact.mean.first, est.mean[0]);
    add("mean2", exact.mean.second, est.mean[1]);
    add("variance1", exact.variance.first, est.variance[0]);
    add("variance2", exact.variance.second, est.variance[1]);
    add("cross_moment", exact.second.m12, est.cross_moment);
    add("covariance", exact.covariance, est.covariance);
    if (exact.correlation && est.correlation) add("correlation", *exact.correlation, *est.correlation);

    LaplaceOptions lopt;
    lopt.max_generations = generation_cap_for(params, config.laplace_tol);
    for (const auto& [v1, v2] : config.v_panel) {
        const LaplaceResult lr = limiting_laplace(params, v1, v2, config.laplace_tol, lopt);
        char name[64];
        std::snprintf(name, sizeof name, "laplace(%g,%g)", v1, v2);
        add(name, lr.value, laplace_from_sample(sample, v1, v2));
    }
    r.overall_pass = std::all_of(r.rows.begin(), r.rows.end(), [](const auto& x) { return x.pass; });
    return r;
}

std::string verification_to_json(const VerificationReport& r, int indent) {
    using nlohmann::json;
    json j;
    j["non_stationary"] = r.non_stationary;
    j["spectral_radius"] = r.radius;
    j["n_paths"] = r.n_paths;
    j["burn_in"] = r.burn_in;
    j["horizon"] = r.horizon;
    j["z_threshold"] = r.z_threshold;
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"name", row.name},
                        {"analytic", row.analytic},
                        {"empirical", row.empirical},
                        {"std_error", row.std_error},
                        {"z_score", row.z_score},
                        {"pass", row.pass}});
    }
    j["rows"] = rows;
    j["warnings"] = r.warnings;
    j["overall_pass"] = r.overall_pass;
    return j.dump(indent);
}

std::string verification_to_text(const VerificationReport& r) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "spectral radius %.6g, %zu paths, burn-in %.6g, T %.6g\n",
                  r.radius, r.n_paths, r.burn_in, r.horizon);
    out << line;
    for (const auto& w : r.warnings) out << "warning: " << w << '\n';
    for (const auto& row : r.rows) {
        std::snprintf(line, sizeof line, "%-18s analytic %-14.8g empirical %-14.8g se %-10.3g z %+7.3f  %s\n",
                      row.name.c_str(), row.analytic, row.empirical, row.std_error, row.z_score,
                      row.pass ? "pass" : "FAIL");
        out << line;
    }
    out << (r.non_stationary ? "non-stationary\n" : r.overall_pass ? "overall: pass\n" : "overall: FAIL\n");
    return out.str();
}

namespace {

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16 * sum) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_p_value(double d, double ne) {
    const double root = std::sqrt(ne);
    return kolmogorov_q((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("KS samples must be non-empty");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, ks_p_value(d, na * nb / (na + nb))};
}

KsResult ks_one_sample(std::vector<double> sample, double (*cdf)(double, const void*),
                       const void* context) {
    if (sample.empty()) throw DomainError("KS sample must be non-empty");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i], context);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return {d, ks_p_value(d, n)};
}

IncrementTestReport increment_stationarity_test(const ModelParams& params,
                                                const IncrementTestConfig& config) {
    require_valid(params);
    if (config.windows.size() < 2) throw DomainError("need at least two windows");
    if (config.lags.empty()) throw DomainError("need at least one lag");
    if (config.n_paths < 2) throw DomainError("n_paths must be >= 2");
    for (double w : config.windows)
        if (!(w >= 0.0)) throw DomainError("window starts must be >= 0");
    for (double h : config.lags)
        if (!(h > 0.0)) throw DomainError("lags must be > 0");

    IncrementTestReport r;
    const C2Result c2 = check_c2(params);
    r.stationary = c2.ok;
    r.radius = c2.radius;

    const double max_lag = *std::max_element(config.lags.begin(), config.lags.end());
    const std::size_t nw = config.windows.size(), nl = config.lags.size();
    const unsigned threads = resolve_threads(config.threads);

    // inc[w][l][k][path], jittered.
    std::vector<std::vector<std::array<std::vector<double>, 2>>> inc(
        nw, std::vector<std::array<std::vector<double>, 2>>(nl));
    for (std::size_t w = 0; w < nw; ++w) {
        for (auto& per_lag : inc[w])
            for (auto& v : per_lag) v.resize(config.n_paths);
        const double t0 = config.windows[w];
        parallel_for(config.n_paths, threads, [&](std::size_t i) {
            const auto tag = static_cast<std::uint32_t>(w + 1);
            RandomStream rng(config.seed, i, tag);
            const EventHistory h = simulate_thinning(params, t0 + max_lag, rng);
            RandomStream jitter(config.seed, i, tag + 0x10000u);
            const auto base = h.counts(t0);
            for (std::size_t l = 0; l < nl; ++l) {
                const auto end = h.counts(t0 + config.lags[l]);
                for (int k = 0; k < 2; ++k)
                    inc[w][l][k][i] = static_cast<double>(end[k] - base[k]) + jitter.uniform();
            }
        });
    }

    const std::size_t tests = (nw - 1) * nl * 2;
    r.per_test_alpha = config.alpha / static_cast<double>(tests);
    for (std::size_t l = 0; l < nl; ++l) {
        for (int k = 0; k < 2; ++k) {
            for (std::size_t w = 1; w < nw; ++w) {
                IncrementComparison c;
                c.lag = config.lags[l];
                c.component = k + 1;
                c.window_a = config.windows[0];
                c.window_b = config.windows[w];
                c.mean_a = mean_of(inc[0][l][k]) - 0.5;
                c.mean_b = mean_of(inc[w][l][k]) - 0.5;
                c.ks = ks_two_sample(inc[0][l][k], inc[w][l][k]);
                c.reject = c.ks.p_value < r.per_test_alpha;
                r.comparisons.push_back(c);
            }
        }
    }
    r.pass = std::none_of(r.comparisons.begin(), r.comparisons.end(),
                          [](const auto& c) { return c.reject; });
    return r;
}

std::array<CompensatorRow, 2> compensator_check(const ModelParams& params, double horizon,
                                                std::size_t n_paths, std::uint64_t seed,
                                                unsigned threads) {
    require_valid(params);
    if (n_paths < 2) throw DomainError("n_paths must be >= 2");
    std::array<std::vector<double>, 2> count, comp, diff;
    for (int k = 0; k < 2; ++k) {
        count[k].resize(n_paths);
        comp[k].resize(n_paths);
        diff[k].resize(n_paths);
    }
    parallel_for(n_paths, resolve_threads(threads), [&](std::size_t i) {
        RandomStream rng(seed, i);
        const EventHistory h = simulate_thinning(params, horizon, rng);
        const auto n = h.counts(horizon);
        const Intensity c = compensator(h, params, horizon);
        for (int k = 0; k < 2; ++k) {
            count[k][i] = static_cast<double>(n[k]);
            comp[k][i] = c[k];
            diff[k][i] = count[k][i] - c[k];
        }
    });
    std::array<CompensatorRow, 2> rows;
    for (int k = 0; k < 2; ++k) {
        rows[k].component = k + 1;
        rows[k].count = iid_estimate(count[k]);
        rows[k].compensator = iid_estimate(comp[k]);
        rows[k].difference = iid_estimate(diff[k]);
        rows[k].z_score = z_of(rows[k].difference.value, 0.0, rows[k].difference.std_error);
    }
    return rows;
}

void write_sample_csv(std::ostream& out, const IntensitySample& s) {
    out << "path,lambda1,lambda2\n";
    char line[96];
    for (std::size_t i = 0; i < s.lambda1.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i, s.lambda1[i], s.lambda2[i]);
        out << line;
    }
}

}  // namespace contagion
