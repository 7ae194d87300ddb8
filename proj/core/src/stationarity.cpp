#include "contagion/stationarity.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "contagion/errors.hpp"

namespace contagion {

ExcitationMatrix excitation_matrix(const ModelParams& p) {
    ExcitationMatrix m;
    m.a[0][0] = p.g22.mean() / p.delta2;
    m.a[0][1] = p.g12.mean() / p.delta2;
    m.a[1][0] = p.g21.mean() / p.delta1;
    m.a[1][1] = p.g11.mean() / p.delta1;
    return m;
}

double spectral_radius(const ExcitationMatrix& m) {
    // tr^2 - 4 det == (a - d)^2 + 4 b c, which is >= 0 for nonnegative
    // entries and has no cancellation.
    const double diff = m.a[0][0] - m.a[1][1];
    const double disc = diff * diff + 4.0 * m.a[0][1] * m.a[1][0];
    return 0.5 * (m.trace() + std::sqrt(disc));
}

double sum_form_radius(const ExcitationMatrix& m) {
    const double tr = m.trace();
    return 0.5 * (tr + std::sqrt(tr * tr + 4.0 * m.a[0][1] * m.a[1][0]));
}

C2Result check_c2(const ModelParams& params) {
    C2Result r;
    r.radius = spectral_radius(excitation_matrix(params));
    r.near_critical = std::abs(1.0 - r.radius) <= kCriticalBand;
    r.ok = r.radius < 1.0 && !r.near_critical;
    return r;
}

void require_stationary(const ModelParams& params) {
    const auto c2 = check_c2(params);
    if (!c2.ok) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "NonStationary: spectral radius " << c2.radius
            << (c2.near_critical ? " is critical" : " >= 1");
        throw NonStationaryError(msg.str(), c2.radius);
    }
}

namespace {

struct MarkSummary {
    double g11, g12, g21, g22;  // means
    double s11, s12, s21, s22;  // second moments
    double h1, h2, sh1, sh2;
};

MarkSummary summarize(const ModelParams& p) {
    const auto m11 = p.g11.moments(), m12 = p.g12.moments();
    const auto m21 = p.g21.moments(), m22 = p.g22.moments();
    const auto mh1 = p.h1.moments(), mh2 = p.h2.moments();
    return {m11.mean,          m12.mean,          m21.mean,          m22.mean,
            m11.second_moment, m12.second_moment, m21.second_moment, m22.second_moment,
            mh1.mean,          mh2.mean,          mh1.second_moment, mh2.second_moment};
}

double det3(const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

MomentReport moment_report(const ModelParams& params) {
    require_valid(params);
    require_stationary(params);

    const MarkSummary k = summarize(params);
    const double rho1 = params.rho1, rho2 = params.rho2;

    MomentReport r;
    r.radius = check_c2(params).radius;
    const double d1 = params.delta1 - k.g11;
    const double d2 = params.delta2 - k.g22;
    const double det = d1 * d2 - k.g12 * k.g21;
    r.delta1_eff = d1;
    r.delta2_eff = d2;
    r.delta_det = det;

    // Stationary mean: the generator applied to lambda_i.
    auto& mu = r.mean_coef;
    mu[0] = {d2 * k.h1 / det, k.g12 * k.h2 / det};
    mu[1] = {k.g21 * k.h1 / det, d1 * k.h2 / det};
    const double m1 = mu[0][0] * rho1 + mu[0][1] * rho2;
    const double m2 = mu[1][0] * rho1 + mu[1][1] * rho2;
    r.mean = {m1, m2};

    // Generator applied to lambda_1^2, lambda_2^2, lambda_1 lambda_2.
    // Columns: x11, x22, x12, x1, x2, x0.
    auto& t = r.table;
    t.a = {-2.0 * d1, 0.0, 2.0 * k.g12, 2.0 * k.h1 * rho1 + k.s11, k.s12, k.sh1 * rho1};
    t.b = {0.0, -2.0 * d2, 2.0 * k.g21, k.s21, 2.0 * k.h2 * rho2 + k.s22, k.sh2 * rho2};
    t.c = {k.g21, k.g12, -d1 - d2, k.h2 * rho2 + k.g11 * k.g21, k.h1 * rho1 + k.g12 * k.g22, 0.0};

    const double a0 = t.a[3] * m1 + t.a[4] * m2 + t.a[5];
    const double b0 = t.b[3] * m1 + t.b[4] * m2 + t.b[5];
    const double c0 = t.c[3] * m1 + t.c[4] * m2 + t.c[5];

    // Unknowns (E[l1^2], E[l2^2], E[l1 l2]) by Cramer's rule.
    const double sys[3][3] = {{t.a[0], t.a[1], t.a[2]},
                              {t.b[0], t.b[1], t.b[2]},
                              {t.c[0], t.c[1], t.c[2]}};
    const double rhs[3] = {-a0, -b0, -c0};
    const double d = det3(sys);
    if (!(std::abs(d) > 1e-300) || !std::isfinite(d))
        throw NumericalError("second-moment system is singular");
    double sol[3];
    for (int col = 0; col < 3; ++col) {
        double replaced[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) replaced[i][j] = j == col ? rhs[i] : sys[i][j];
        sol[col] = det3(replaced) / d;
    }
    r.second = {sol[0], sol[1], sol[2]};
    r.variance_linear_system = {sol[0] - m1 * m1, sol[1] - m2 * m2};

    // Variance coefficients in closed form.
    const double s = d1 + d2;
    const double cross = k.g12 * k.g21;
    const double f1 = (d2 - cross / s) / (2.0 * det);
    const double f2 = (d1 - cross / s) / (2.0 * det);
    for (int j = 0; j < 2; ++j) {
        const double src1 = k.s11 * mu[0][j] + k.s12 * mu[1][j] + (j == 0 ? k.sh1 : 0.0);
        const double src2 = k.s22 * mu[1][j] + k.s21 * mu[0][j] + (j == 1 ? k.sh2 : 0.0);
        const double coupling = k.g11 * k.g21 * mu[0][j] + k.g12 * k.g22 * mu[1][j];
        r.var_coef[0][j] = f1 * src1 + k.g12 * k.g12 / (2.0 * det * s) * src2 +
                           k.g12 * d2 / (det * s) * coupling;
        r.var_coef[1][j] = f2 * src2 + k.g21 * k.g21 / (2.0 * det * s) * src1 +
                           k.g21 * d1 / (det * s) * coupling;
    }
    r.variance = {r.var_coef[0][0] * rho1 + r.var_coef[0][1] * rho2,
                  r.var_coef[1][0] * rho1 + r.var_coef[1][1] * rho2};

    r.covariance = r.second.m12 - m1 * m2;
    if (r.variance.first > 0.0 && r.variance.second > 0.0)
        r.correlation = r.covariance / std::sqrt(r.variance.first * r.variance.second);
    return r;
}

Pair stationary_mean(const ModelParams& params) { return moment_report(params).mean; }

SecondMoments stationary_second_moments(const ModelParams& params) {
    return moment_report(params).second;
}

VarianceCorrelation stationary_variance_correlation(const ModelParams& params) {
    const auto r = moment_report(params);
    return {r.variance.first, r.variance.second, r.correlation};
}

std::string moment_report_to_json(const MomentReport& r, int indent) {
    using nlohmann::json;
    auto row = [](const std::array<double, 6>& x) {
        return json{{"x11", x[0]}, {"x22", x[1]}, {"x12", x[2]},
                    {"x1", x[3]},  {"x2", x[4]},  {"x0", x[5]}};
    };
    json j;
    j["spectral_radius"] = r.radius;
    j["mean"] = {r.mean.first, r.mean.second};
    j["second_moment"] = {r.second.m2_1, r.second.m2_2};
    j["cross_moment"] = r.second.m12;
    j["variance"] = {r.variance.first, r.variance.second};
    j["variance_linear_system"] = {r.variance_linear_system.first,
                                   r.variance_linear_system.second};
    j["covariance"] = r.covariance;
    j["correlation"] = r.correlation ? json(*r.correlation) : json(nullptr);
    j["intermediates"] = {
        {"Delta1", r.delta1_eff},
        {"Delta2", r.delta2_eff},
        {"Delta", r.delta_det},
        {"mu", {{"mu11", r.mean_coef[0][0]}, {"mu12", r.mean_coef[0][1]},
                {"mu21", r.mean_coef[1][0]}, {"mu22", r.mean_coef[1][1]}}},
        {"gamma", {{"gamma11", r.var_coef[0][0]}, {"gamma12", r.var_coef[0][1]},
                   {"gamma21", r.var_coef[1][0]}, {"gamma22", r.var_coef[1][1]}}},
        {"table", {{"A", row(r.table.a)}, {"B", row(r.table.b)}, {"C", row(r.table.c)}}}};
    return j.dump(indent);
}

}  // namespace contagion
