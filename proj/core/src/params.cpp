#include "contagion/params.hpp"

#include <cmath>
#include <sstream>

#include "contagion/errors.hpp"
#include "contagion/stationarity.hpp"

namespace contagion {

const MarkDistribution& ModelParams::g(int excited, int trigger) const {
    if (excited == 1) return trigger == 1 ? g11 : g12;
    return trigger == 1 ? g21 : g22;
}

void require_valid(const ModelParams& p) {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    auto nonneg = [](double x) { return x >= 0.0 && std::isfinite(x); };
    if (!positive(p.delta1) || !positive(p.delta2))
        throw ValidationError("decay rates delta1, delta2 must be finite and > 0");
    if (!nonneg(p.rho1) || !nonneg(p.rho2))
        throw ValidationError("external rates rho1, rho2 must be finite and >= 0");
    if (!nonneg(p.lambda0[0]) || !nonneg(p.lambda0[1]))
        throw ValidationError("initial intensities lambda0 must be finite and >= 0");
}

ValidationReport validate(const ModelParams& params) {
    require_valid(params);

    ValidationReport report;
    report.c1_ok = true;
    const MarkDistribution* marks[] = {&params.h1,  &params.h2,  &params.g11,
                                       &params.g12, &params.g21, &params.g22};
    const char* names[] = {"h1", "h2", "g11", "g12", "g21", "g22"};
    for (int i = 0; i < 6; ++i) {
        const auto mom = marks[i]->moments();
        if (!std::isfinite(mom.mean) || mom.mean < 0.0) {
            report.c1_ok = false;
            report.messages.push_back(std::string(names[i]) + " has no finite first moment");
        }
    }

    const auto c2 = check_c2(params);
    const auto matrix = excitation_matrix(params);
    report.c2_ok = c2.ok;
    report.spectral_radius = c2.radius;
    report.sum_form_radius = sum_form_radius(matrix);

    std::ostringstream msg;
    msg.precision(17);
    if (c2.near_critical) {
        msg << "spectral radius " << c2.radius << " is within " << kCriticalBand
            << " of 1; treated as critical (non-stationary)";
        report.messages.push_back(msg.str());
    } else if (!c2.ok) {
        msg << "spectral radius " << c2.radius << " >= 1: no stationary distribution";
        report.messages.push_back(msg.str());
    }
    return report;
}

}  // namespace contagion
