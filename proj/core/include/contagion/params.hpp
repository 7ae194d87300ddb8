#pragma once

#include <array>
#include <string>
#include <vector>

#include "contagion/marks.hpp"

namespace contagion {

/// Parameters of a bivariate dynamic contagion process.
///
/// Component k has intensity decaying at delta_k, receives external
/// shots at Poisson rate rho_k with sizes drawn from h_k, and every event
/// of component j adds an independent draw of g_kj to component k. The
/// first index of g is the excited component, the second the triggering
/// one (g12 is what a type-2 event adds to intensity 1).
struct ModelParams {
    double delta1 = 1.0;
    double delta2 = 1.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
    MarkDistribution h1;
    MarkDistribution h2;
    MarkDistribution g11;
    MarkDistribution g12;
    MarkDistribution g21;
    MarkDistribution g22;
    std::array<double, 2> lambda0{0.0, 0.0};

    double delta(int k) const { return k == 1 ? delta1 : delta2; }
    double rho(int k) const { return k == 1 ? rho1 : rho2; }
    const MarkDistribution& h(int k) const { return k == 1 ? h1 : h2; }
    /// Mark added to component `excited` by an event of component `trigger`.
    const MarkDistribution& g(int excited, int trigger) const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ValidationReport {
    bool c1_ok = false;
    bool c2_ok = false;
    double spectral_radius = 0.0;
    /// Radius from the closed form with (x+y)^2 under the root; an upper
    /// bound on spectral_radius kept for comparison only.
    double sum_form_radius = 0.0;
    std::vector<std::string> messages;
};

/// Checks finite-mean marks and the spectral-radius condition.
/// Throws ValidationError for non-positive decay rates, negative external
/// rates or negative initial intensities.
ValidationReport validate(const ModelParams& params);

/// Throws ValidationError unless the parameters are structurally valid.
void require_valid(const ModelParams& params);

}  // namespace contagion
