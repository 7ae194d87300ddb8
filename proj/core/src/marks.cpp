#include "contagion/marks.hpp"

#include <cmath>
#include <string>

#include "contagion/errors.hpp"

namespace contagion {

std::string_view to_string(MarkKind kind) {
    switch (kind) {
        case MarkKind::Zero: return "zero";
        case MarkKind::PointMass: return "point_mass";
        case MarkKind::Exponential: return "exponential";
        case MarkKind::Gamma: return "gamma";
    }
    return "unknown";
}

MarkKind mark_kind_from_string(std::string_view name) {
    if (name == "zero") return MarkKind::Zero;
    if (name == "point_mass") return MarkKind::PointMass;
    if (name == "exponential") return MarkKind::Exponential;
    if (name == "gamma") return MarkKind::Gamma;
    throw ValidationError("unknown mark kind '" + std::string(name) +
                          "' (expected zero, point_mass, exponential or gamma)");
}

MarkDistribution MarkDistribution::point_mass(double value) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw ValidationError("point_mass value must be finite and >= 0");
    return {MarkKind::PointMass, value, 0.0};
}

MarkDistribution MarkDistribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw ValidationError("exponential rate must be finite and > 0");
    return {MarkKind::Exponential, rate, 0.0};
}

MarkDistribution MarkDistribution::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !std::isfinite(shape) || !(scale > 0.0) || !std::isfinite(scale))
        throw ValidationError("gamma shape and scale must be finite and > 0");
    return {MarkKind::Gamma, shape, scale};
}

double MarkDistribution::laplace(double u) const {
    if (!(u >= 0.0)) throw DomainError("mark Laplace transform needs u >= 0");
    switch (kind_) {
        case MarkKind::Zero: return 1.0;
        case MarkKind::PointMass: return std::exp(-a_ * u);
        case MarkKind::Exponential: return a_ / (a_ + u);
        case MarkKind::Gamma: return std::pow(1.0 + b_ * u, -a_);
    }
    return 1.0;
}

double MarkDistribution::laplace_complement(double u) const {
    if (!(u >= 0.0)) throw DomainError("mark Laplace transform needs u >= 0");
    switch (kind_) {
        case MarkKind::Zero: return 0.0;
        case MarkKind::PointMass: return -std::expm1(-a_ * u);
        case MarkKind::Exponential: return u / (a_ + u);
        case MarkKind::Gamma: return -std::expm1(-a_ * std::log1p(b_ * u));
    }
    return 0.0;
}

MarkMoments MarkDistribution::moments() const noexcept {
    switch (kind_) {
        case MarkKind::Zero: return {0.0, 0.0};
        case MarkKind::PointMass: return {a_, a_ * a_};
        case MarkKind::Exponential: return {1.0 / a_, 2.0 / (a_ * a_)};
        case MarkKind::Gamma: return {a_ * b_, a_ * (a_ + 1.0) * b_ * b_};
    }
    return {};
}

double MarkDistribution::sample(RandomStream& rng) const {
    switch (kind_) {
        case MarkKind::Zero: return 0.0;
        case MarkKind::PointMass: return a_;
        case MarkKind::Exponential: return rng.exponential(a_);
        case MarkKind::Gamma: return rng.gamma(a_, b_);
    }
    return 0.0;
}

double mark_laplace(const MarkDistribution& dist, double u) { return dist.laplace(u); }
MarkMoments mark_moments(const MarkDistribution& dist) { return dist.moments(); }
double sample_mark(const MarkDistribution& dist, RandomStream& rng) { return dist.sample(rng); }

}  // namespace contagion
