#pragma once

#include <string>
#include <string_view>

#include "contagion/random.hpp"

namespace contagion {

enum class MarkKind { Zero, PointMass, Exponential, Gamma };

std::string_view to_string(MarkKind kind);
MarkKind mark_kind_from_string(std::string_view name);

struct MarkMoments {
    double mean = 0.0;
    double second_moment = 0.0;
};

/// Law of a nonnegative jump size.
///
/// The catalogue is closed: every member has a closed-form Laplace
/// transform and finite first and second moments, which the stationary
/// moment formulas need. Adding a law means adding a MarkKind and filling
/// in laplace(), moments() and sample().
class MarkDistribution {
public:
    /// Zero law (point mass at 0).
    MarkDistribution() = default;

    static MarkDistribution zero() { return {}; }
    static MarkDistribution point_mass(double value);
    static MarkDistribution exponential(double rate);
    static MarkDistribution gamma(double shape, double scale);

    MarkKind kind() const noexcept { return kind_; }

    // Parameter accessors; meaning depends on kind():
    //   PointMass: value()      Exponential: rate()      Gamma: shape(), scale()
    double value() const noexcept { return a_; }
    double rate() const noexcept { return a_; }
    double shape() const noexcept { return a_; }
    double scale() const noexcept { return b_; }

    /// E[exp(-u X)], u >= 0.
    double laplace(double u) const;
    /// 1 - laplace(u) without cancellation for small u.
    double laplace_complement(double u) const;
    MarkMoments moments() const noexcept;
    double mean() const noexcept { return moments().mean; }
    double sample(RandomStream& rng) const;

    bool is_zero() const noexcept {
        return kind_ == MarkKind::Zero || (kind_ == MarkKind::PointMass && a_ == 0.0);
    }

    friend bool operator==(const MarkDistribution&, const MarkDistribution&) = default;

private:
    MarkDistribution(MarkKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    MarkKind kind_ = MarkKind::Zero;
    double a_ = 0.0;
    double b_ = 0.0;
};

double mark_laplace(const MarkDistribution& dist, double u);
MarkMoments mark_moments(const MarkDistribution& dist);
double sample_mark(const MarkDistribution& dist, RandomStream& rng);

}  // namespace contagion
