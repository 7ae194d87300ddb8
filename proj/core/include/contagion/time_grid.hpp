#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace contagion {

struct UniformScheme {
    double dt = 1e-3;
};

/// Steps start at dt0, grow by `ratio` and are capped at dt_max.
struct GeometricScheme {
    double dt0 = 1e-4;
    double ratio = 1.02;
    double dt_max = 0.05;
};

/// Strictly increasing time points from 0 to t_max inclusive.
class TimeGrid {
public:
    static TimeGrid uniform(double t_max, double dt);
    static TimeGrid geometric(double t_max, const GeometricScheme& scheme);
    /// Geometric defaults scaled to the fastest decay rate.
    static TimeGrid for_rates(double t_max, double max_rate);
    /// Explicit points; must start at 0 and be strictly increasing.
    static TimeGrid from_points(std::vector<double> points);

    double t_max() const noexcept { return points_.back(); }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    std::span<const double> points() const noexcept { return points_; }

    /// Every other point, always keeping the last one.
    TimeGrid coarsened() const;

    /// Index of the last point <= t.
    std::size_t locate(double t) const;

private:
    explicit TimeGrid(std::vector<double> points) : points_(std::move(points)) {}
    std::vector<double> points_;
};

/// Linear interpolation of grid values at t.
double interpolate(const TimeGrid& grid, std::span<const double> values, double t);

}  // namespace contagion
