#include "contagion/time_grid.hpp"

#include <algorithm>
#include <cmath>

#include "contagion/errors.hpp"

namespace contagion {

namespace {

// Drop a final step that would be negligibly short.
void close_at(std::vector<double>& pts, double t_max, double last_step) {
    if (t_max - pts.back() < 1e-9 * last_step && pts.size() > 1) pts.pop_back();
    pts.push_back(t_max);
}

}  // namespace

TimeGrid TimeGrid::uniform(double t_max, double dt) {
    if (!(t_max > 0.0) || !(dt > 0.0)) throw DomainError("uniform grid needs t_max > 0, dt > 0");
    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    std::vector<double> pts;
    pts.reserve(steps + 1);
    for (std::size_t i = 0; i < steps; ++i) pts.push_back(static_cast<double>(i) * dt);
    close_at(pts, t_max, dt);
    return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::geometric(double t_max, const GeometricScheme& s) {
    if (!(t_max > 0.0) || !(s.dt0 > 0.0) || !(s.ratio >= 1.0) || !(s.dt_max >= s.dt0))
        throw DomainError("geometric grid needs t_max > 0, dt0 > 0, ratio >= 1, dt_max >= dt0");
    std::vector<double> pts{0.0};
    double h = s.dt0;
    double t = 0.0;
    while (t + h < t_max) {
        t += h;
        pts.push_back(t);
        h = std::min(h * s.ratio, s.dt_max);
    }
    close_at(pts, t_max, h);
    return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::for_rates(double t_max, double max_rate) {
    const double unit = 1.0 / max_rate;
    return geometric(t_max, {1e-4 * unit, 1.02, 0.05 * unit});
}

TimeGrid TimeGrid::from_points(std::vector<double> points) {
    if (points.size() < 2 || points.front() != 0.0)
        throw DomainError("grid must have at least two points and start at 0");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i] > points[i - 1])) throw DomainError("grid points must increase strictly");
    return TimeGrid(std::move(points));
}

TimeGrid TimeGrid::coarsened() const {
    std::vector<double> pts;
    pts.reserve(points_.size() / 2 + 2);
    for (std::size_t i = 0; i < points_.size(); i += 2) pts.push_back(points_[i]);
    if (pts.back() != points_.back()) pts.push_back(points_.back());
    if (pts.size() < 2) pts = {points_.front(), points_.back()};
    return TimeGrid(std::move(pts));
}

std::size_t TimeGrid::locate(double t) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), t);
    if (it == points_.begin()) return 0;
    return static_cast<std::size_t>(it - points_.begin()) - 1;
}

double interpolate(const TimeGrid& grid, std::span<const double> values, double t) {
    if (t <= grid[0]) return values[0];
    if (t >= grid.t_max()) return values[grid.size() - 1];
    const std::size_t i = grid.locate(t);
    const double w = (t - grid[i]) / (grid[i + 1] - grid[i]);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

}  // namespace contagion
