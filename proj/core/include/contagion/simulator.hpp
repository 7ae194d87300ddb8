#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "contagion/params.hpp"
#include "contagion/random.hpp"

namespace contagion {

/// External k: a shot of the external Poisson input into intensity k.
/// Internal k: a point of N^k.
enum class EventKind : std::uint8_t { External1 = 0, External2 = 1, Internal1 = 2, Internal2 = 3 };

std::string_view to_string(EventKind kind);

inline constexpr int kThinningGeneration = -1;

struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::External1;
    double mark_y = 0.0;   ///< external shot size (External k)
    double mark_z1 = 0.0;  ///< jump added to intensity 1 (Internal k)
    double mark_z2 = 0.0;  ///< jump added to intensity 2 (Internal k)
    /// Cluster layer: 0 for external shots and immigrant events, g for
    /// events born to a layer g-1 parent. kThinningGeneration when the
    /// thinning simulator produced the record.
    int generation = 0;

    bool is_internal() const noexcept {
        return kind == EventKind::Internal1 || kind == EventKind::Internal2;
    }
    /// Component 1 or 2 the record belongs to.
    int component() const noexcept {
        return (kind == EventKind::External1 || kind == EventKind::Internal1) ? 1 : 2;
    }
};

/// Events ordered by time; simultaneous records in EventKind order, then
/// in insertion order.
struct EventHistory {
    std::string params_hash;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::vector<EventRecord> events;

    /// N^1_t, N^2_t (internal events with time <= t).
    std::array<long, 2> counts(double t) const;
};

using Intensity = std::array<double, 2>;

EventHistory simulate_thinning(const ModelParams& params, double horizon, std::uint64_t seed);
EventHistory simulate_thinning(const ModelParams& params, double horizon, RandomStream& rng);

/// Branching construction truncated after `generations` offspring layers
/// (event layers 0..generations).
EventHistory simulate_cluster(const ModelParams& params, double horizon, int generations,
                              std::uint64_t seed);
EventHistory simulate_cluster(const ModelParams& params, double horizon, int generations,
                              RandomStream& rng);

/// Intensity at t from every record strictly before t. O(events).
Intensity intensity_at(const EventHistory& history, const ModelParams& params, double t);

/// Intensities of cluster layers 0..layers-1 at t: layer 0 is the
/// decayed initial value plus external shots, layer g the contributions of
/// generation g-1 events. Requires a cluster history.
std::vector<Intensity> layer_intensities(const EventHistory& history, const ModelParams& params,
                                         double t, int layers);

/// Exact integrated intensity over [0, t].
Intensity compensator(const EventHistory& history, const ModelParams& params, double t);

/// Incremental evaluation for nondecreasing query times.
class IntensityCursor {
public:
    IntensityCursor(const EventHistory& history, const ModelParams& params);

    Intensity at(double t);

private:
    const EventHistory* history_;
    const ModelParams* params_;
    std::size_t next_ = 0;
    double time_ = 0.0;
    Intensity value_{};
};

/// Read-only view of a history as an intensity path.
class IntensityPath {
public:
    IntensityPath(const EventHistory& history, const ModelParams& params)
        : history_(&history), params_(&params) {}

    Intensity operator()(double t) const { return intensity_at(*history_, *params_, t); }
    IntensityCursor cursor() const { return IntensityCursor(*history_, *params_); }

private:
    const EventHistory* history_;
    const ModelParams* params_;
};

/// 20/(1 - radius) * max(1/delta1, 1/delta2). Throws NonStationaryError
/// when the radius is >= 1.
double default_burn_in(const ModelParams& params);

}  // namespace contagion
