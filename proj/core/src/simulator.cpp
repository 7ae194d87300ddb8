#include "contagion/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "contagion/errors.hpp"
#include "contagion/serialization.hpp"
#include "contagion/stationarity.hpp"

namespace contagion {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::External1: return "external1";
        case EventKind::External2: return "external2";
        case EventKind::Internal1: return "internal1";
        case EventKind::Internal2: return "internal2";
    }
    return "unknown";
}

std::array<long, 2> EventHistory::counts(double t) const {
    std::array<long, 2> n{0, 0};
    for (const auto& e : events) {
        if (e.time > t) break;
        if (e.kind == EventKind::Internal1) ++n[0];
        if (e.kind == EventKind::Internal2) ++n[1];
    }
    return n;
}

namespace {

void check_horizon(double horizon) {
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
        throw DomainError("horizon must be finite and >= 0");
}

EventHistory empty_history(const ModelParams& params, double horizon, std::uint64_t seed) {
    EventHistory h;
    h.params_hash = params_hash(params);
    h.horizon = horizon;
    h.seed = seed;
    return h;
}

/// Jumps a record adds to (lambda1, lambda2).
Intensity jump_of(const EventRecord& e) {
    switch (e.kind) {
        case EventKind::External1: return {e.mark_y, 0.0};
        case EventKind::External2: return {0.0, e.mark_y};
        default: return {e.mark_z1, e.mark_z2};
    }
}

EventRecord internal_event(const ModelParams& p, double t, int component, int generation,
                           RandomStream& rng) {
    EventRecord e;
    e.time = t;
    e.kind = component == 1 ? EventKind::Internal1 : EventKind::Internal2;
    e.mark_z1 = p.g(1, component).sample(rng);
    e.mark_z2 = p.g(2, component).sample(rng);
    e.generation = generation;
    return e;
}

void sort_events(std::vector<EventRecord>& events) {
    std::stable_sort(events.begin(), events.end(), [](const EventRecord& a, const EventRecord& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.kind < b.kind;
    });
}

EventHistory thinning(const ModelParams& p, double horizon, RandomStream& rng,
                      std::uint64_t seed) {
    require_valid(p);
    check_horizon(horizon);
    EventHistory h = empty_history(p, horizon, seed);
    double t = 0.0;
    double l1 = p.lambda0[0], l2 = p.lambda0[1];
    for (;;) {
        const double bound = l1 + l2 + p.rho1 + p.rho2;
        if (!(bound > 0.0)) break;
        const double w = rng.exponential(bound);
        t += w;
        if (t > horizon) break;
        l1 *= std::exp(-p.delta1 * w);
        l2 *= std::exp(-p.delta2 * w);
        const double u = rng.uniform() * bound;
        EventRecord e;
        e.time = t;
        e.generation = kThinningGeneration;
        if (u < p.rho1) {
            e.kind = EventKind::External1;
            e.mark_y = p.h1.sample(rng);
        } else if (u < p.rho1 + p.rho2) {
            e.kind = EventKind::External2;
            e.mark_y = p.h2.sample(rng);
        } else if (u < p.rho1 + p.rho2 + l1) {
            e = internal_event(p, t, 1, kThinningGeneration, rng);
        } else if (u < p.rho1 + p.rho2 + l1 + l2) {
            e = internal_event(p, t, 2, kThinningGeneration, rng);
        } else {
            continue;
        }
        const Intensity j = jump_of(e);
        l1 += j[0];
        l2 += j[1];
        h.events.push_back(e);
    }
    return h;
}

/// Points of rate a * exp(-delta (t - s)) on (s, horizon], by thinning
/// against the decaying bound.
template <class Emit>
void decaying_points(double a, double delta, double s, double horizon, RandomStream& rng,
                     Emit&& emit) {
    double t = s;
    double rate = a;
    while (rate > 0.0) {
        const double w = rng.exponential(rate);
        t += w;
        if (t > horizon) break;
        const double decay = std::exp(-delta * w);
        const bool accept = rng.uniform() < decay;
        rate *= decay;
        if (accept) emit(t);
    }
}

EventHistory cluster(const ModelParams& p, double horizon, int generations, RandomStream& rng,
                     std::uint64_t seed) {
    require_valid(p);
    check_horizon(horizon);
    if (generations < 0) throw DomainError("generations must be >= 0");
    EventHistory h = empty_history(p, horizon, seed);
    auto& out = h.events;

    // External shots.
    for (int k = 1; k <= 2; ++k) {
        const double rho = p.rho(k);
        if (rho <= 0.0) continue;
        for (double t = rng.exponential(rho); t <= horizon; t += rng.exponential(rho)) {
            EventRecord e;
            e.time = t;
            e.kind = k == 1 ? EventKind::External1 : EventKind::External2;
            e.mark_y = p.h(k).sample(rng);
            e.generation = 0;
            out.push_back(e);
        }
    }
    const std::size_t shots = out.size();

    // Immigrants: layer 0 events from the initial intensity and the shots.
    for (int k = 1; k <= 2; ++k) {
        auto emit = [&](double t) { out.push_back(internal_event(p, t, k, 0, rng)); };
        decaying_points(p.lambda0[k - 1], p.delta(k), 0.0, horizon, rng, emit);
        for (std::size_t i = 0; i < shots; ++i) {
            const EventRecord src = out[i];
            if (src.component() == k) decaying_points(src.mark_y, p.delta(k), src.time, horizon, rng, emit);
        }
    }

    std::size_t begin = shots;
    for (int g = 1; g <= generations && begin < out.size(); ++g) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            const EventRecord parent = out[i];
            for (int k = 1; k <= 2; ++k) {
                const double a = k == 1 ? parent.mark_z1 : parent.mark_z2;
                decaying_points(a, p.delta(k), parent.time, horizon, rng,
                                [&](double t) { out.push_back(internal_event(p, t, k, g, rng)); });
            }
        }
        begin = end;
    }
    sort_events(out);
    return h;
}

}  // namespace

EventHistory simulate_thinning(const ModelParams& params, double horizon, std::uint64_t seed) {
    RandomStream rng(seed);
    return thinning(params, horizon, rng, seed);
}

EventHistory simulate_thinning(const ModelParams& params, double horizon, RandomStream& rng) {
    return thinning(params, horizon, rng, 0);
}

EventHistory simulate_cluster(const ModelParams& params, double horizon, int generations,
                              std::uint64_t seed) {
    RandomStream rng(seed);
    return cluster(params, horizon, generations, rng, seed);
}

EventHistory simulate_cluster(const ModelParams& params, double horizon, int generations,
                              RandomStream& rng) {
    return cluster(params, horizon, generations, rng, 0);
}

namespace {

void check_time(const EventHistory& h, double t) {
    if (!(t >= 0.0) || t > h.horizon) throw DomainError("time outside [0, horizon]");
}

}  // namespace

Intensity intensity_at(const EventHistory& history, const ModelParams& params, double t) {
    check_time(history, t);
    Intensity out{params.lambda0[0] * std::exp(-params.delta1 * t),
                  params.lambda0[1] * std::exp(-params.delta2 * t)};
    for (const auto& e : history.events) {
        if (!(e.time < t)) break;
        const Intensity j = jump_of(e);
        out[0] += j[0] * std::exp(-params.delta1 * (t - e.time));
        out[1] += j[1] * std::exp(-params.delta2 * (t - e.time));
    }
    return out;
}

std::vector<Intensity> layer_intensities(const EventHistory& history, const ModelParams& params,
                                         double t, int layers) {
    check_time(history, t);
    if (layers < 1) throw DomainError("layers must be >= 1");
    std::vector<Intensity> out(static_cast<std::size_t>(layers), Intensity{0.0, 0.0});
    out[0] = {params.lambda0[0] * std::exp(-params.delta1 * t),
              params.lambda0[1] * std::exp(-params.delta2 * t)};
    for (const auto& e : history.events) {
        if (!(e.time < t)) break;
        if (e.generation < 0)
            throw DomainError("layer intensities need a history from the cluster simulator");
        const int layer = e.is_internal() ? e.generation + 1 : 0;
        if (layer >= layers) continue;
        const Intensity j = jump_of(e);
        out[layer][0] += j[0] * std::exp(-params.delta1 * (t - e.time));
        out[layer][1] += j[1] * std::exp(-params.delta2 * (t - e.time));
    }
    return out;
}

Intensity compensator(const EventHistory& history, const ModelParams& params, double t) {
    check_time(history, t);
    const double d1 = params.delta1, d2 = params.delta2;
    Intensity out{params.lambda0[0] * -std::expm1(-d1 * t) / d1,
                  params.lambda0[1] * -std::expm1(-d2 * t) / d2};
    for (const auto& e : history.events) {
        if (!(e.time < t)) break;
        const Intensity j = jump_of(e);
        out[0] += j[0] * -std::expm1(-d1 * (t - e.time)) / d1;
        out[1] += j[1] * -std::expm1(-d2 * (t - e.time)) / d2;
    }
    return out;
}

IntensityCursor::IntensityCursor(const EventHistory& history, const ModelParams& params)
    : history_(&history), params_(&params), value_{params.lambda0[0], params.lambda0[1]} {}

Intensity IntensityCursor::at(double t) {
    check_time(*history_, t);
    if (t < time_) throw DomainError("cursor queries must be nondecreasing");
    const auto& events = history_->events;
    const double d1 = params_->delta1, d2 = params_->delta2;
    while (next_ < events.size() && events[next_].time < t) {
        const EventRecord& e = events[next_++];
        const Intensity j = jump_of(e);
        value_[0] = value_[0] * std::exp(-d1 * (e.time - time_)) + j[0];
        value_[1] = value_[1] * std::exp(-d2 * (e.time - time_)) + j[1];
        time_ = e.time;
    }
    value_[0] *= std::exp(-d1 * (t - time_));
    value_[1] *= std::exp(-d2 * (t - time_));
    time_ = t;
    return value_;
}

double default_burn_in(const ModelParams& params) {
    require_stationary(params);
    const C2Result c2 = check_c2(params);
    return 20.0 / (1.0 - c2.radius) * std::max(1.0 / params.delta1, 1.0 / params.delta2);
}

}  // namespace contagion
