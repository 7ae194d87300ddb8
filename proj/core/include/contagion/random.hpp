#pragma once

#include <cstdint>
#include <random>

namespace contagion {

/// Seeded pseudo-random source. One stream per path and per thread.
///
/// Ensemble members obtain independent streams with for_path(seed, id):
/// the engine is seeded through std::seed_seq from the 32-bit halves of
/// (seed, id) plus a tag word, so every path is reproducible in isolation.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);
    RandomStream(std::uint64_t seed, std::uint64_t path_id, std::uint32_t tag = 0);

    static RandomStream for_path(std::uint64_t seed, std::uint64_t path_id,
                                 std::uint32_t tag = 0) {
        return RandomStream(seed, path_id, tag);
    }

    /// Uniform on the open interval (0, 1).
    double uniform();
    double exponential(double rate);
    double gamma(double shape, double scale);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace contagion
