#include "contagion/random.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "contagion/parallel.hpp"

namespace contagion {

namespace {

std::mt19937_64 seeded_engine(std::initializer_list<std::uint32_t> words) {
    std::seed_seq seq(words);
    return std::mt19937_64(seq);
}

std::uint32_t lo(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
std::uint32_t hi(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(seeded_engine({lo(seed), hi(seed)})) {}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t path_id, std::uint32_t tag)
    : engine_(seeded_engine({lo(seed), hi(seed), lo(path_id), hi(path_id), tag, 0x9e3779b9u})) {}

double RandomStream::uniform() {
    // 53 random bits mapped to (0, 1).
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) { return -std::log(uniform()) / rate; }

double RandomStream::gamma(double shape, double scale) {
    std::gamma_distribution<double> dist(shape, scale);
    return dist(engine_);
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("CONTAGION_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && value > 0) return static_cast<unsigned>(value);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace contagion
