#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sce {

inline constexpr double kPi = 3.14159265358979323846;

// Raised when an input is structurally valid but degenerate for the requested
// operation (e.g. antisymmetrization annihilates the function).
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

// Global switch between the serial reference kernels and the OpenMP ones.
// Both produce bit-identical results; the switch exists for testing and
// benchmarking.
std::atomic<bool>& parallel_flag();
inline bool parallel_enabled() { return parallel_flag().load(std::memory_order_relaxed); }
inline void set_parallel(bool on) { parallel_flag().store(on, std::memory_order_relaxed); }

// Deterministic uniform generator (splitmix64), used for randomized test
// instances so that a fixed seed gives identical streams on every platform.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

}  // namespace sce
