#ifndef ABC_RANDOM_HPP
#define ABC_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace abc {

/// Self-contained random stream owned by one worker.
///
/// Streams are seeded from the pair (base_seed, worker_index) so that a
/// parallel run is reproducible independent of thread scheduling. All
/// variate transforms are implemented here rather than with
/// std::*_distribution, whose output is implementation-defined; a given
/// (seed, worker) pair therefore yields the same draw sequence on every
/// platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t base_seed, std::uint64_t worker_index = 0) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(base_seed),
            static_cast<std::uint32_t>(base_seed >> 32),
            static_cast<std::uint32_t>(worker_index),
            static_cast<std::uint32_t>(worker_index >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal via Box-Muller. Two uniforms are consumed per draw
    /// and no spare is cached, so the stream state is the engine state alone.
    double normal() {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double exponential(double rate) {
        return -std::log(1.0 - uniform01()) / rate;
    }

    /// Index in [0, n) drawn from cumulative weight scan.
    std::size_t categorical(const double* weights, std::size_t n, double total) {
        const double u = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return n - 1;
    }

private:
    static constexpr double pi = 3.14159265358979323846;
    std::mt19937_64 engine_;
};

} // namespace abc

#endif // ABC_RANDOM_HPP
