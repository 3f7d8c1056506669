#pragma once

#include <cstdint>
#include <cmath>
#include <limits>

namespace gmflou {

/// Identifies one replica's independent random stream.
struct SeedLineage {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_index = 0;

    friend bool operator==(const SeedLineage&, const SeedLineage&) = default;
};

/// xoshiro256** engine. Satisfies UniformRandomBitGenerator.
///
/// A stream is derived from a SeedLineage by hashing (root_seed, stream_index)
/// through splitmix64, so replica k can be generated on any thread in any
/// order and always yields the same sequence.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(SeedLineage lineage);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Variate generators on top of a stream. Written in-project so that replays
/// are bit-identical across standard library implementations.
class Sampler {
public:
    explicit Sampler(SeedLineage lineage) : engine_(lineage) {}

    /// Uniform on the open interval (0, 1).
    double uniform();
    double standard_normal();
    /// Gamma(shape, rate = 1).
    double gamma(double shape);
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
    std::uint64_t poisson(double mean);

    Xoshiro256& engine() { return engine_; }

private:
    std::uint64_t poisson_ptrs(double mean);

    Xoshiro256 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gmflou
