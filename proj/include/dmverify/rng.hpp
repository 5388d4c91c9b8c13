#pragma once

#include <cstdint>
#include <random>

namespace dmv {

/// Deterministic random stream. A 64-bit master seed derives independent
/// substreams through a splitmix64 key schedule, so distinct workers and
/// distinct sampling sites never share state. All distributions are generated
/// in-library (never via std:: distribution objects) so that sequences are
/// identical across standard library implementations.
class SeedStream {
public:
    explicit SeedStream(std::uint64_t seed);

    /// Independent child stream; substream(i) != substream(j) for i != j and
    /// does not advance this stream.
    SeedStream substream(std::uint64_t index) const;

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on [a, b).
    double uniform(double a, double b);

    /// Standard normal via Box-Muller.
    double normal();

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

} // namespace dmv
