#include "dmverify/rng.hpp"

#include <cmath>
#include <numbers>

namespace dmv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

SeedStream::SeedStream(std::uint64_t seed)
    : seed_(seed), engine_(splitmix64(seed)) {}

SeedStream SeedStream::substream(std::uint64_t index) const {
    return SeedStream(splitmix64(seed_ ^ splitmix64(index + 1)));
}

std::uint64_t SeedStream::next_u64() {
    return engine_();
}

double SeedStream::uniform() {
    // 53 significant bits, uniform on [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeedStream::uniform(double a, double b) {
    return a + (b - a) * uniform();
}

double SeedStream::normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(phi);
    have_cached_normal_ = true;
    return r * std::cos(phi);
}

} // namespace dmv
