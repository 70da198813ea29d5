#pragma once

#include <cstdint>
#include <random>

namespace stwj {

/// SplitMix64 finalizer. Used to turn (seed, stream) pairs into independent
/// generator seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `stream` of `seed`. Distinct streams of one seed and
/// equal streams of distinct seeds give unrelated generators.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seedable, splittable generator. Sampling routines below are written out
/// explicitly instead of relying on <random> distributions, whose output is
/// implementation-defined; this keeps every stream bit-identical across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open();

    /// Standard normal (Box-Muller, second variate cached).
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace stwj
