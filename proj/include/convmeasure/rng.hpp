#pragma once

#include <cstdint>
#include <random>

namespace convmeasure {

using Rng = std::mt19937_64;

/// Generator for draw `index` of a run seeded with `seed`.
///
/// Every batch sampler gives draw i its own stream, so results depend only on
/// (seed, i) and never on the number of workers or the scheduling order.
inline Rng stream(std::uint64_t seed, std::uint64_t index)
{
    // splitmix64 finalizer, applied twice to decorrelate neighbouring indices
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return Rng(mix(mix(seed) ^ mix(index ^ 0x5851f42d4c957f2dULL)));
}

} // namespace convmeasure
