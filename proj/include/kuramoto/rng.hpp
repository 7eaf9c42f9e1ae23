#pragma once

#include <cstdint>
#include <random>

namespace kuramoto {

// MT19937-64 with the reference seeding. Doubles take the top 53 bits of one draw,
// which keeps replays identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Substream for instance `index` of a campaign seeded with `seed`.
    static Rng substream(std::uint64_t seed, std::uint64_t index) { return Rng(seed + index); }

    std::uint64_t next() { return eng_(); }
    double uniform01();
    double uniform(double lo, double hi);
    // Uniform integer in [lo, hi].
    std::uint64_t integer(std::uint64_t lo, std::uint64_t hi);

private:
    std::mt19937_64 eng_;
};

} // namespace kuramoto
