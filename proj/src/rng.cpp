#include "kuramoto/rng.hpp"

namespace kuramoto {

double Rng::uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::uint64_t Rng::integer(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return eng_();
    // Rejection keeps the distribution exact.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return lo + x % span;
}

} // namespace kuramoto
