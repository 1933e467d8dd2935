#include "afshar/rng.hpp"

namespace afshar {

namespace {

// Philox-4x32-10 round constants (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3").
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = std::uint64_t(a) * b;
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

struct Block {
    std::uint32_t c0, c1, c2, c3;
};

Block philox4x32_10(std::uint32_t k0, std::uint32_t k1, Block ctr) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr.c0, hi0, lo0);
        mulhilo(kPhiloxM1, ctr.c2, hi1, lo1);
        ctr = {hi1 ^ ctr.c1 ^ k0, lo1, hi0 ^ ctr.c3 ^ k1, lo0};
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return ctr;
}

} // namespace

std::uint64_t CounterRng::bits(std::uint64_t index) const {
    const Block out = philox4x32_10(std::uint32_t(seed_), std::uint32_t(seed_ >> 32),
                                    {std::uint32_t(stream_), std::uint32_t(stream_ >> 32),
                                     std::uint32_t(index), std::uint32_t(index >> 32)});
    return (std::uint64_t(out.c0) << 32) | out.c1;
}

double CounterRng::uniform(std::uint64_t index) const {
    return double(bits(index) >> 11) * 0x1.0p-53;
}

} // namespace afshar
