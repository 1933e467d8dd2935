#pragma once

#include <cstdint>

namespace afshar {

/// Counter-based random number generator (Philox-4x32-10). Every draw is a
/// pure function of (seed, stream, index), so independent logical streams
/// can be split off without coordination and parallel consumers produce
/// bit-identical results for any work partition.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// 64 uniformly distributed bits for the given counter value.
    std::uint64_t bits(std::uint64_t index) const;

    /// Uniform double in [0, 1) from the top 53 bits of bits(index).
    double uniform(std::uint64_t index) const;

    /// Stateful adapter for consumers that need a plain sequence.
    class Sequence {
    public:
        explicit Sequence(const CounterRng& rng, std::uint64_t start = 0)
            : rng_(&rng), index_(start) {}
        double next_uniform() { return rng_->uniform(index_++); }
        std::uint64_t next_bits() { return rng_->bits(index_++); }

    private:
        const CounterRng* rng_;
        std::uint64_t index_;
    };

    Sequence sequence(std::uint64_t start = 0) const { return Sequence(*this, start); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

} // namespace afshar
