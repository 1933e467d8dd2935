#pragma once

#include <cstdint>

namespace afshar {

/// Photon-counting run parameters. The default rate matches a low-flux
/// source with one photon in the apparatus at a time.
struct CountingConfig {
    double photon_rate = 3.0e4; ///< events/second
    double duration = 0.0;      ///< seconds
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Per-photon outcome probabilities over the four mutually exclusive
/// detection categories. Values must be non-negative and sum to 1 within
/// 1e-12 (they are renormalized before sampling).
struct OutcomeProbabilities {
    double detector_1 = 0.0;
    double detector_2 = 0.0;
    double blocked = 0.0;
    double elsewhere = 0.0;
};

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

/// Monte Carlo detector counts for one scenario run. Categories partition
/// the emitted photons.
struct CountTally {
    std::uint64_t n_detector_1 = 0;
    std::uint64_t n_detector_2 = 0;
    std::uint64_t n_blocked = 0;
    std::uint64_t n_elsewhere = 0;

    std::uint64_t total() const {
        return n_detector_1 + n_detector_2 + n_blocked + n_elsewhere;
    }
    bool operator==(const CountTally&) const = default;
};

/// Wilson score interval at 95% for the proportion successes/trials.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Deterministic Poisson sample with mean rate * duration.
std::uint64_t sample_photon_count(const CountingConfig& config);

/// Poisson sample with the given mean from one RNG stream; mean 0 gives 0.
std::uint64_t sample_poisson(double mean, std::uint64_t seed, std::uint64_t stream);

/// Multinomial tally of n photons over the four categories. Each photon's
/// category is a pure function of (seed, stream, photon index), so the
/// tally is bit-identical for any worker count.
/// Throws DomainError on negative probabilities or a sum off by > 1e-12.
CountTally sample_outcomes(std::uint64_t n, const OutcomeProbabilities& probabilities,
                           std::uint64_t seed, std::uint64_t stream, int n_workers = 1);

/// Fractional reduction of total detector flux between two tallies of the
/// same geometry, with a propagated 95% confidence interval.
struct FluxReduction {
    double fraction = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// (without - with)/without on the detector counts.
/// Throws DomainError when the baseline detector flux is zero.
FluxReduction flux_reduction(const CountTally& tally_with_grid,
                             const CountTally& tally_without_grid);

/// Which-way estimator from two single-pinhole runs: the mean over both
/// runs of |n_correct - n_wrong| / (n_correct + n_wrong), using detector
/// counts only. The left run's correct detector is detector 1.
/// Throws DomainError if either run has zero detector counts.
double estimate_K(const CountTally& left_only, const CountTally& right_only);

} // namespace afshar
