#include "afshar/montecarlo.hpp"

#include "afshar/errors.hpp"
#include "afshar/rng.hpp"

#include <cmath>
#include <thread>
#include <vector>

namespace afshar {

namespace {

// Fixed logical stream ids so independent draws never collide.
constexpr std::uint64_t kStreamPhotonCount = 0x70686f746f6e6374ull;

constexpr double kZ95 = 1.959963984540054;

// Poisson sampling below this mean uses exponential-product inversion;
// above it, the transformed-rejection method (Hoermann's PTRS), which
// consumes a variable but seed-determined number of uniforms.
constexpr double kInversionCutoff = 10.0;

std::uint64_t poisson_inversion(double mean, CounterRng::Sequence& seq) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double product = 1.0;
    while (true) {
        product *= seq.next_uniform();
        if (product <= limit)
            return k;
        ++k;
    }
}

std::uint64_t poisson_ptrs(double mean, CounterRng::Sequence& seq) {
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    while (true) {
        const double u = seq.next_uniform() - 0.5;
        const double v = seq.next_uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return std::uint64_t(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            kf * log_mean - mean - std::lgamma(kf + 1.0))
            return std::uint64_t(kf);
    }
}

} // namespace

void CountingConfig::validate() const {
    if (!(photon_rate > 0.0))
        throw DomainError("photon rate must be positive");
    if (!(duration > 0.0))
        throw DomainError("counting duration must be positive");
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0)
        return {0.0, 1.0};
    const double n = double(trials);
    const double p = double(successes) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

std::uint64_t sample_poisson(double mean, std::uint64_t seed, std::uint64_t stream) {
    if (!(mean >= 0.0))
        throw DomainError("Poisson mean must be non-negative");
    if (mean == 0.0)
        return 0;
    CounterRng rng(seed, stream);
    auto seq = rng.sequence();
    if (mean < kInversionCutoff)
        return poisson_inversion(mean, seq);
    return poisson_ptrs(mean, seq);
}

std::uint64_t sample_photon_count(const CountingConfig& config) {
    config.validate();
    return sample_poisson(config.photon_rate * config.duration, config.rng_seed,
                          kStreamPhotonCount);
}

CountTally sample_outcomes(std::uint64_t n, const OutcomeProbabilities& probabilities,
                           std::uint64_t seed, std::uint64_t stream, int n_workers) {
    const double p[4] = {probabilities.detector_1, probabilities.detector_2,
                         probabilities.blocked, probabilities.elsewhere};
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0))
            throw DomainError("outcome probabilities must be non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw DomainError("outcome probabilities must sum to 1 within 1e-12");
    const double c0 = p[0] / sum;
    const double c1 = (p[0] + p[1]) / sum;
    const double c2 = (p[0] + p[1] + p[2]) / sum;

    if (n_workers < 1)
        throw DomainError("worker count must be at least 1");
    const CounterRng rng(seed, stream);

    // Each photon's category is a pure function of its index, so any
    // partition of the index range yields the same tally.
    const auto tally_range = [&](std::uint64_t lo, std::uint64_t hi, CountTally& out) {
        std::uint64_t k[4] = {0, 0, 0, 0};
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double u = rng.uniform(i);
            if (u < c0)
                ++k[0];
            else if (u < c1)
                ++k[1];
            else if (u < c2)
                ++k[2];
            else
                ++k[3];
        }
        out = {k[0], k[1], k[2], k[3]};
    };

    std::vector<CountTally> parts(static_cast<std::size_t>(n_workers));
    if (n_workers == 1) {
        tally_range(0, n, parts[0]);
    } else {
        std::vector<std::thread> threads;
        const std::uint64_t chunk = n / std::uint64_t(n_workers);
        for (int w = 0; w < n_workers; ++w) {
            const std::uint64_t lo = chunk * std::uint64_t(w);
            const std::uint64_t hi = w + 1 == n_workers ? n : lo + chunk;
            threads.emplace_back(tally_range, lo, hi, std::ref(parts[std::size_t(w)]));
        }
        for (auto& t : threads)
            t.join();
    }

    CountTally total;
    for (const CountTally& part : parts) {
        total.n_detector_1 += part.n_detector_1;
        total.n_detector_2 += part.n_detector_2;
        total.n_blocked += part.n_blocked;
        total.n_elsewhere += part.n_elsewhere;
    }
    return total;
}

FluxReduction flux_reduction(const CountTally& tally_with_grid,
                             const CountTally& tally_without_grid) {
    const double with = double(tally_with_grid.n_detector_1 + tally_with_grid.n_detector_2);
    const double without =
        double(tally_without_grid.n_detector_1 + tally_without_grid.n_detector_2);
    if (without <= 0.0)
        throw DomainError("flux reduction undefined: baseline detector flux is zero");

    FluxReduction result;
    result.fraction = (without - with) / without;
    if (with <= 0.0) {
        // Rule-of-three style bound when no photons survive.
        result.ci_low = 1.0 - 3.0 / without;
        result.ci_high = 1.0;
        return result;
    }
    // Log-normal interval for the count ratio of two Poisson totals.
    const double sigma = std::sqrt(1.0 / with + 1.0 / without);
    const double ratio = with / without;
    result.ci_low = 1.0 - ratio * std::exp(kZ95 * sigma);
    result.ci_high = 1.0 - ratio * std::exp(-kZ95 * sigma);
    return result;
}

double estimate_K(const CountTally& left_only, const CountTally& right_only) {
    const auto run_k = [](const CountTally& tally, bool correct_is_detector_1) {
        const double correct =
            double(correct_is_detector_1 ? tally.n_detector_1 : tally.n_detector_2);
        const double wrong =
            double(correct_is_detector_1 ? tally.n_detector_2 : tally.n_detector_1);
        if (correct + wrong <= 0.0)
            throw DomainError("which-way estimate undefined: no detector counts");
        return std::abs(correct - wrong) / (correct + wrong);
    };
    return 0.5 * (run_k(left_only, true) + run_k(right_only, false));
}

} // namespace afshar
