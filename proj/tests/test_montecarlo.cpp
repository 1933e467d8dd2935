#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afshar/errors.hpp"
#include "afshar/montecarlo.hpp"
#include "afshar/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace afshar;

TEST_CASE("counter rng basics") {
    const CounterRng rng(123, 7);

    SUBCASE("pure function of (seed, stream, index)") {
        CHECK(rng.bits(0) == CounterRng(123, 7).bits(0));
        CHECK(rng.bits(1) != rng.bits(0));
        CHECK(CounterRng(123, 8).bits(0) != rng.bits(0));
        CHECK(CounterRng(124, 7).bits(0) != rng.bits(0));
    }

    SUBCASE("uniforms live in [0,1) with the right mean") {
        double sum = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform(std::uint64_t(i));
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            sum += u;
        }
        // 3 sigma for the mean of n uniforms is 3/sqrt(12 n).
        CHECK(std::abs(sum / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
    }

    SUBCASE("sequence adapter walks the counter") {
        auto seq = rng.sequence();
        CHECK(seq.next_bits() == rng.bits(0));
        CHECK(seq.next_bits() == rng.bits(1));
    }
}

TEST_CASE("poisson sampling") {
    SUBCASE("zero mean yields zero") {
        CHECK(sample_poisson(0.0, 1, 2) == 0);
    }

    SUBCASE("fixed seed repeats exactly") {
        for (double mean : {0.5, 5.0, 3.0e4})
            CHECK(sample_poisson(mean, 99, 4) == sample_poisson(mean, 99, 4));
    }

    SUBCASE("moments at the counting rate") {
        const double mean = 3.0e4;
        const int trials = 1000;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double k = double(sample_poisson(mean, std::uint64_t(t), 11));
            sum += k;
            sum_sq += k * k;
        }
        const double sample_mean = sum / trials;
        const double sample_var = sum_sq / trials - sample_mean * sample_mean;
        CHECK(std::abs(sample_mean - mean) < 3.0 * std::sqrt(mean / trials));
        CHECK(std::abs(sample_var - mean) < 0.2 * mean);
    }

    SUBCASE("moments on the small-mean path") {
        const double mean = 3.0;
        const int trials = 4000;
        double sum = 0.0;
        for (int t = 0; t < trials; ++t)
            sum += double(sample_poisson(mean, std::uint64_t(t), 12));
        CHECK(std::abs(sum / trials - mean) < 3.0 * std::sqrt(mean / trials));
    }

    SUBCASE("photon count uses rate * duration") {
        CountingConfig config;
        config.photon_rate = 3.0e4;
        config.duration = 1.0;
        config.rng_seed = 5;
        const std::uint64_t n = sample_photon_count(config);
        CHECK(n == sample_photon_count(config));
        CHECK(n > 28000);
        CHECK(n < 32000);

        config.duration = -1.0;
        CHECK_THROWS_AS(sample_photon_count(config), DomainError);
    }
}

TEST_CASE("multinomial outcome sampling") {
    SUBCASE("degenerate distribution sends every photon to detector 1") {
        const CountTally t = sample_outcomes(1000, {1.0, 0.0, 0.0, 0.0}, 1, 2);
        CHECK(t.n_detector_1 == 1000);
        CHECK(t.total() == 1000);
    }

    SUBCASE("even split matches binomial moments") {
        const std::uint64_t n = 1000000;
        const CountTally t = sample_outcomes(n, {0.5, 0.5, 0.0, 0.0}, 7, 3);
        CHECK(t.total() == n);
        CHECK(std::abs(double(t.n_detector_1) - 500000.0) < 3.0 * 500.0);
        CHECK(std::abs(double(t.n_detector_2) - 500000.0) < 3.0 * 500.0);
        CHECK(t.n_blocked == 0);
    }

    SUBCASE("identical seeds give identical tallies for 1, 2 and 8 workers") {
        const OutcomeProbabilities p{0.47, 0.46, 0.02, 0.05};
        const CountTally t1 = sample_outcomes(900001, p, 21, 5, 1);
        const CountTally t2 = sample_outcomes(900001, p, 21, 5, 2);
        const CountTally t8 = sample_outcomes(900001, p, 21, 5, 8);
        CHECK(t1 == t2);
        CHECK(t1 == t8);
    }

    SUBCASE("categories always partition the photons") {
        const CounterRng rng(3, 9);
        auto seq = rng.sequence();
        for (int trial = 0; trial < 20; ++trial) {
            double p[4];
            double sum = 0.0;
            for (double& v : p)
                sum += (v = 0.01 + seq.next_uniform());
            for (double& v : p)
                v /= sum;
            const std::uint64_t n = 1000 + std::uint64_t(seq.next_uniform() * 100000);
            const CountTally t =
                sample_outcomes(n, {p[0], p[1], p[2], p[3]}, 17, std::uint64_t(trial));
            CHECK(t.total() == n);
        }
    }

    SUBCASE("estimates converge to the probabilities (3-sigma, 100 seeded trials)") {
        const OutcomeProbabilities p{0.484, 0.483, 0.003, 0.03};
        const std::uint64_t n = 1000000;
        int within = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const CountTally t = sample_outcomes(n, p, 1000 + std::uint64_t(trial), 1);
            const auto ok = [&](std::uint64_t k, double prob) {
                const double sigma = std::sqrt(prob * (1.0 - prob) * double(n));
                return std::abs(double(k) - prob * double(n)) <= 3.0 * sigma;
            };
            if (ok(t.n_detector_1, p.detector_1) && ok(t.n_detector_2, p.detector_2) &&
                ok(t.n_blocked, p.blocked) && ok(t.n_elsewhere, p.elsewhere))
                ++within;
        }
        CHECK(within >= 99);
    }

    SUBCASE("domain checks") {
        CHECK_THROWS_AS(sample_outcomes(10, {-0.1, 0.6, 0.3, 0.2}, 1, 1), DomainError);
        CHECK_THROWS_AS(sample_outcomes(10, {0.5, 0.5, 0.1, 0.0}, 1, 1), DomainError);
        CHECK_THROWS_AS(sample_outcomes(10, {0.5, 0.5, 0.0, 0.0}, 1, 1, 0), DomainError);
    }
}

TEST_CASE("wilson intervals") {
    SUBCASE("always contain the point estimate") {
        const CounterRng rng(8, 1);
        auto seq = rng.sequence();
        for (int trial = 0; trial < 200; ++trial) {
            const std::uint64_t n = 1 + std::uint64_t(seq.next_uniform() * 1000000);
            const std::uint64_t k = std::uint64_t(seq.next_uniform() * double(n + 1));
            const WilsonInterval w = wilson_interval(k, n);
            const double p = double(k) / double(n);
            CHECK(w.low <= p + 1e-15);
            CHECK(w.high >= p - 1e-15);
            CHECK(w.low >= 0.0);
            CHECK(w.high <= 1.0);
        }
    }

    SUBCASE("empty tally collapses to the full range") {
        const WilsonInterval w = wilson_interval(0, 0);
        CHECK(w.low == 0.0);
        CHECK(w.high == 1.0);
    }
}

TEST_CASE("flux reduction") {
    SUBCASE("identical tallies give zero with an interval straddling zero") {
        const CountTally t{450000, 450000, 0, 100000};
        const FluxReduction r = flux_reduction(t, t);
        CHECK(r.fraction == doctest::Approx(0.0));
        CHECK(r.ci_low < 0.0);
        CHECK(r.ci_high > 0.0);
    }

    SUBCASE("14 percent fewer detector counts") {
        const CountTally with{430000, 430000, 60000, 80000};
        const CountTally without{500000, 500000, 0, 0};
        const FluxReduction r = flux_reduction(with, without);
        CHECK(r.fraction == doctest::Approx(0.14));
        CHECK(r.ci_low < 0.14);
        CHECK(r.ci_high > 0.14);
        CHECK(r.ci_high - r.ci_low < 0.01);
    }

    SUBCASE("zero baseline is undefined") {
        const CountTally empty{0, 0, 0, 100};
        const CountTally some{10, 10, 0, 0};
        CHECK_THROWS_AS(flux_reduction(some, empty), DomainError);
    }
}

TEST_CASE("which-way estimator") {
    SUBCASE("perfect imaging") {
        const CountTally left{1000, 0, 0, 0};
        const CountTally right{0, 1000, 0, 0};
        CHECK(estimate_K(left, right) == doctest::Approx(1.0));
    }

    SUBCASE("fully mixed") {
        const CountTally left{500, 500, 0, 0};
        const CountTally right{500, 500, 0, 0};
        CHECK(estimate_K(left, right) == doctest::Approx(0.0));
    }

    SUBCASE("stays in [0,1] for arbitrary tallies") {
        const CounterRng rng(14, 2);
        auto seq = rng.sequence();
        for (int trial = 0; trial < 200; ++trial) {
            const CountTally left{std::uint64_t(seq.next_uniform() * 1000) + 1,
                                  std::uint64_t(seq.next_uniform() * 1000), 0, 0};
            const CountTally right{std::uint64_t(seq.next_uniform() * 1000),
                                   std::uint64_t(seq.next_uniform() * 1000) + 1, 0, 0};
            const double k = estimate_K(left, right);
            CHECK(k >= 0.0);
            CHECK(k <= 1.0);
        }
    }

    SUBCASE("no detector counts is undefined") {
        const CountTally empty{0, 0, 100, 0};
        const CountTally some{10, 10, 0, 0};
        CHECK_THROWS_AS(estimate_K(empty, some), DomainError);
        CHECK_THROWS_AS(estimate_K(some, empty), DomainError);
    }
}
