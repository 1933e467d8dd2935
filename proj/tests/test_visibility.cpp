#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afshar/errors.hpp"
#include "afshar/rng.hpp"
#include "afshar/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace afshar;

namespace {

constexpr double kPi = std::numbers::pi;

IntensityProfile sampled_profile(double period, int samples_per_period, int periods,
                                 double offset, double modulation) {
    IntensityProfile profile;
    const int n = samples_per_period * periods + 1;
    for (int i = 0; i < n; ++i) {
        const double x = i * period / samples_per_period;
        profile.positions.push_back(x);
        profile.intensities.push_back(offset + modulation * std::cos(2.0 * kPi * x / period));
    }
    return profile;
}

// Test-side fringe profile model for the brute-force bound checks: one
// period discretized into cells, the first `wire_cells` of which sit under
// the wires. Feasible profiles are non-negative with a fixed share L of
// the total in the wire cells.
struct DiscreteProfile {
    int wire_cells;
    std::vector<double> values;

    double vis() const {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        return (*hi - *lo) / (*hi + *lo);
    }
};

DiscreteProfile random_feasible_profile(int cells, int wire_cells, double loss,
                                        CounterRng::Sequence& seq) {
    DiscreteProfile p{wire_cells, std::vector<double>(std::size_t(cells), 0.0)};
    double wire_sum = 0.0;
    double open_sum = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double u = 0.05 + seq.next_uniform();
        p.values[std::size_t(i)] = u;
        (i < wire_cells ? wire_sum : open_sum) += u;
    }
    for (int i = 0; i < cells; ++i) {
        if (i < wire_cells)
            p.values[std::size_t(i)] *= loss * cells / wire_sum;
        else
            p.values[std::size_t(i)] *= (1.0 - loss) * cells / open_sum;
    }
    return p;
}

// Independent numeric minimization of the visibility over feasible
// profiles: mass transfers within a pool preserve feasibility; averaging
// the two chosen cells never raises the maximum or lowers the minimum.
double minimize_visibility(int cells, int wire_cells, double loss, std::uint64_t seed) {
    CounterRng rng(seed, 7001);
    auto seq = rng.sequence();
    DiscreteProfile p = random_feasible_profile(cells, wire_cells, loss, seq);
    const int moves = 80000;
    for (int m = 0; m < moves; ++m) {
        const bool wire_pool = seq.next_uniform() < 0.5;
        const int lo = wire_pool ? 0 : wire_cells;
        const int extent = wire_pool ? wire_cells : cells - wire_cells;
        const int i = lo + int(seq.next_uniform() * extent);
        const int j = lo + int(seq.next_uniform() * extent);
        if (i == j)
            continue;
        const double mean = 0.5 * (p.values[std::size_t(i)] + p.values[std::size_t(j)]);
        p.values[std::size_t(i)] = mean;
        p.values[std::size_t(j)] = mean;
    }
    return p.vis();
}

} // namespace

TEST_CASE("standard visibility formula") {
    CHECK(visibility(1.0, 0.0) == doctest::Approx(1.0));
    CHECK(visibility(1.0, 1.0) == doctest::Approx(0.0));
    CHECK(std::abs(visibility(0.49990, 0.45010) - 0.0524) < 1e-4);

    CHECK_THROWS_AS(visibility(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(visibility(0.3, 0.5), DomainError);
    CHECK_THROWS_AS(visibility(-0.1, -0.2), DomainError);
}

TEST_CASE("profile visibility from sampled fringes") {
    const double period = 0.65e-3;

    SUBCASE("ideal cos^2 fringes give visibility 1") {
        IntensityProfile profile;
        for (int i = 0; i <= 64 * 5; ++i) {
            const double x = i * period / 64.0;
            const double c = std::cos(kPi * x / period);
            profile.positions.push_back(x);
            profile.intensities.push_back(c * c);
        }
        CHECK(profile_visibility(profile, period) == doctest::Approx(1.0).epsilon(1e-3));
    }

    SUBCASE("constant profile has no contrast") {
        IntensityProfile profile = sampled_profile(period, 32, 4, 1.0, 0.0);
        CHECK(profile_visibility(profile, period) == doctest::Approx(0.0));
    }

    SUBCASE("partial modulation") {
        IntensityProfile profile = sampled_profile(period, 64, 5, 0.9, 0.1);
        CHECK(std::abs(profile_visibility(profile, period) - 1.0 / 9.0) < 1e-3);
    }

    SUBCASE("too short a span is rejected") {
        IntensityProfile profile = sampled_profile(period, 64, 2, 0.9, 0.1);
        CHECK_THROWS_AS(profile_visibility(profile, period), InsufficientSpanError);
    }

    SUBCASE("invalid profiles are rejected") {
        IntensityProfile bad;
        bad.positions = {0.0, 1.0, 0.5};
        bad.intensities = {1.0, 1.0, 1.0};
        CHECK_THROWS_AS(profile_visibility(bad, period), DomainError);
        bad.positions = {0.0, 0.5, 1.0};
        bad.intensities = {1.0, -1.0, 1.0};
        CHECK_THROWS_AS(profile_visibility(bad, period), DomainError);
    }
}

TEST_CASE("square-profile lower bound: closed form") {
    SUBCASE("no loss means perfect visibility") {
        for (double a : {0.01, 0.05, 0.3, 0.9})
            CHECK(flores_lower_bound(0.0, a).value == doctest::Approx(1.0));
    }

    SUBCASE("reference values") {
        const FloresBound b = flores_lower_bound(0.01, 0.05);
        CHECK_FALSE(b.degenerate);
        CHECK(std::abs(b.value - 0.678) < 1e-3);

        // Solving the closed form for value 0.64 at L = 1% lands near a = 0.044.
        CHECK(std::abs(flores_lower_bound(0.01, 0.044).value - 0.64) < 5e-3);
    }

    SUBCASE("degenerate regime reports zero with a flag") {
        const FloresBound b = flores_lower_bound(0.5, 0.3);
        CHECK(b.degenerate);
        CHECK(b.value == 0.0);
    }

    SUBCASE("domain checks") {
        CHECK_THROWS_AS(flores_lower_bound(1.0, 0.05), DomainError);
        CHECK_THROWS_AS(flores_lower_bound(-0.1, 0.05), DomainError);
        CHECK_THROWS_AS(flores_lower_bound(0.01, 0.0), DomainError);
        CHECK_THROWS_AS(flores_lower_bound(0.01, 1.0), DomainError);
    }

    SUBCASE("monotonicity: decreasing in L, increasing in a") {
        CounterRng rng(11, 1);
        auto seq = rng.sequence();
        for (int trial = 0; trial < 200; ++trial) {
            const double a = 0.02 + 0.4 * seq.next_uniform();
            const double l_max = a / (1.0 + a); // stays non-degenerate
            const double l = 0.8 * l_max * seq.next_uniform();
            const double dl = 0.1 * (l_max - l);
            const double da = 0.1 * a;
            CHECK(flores_lower_bound(l + dl, a).value < flores_lower_bound(l, a).value);
            if (l > 0.0)
                CHECK(flores_lower_bound(l, a + da).value > flores_lower_bound(l, a).value);
        }
    }
}

TEST_CASE("square-profile lower bound: brute-force oracle") {
    const int cells = 1000;
    const int wire_cells = 50; // a = 0.05
    const double loss = 0.01;
    const double closed = flores_lower_bound(loss, 0.05).value;

    SUBCASE("the explicit square profile attains the bound") {
        DiscreteProfile square{wire_cells, std::vector<double>(cells)};
        for (int i = 0; i < cells; ++i)
            square.values[std::size_t(i)] =
                i < wire_cells ? loss / 0.05 : (1.0 - loss) / 0.95;
        CHECK(square.vis() == doctest::Approx(closed).epsilon(1e-12));
    }

    SUBCASE("1000 random feasible profiles never beat the square profile") {
        CounterRng rng(42, 2);
        auto seq = rng.sequence();
        for (int trial = 0; trial < 1000; ++trial) {
            const DiscreteProfile p = random_feasible_profile(cells, wire_cells, loss, seq);
            CHECK(p.vis() >= closed - 1e-12);
        }
    }

    SUBCASE("numeric minimization converges to the closed form") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            const double best = minimize_visibility(cells, wire_cells, loss, seed);
            CHECK(best == doctest::Approx(closed).epsilon(1e-6));
        }
    }
}

TEST_CASE("transmitted intensities: closed forms against quadrature") {
    SUBCASE("reference values at a = 0.05") {
        const TransmittedIntensities t = steuernagel_transmitted_intensities(0.05);
        CHECK(std::abs(t.i_t_max - 0.49990) < 1e-5);
        CHECK(std::abs(t.i_t_min - 0.45010) < 1e-5);
    }

    SUBCASE("vanishing grating keeps half the per-period power in each case") {
        const TransmittedIntensities t = steuernagel_transmitted_intensities(1e-9);
        CHECK(t.i_t_max == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(t.i_t_min == doctest::Approx(0.5).epsilon(1e-8));
    }

    SUBCASE("half-covered grating") {
        const TransmittedIntensities t = steuernagel_transmitted_intensities(0.5);
        CHECK(std::abs(t.i_t_max - 0.40915) < 1e-5);
        CHECK(std::abs(t.i_t_min - 0.09085) < 1e-5);
    }

    SUBCASE("quadrature matches the closed forms to 1e-9 across a") {
        for (int i = 1; i <= 50; ++i) {
            const double a = 0.01 * i;
            const TransmittedIntensities t = steuernagel_transmitted_intensities(a);
            CHECK(std::abs(quadrature_check(a, PhaseCase::Minima) - t.i_t_max) < 1e-9);
            CHECK(std::abs(quadrature_check(a, PhaseCase::Maxima) - t.i_t_min) < 1e-9);
        }
    }

    SUBCASE("the two cases sum to 1 - a") {
        for (double a : {0.01, 0.05, 0.123, 0.25, 0.5, 0.77, 0.99}) {
            const double sum = quadrature_check(a, PhaseCase::Minima) +
                               quadrature_check(a, PhaseCase::Maxima);
            CHECK(std::abs(sum - (1.0 - a)) < 1e-9);
        }
    }
}

TEST_CASE("transmitted visibility") {
    CHECK(std::abs(steuernagel_visibility(0.05) - 0.0524) < 1e-4);
    CHECK(std::abs(steuernagel_visibility(0.5) - 0.6366) < 1e-4);

    SUBCASE("small-a behaviour: V_t tends to a") {
        for (double a : {1e-6, 1e-4, 1e-3})
            CHECK(steuernagel_visibility(a) / a == doctest::Approx(1.0).epsilon(1e-2));
    }

    SUBCASE("identical to the standard formula on the closed-form intensities") {
        CounterRng rng(5, 3);
        auto seq = rng.sequence();
        for (int trial = 0; trial < 100; ++trial) {
            const double a = 0.001 + 0.998 * seq.next_uniform();
            const TransmittedIntensities t = steuernagel_transmitted_intensities(a);
            CHECK(std::abs(steuernagel_visibility(a) - visibility(t.i_t_max, t.i_t_min)) <
                  1e-12);
        }
    }

    SUBCASE("domain") {
        CHECK_THROWS_AS(steuernagel_visibility(0.0), DomainError);
        CHECK_THROWS_AS(steuernagel_visibility(1.0), DomainError);
    }
}

TEST_CASE("duality check") {
    SUBCASE("pure wave saturates the bound") {
        const DualityReport r = duality_check(1.0, 0.0);
        CHECK(r.sum_of_squares == doctest::Approx(1.0));
        CHECK_FALSE(r.violated);
    }

    SUBCASE("high visibility bound with near-perfect which-way flags a violation") {
        const DualityReport r = duality_check(0.64, 1.0);
        CHECK(r.sum_of_squares == doctest::Approx(1.4096));
        CHECK(r.violated);
    }

    SUBCASE("transmission visibility with near-perfect which-way stays within the bound") {
        const DualityReport r = duality_check(0.0524, 0.9986);
        CHECK(r.sum_of_squares == doctest::Approx(1.0).epsilon(1e-3));
        CHECK_FALSE(r.violated);
    }

    SUBCASE("domain") {
        CHECK_THROWS_AS(duality_check(1.2, 0.5), DomainError);
        CHECK_THROWS_AS(duality_check(0.5, -0.1), DomainError);
    }

    SUBCASE("flag fires exactly beyond the tolerance") {
        CHECK_FALSE(duality_check(1.0, 0.0).violated);
        CHECK(duality_check(1.0, 1e-4).violated);
    }
}
