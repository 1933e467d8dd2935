#include "afshar/visibility.hpp"

#include "afshar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace afshar {

namespace {

constexpr double kPi = std::numbers::pi;

void check_covering_ratio(double a) {
    if (!(a > 0.0) || !(a < 1.0))
        throw DomainError("covering ratio must lie in (0, 1)");
}

} // namespace

void IntensityProfile::validate() const {
    if (positions.size() != intensities.size())
        throw DomainError("intensity profile: positions and intensities differ in length");
    if (positions.size() < 3)
        throw DomainError("intensity profile needs at least 3 samples");
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (!(positions[i] > positions[i - 1]))
            throw DomainError("intensity profile positions must be strictly increasing");
    for (double v : intensities)
        if (!(v >= 0.0))
            throw DomainError("intensity profile intensities must be non-negative");
}

double visibility(double i_max, double i_min) {
    if (!(i_min >= 0.0) || !(i_max >= 0.0))
        throw DomainError("visibility: intensities must be non-negative");
    if (i_min > i_max)
        throw DomainError("visibility: i_min exceeds i_max (arguments swapped?)");
    if (i_max + i_min == 0.0)
        throw DomainError("visibility undefined: both intensities are zero");
    return (i_max - i_min) / (i_max + i_min);
}

double profile_visibility(const IntensityProfile& profile, double period_hint) {
    profile.validate();
    if (!(period_hint > 0.0))
        throw DomainError("profile_visibility: period hint must be positive");
    const double span = profile.positions.back() - profile.positions.front();
    const int periods = int(std::floor(span / period_hint + 1e-9));
    if (periods < 3)
        throw InsufficientSpanError("profile_visibility: profile spans fewer than 3 full periods");

    // Complete periods only; the partial stretches at both edges are dropped.
    const double x0 = profile.positions.front();
    std::vector<double> maxima(periods, -std::numeric_limits<double>::infinity());
    std::vector<double> minima(periods, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < profile.positions.size(); ++i) {
        const double u = (profile.positions[i] - x0) / period_hint;
        const int k = int(std::floor(u));
        if (k < 0 || k >= periods)
            continue;
        maxima[k] = std::max(maxima[k], profile.intensities[i]);
        minima[k] = std::min(minima[k], profile.intensities[i]);
    }
    double i_max = 0.0;
    double i_min = 0.0;
    int used = 0;
    for (int k = 0; k < periods; ++k) {
        if (maxima[k] < minima[k])
            continue; // empty period window
        i_max += maxima[k];
        i_min += minima[k];
        ++used;
    }
    if (used < 3)
        throw InsufficientSpanError("profile_visibility: fewer than 3 populated periods");
    return visibility(i_max / used, i_min / used);
}

FloresBound flores_lower_bound(double loss_fraction, double wire_area_fraction) {
    if (!(loss_fraction >= 0.0) || !(loss_fraction < 1.0))
        throw DomainError("flores_lower_bound: loss fraction must lie in [0, 1)");
    check_covering_ratio(wire_area_fraction);
    const double minima_level = loss_fraction / wire_area_fraction;
    const double maxima_level = (1.0 - loss_fraction) / (1.0 - wire_area_fraction);
    if (minima_level >= maxima_level)
        return {0.0, true};
    return {(maxima_level - minima_level) / (maxima_level + minima_level), false};
}

TransmittedIntensities steuernagel_transmitted_intensities(double covering_ratio) {
    check_covering_ratio(covering_ratio);
    const double a = covering_ratio;
    const double s = std::sin(a * kPi);
    return {(kPi - a * kPi + s) / (2.0 * kPi), (kPi - a * kPi - s) / (2.0 * kPi)};
}

double steuernagel_visibility(double covering_ratio) {
    check_covering_ratio(covering_ratio);
    return std::sin(covering_ratio * kPi) / (kPi * (1.0 - covering_ratio));
}

double quadrature_check(double covering_ratio, PhaseCase phase_case) {
    check_covering_ratio(covering_ratio);
    // Per-period transmitted intensity: integrate the fringe profile over
    // the slit opening |u| <= (1-a)/2 in period-normalized coordinates.
    // Composite Simpson with ~2e4 panels is far below the 1e-9 target for
    // these smooth integrands.
    const auto integrand = [phase_case](double u) {
        const double c = std::cos(kPi * u);
        return phase_case == PhaseCase::Minima ? c * c : 1.0 - c * c;
    };
    const double b = 0.5 * (1.0 - covering_ratio);
    const int panels = 20000; // even
    const double h = 2.0 * b / panels;
    double sum = integrand(-b) + integrand(b);
    for (int i = 1; i < panels; ++i)
        sum += integrand(-b + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

DualityReport duality_check(double v, double k) {
    if (!(v >= 0.0) || !(v <= 1.0))
        throw DomainError("duality_check: V outside [0, 1]");
    if (!(k >= 0.0) || !(k <= 1.0))
        throw DomainError("duality_check: K outside [0, 1]");
    DualityReport report;
    report.v = v;
    report.k = k;
    report.sum_of_squares = v * v + k * k;
    report.violated = report.sum_of_squares > 1.0 + 1e-9;
    return report;
}

} // namespace afshar
