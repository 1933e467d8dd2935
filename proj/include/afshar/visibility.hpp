#pragma once

#include <string>
#include <vector>

namespace afshar {

/// 1-D intensity samples across fringes: positions strictly increasing,
/// intensities non-negative, at least 3 samples.
struct IntensityProfile {
    std::vector<double> positions;   ///< meters
    std::vector<double> intensities; ///< power per unit length

    void validate() const;
};

/// Fringe visibilities obtained by the different methods, with enough
/// metadata to tell how each number was produced.
struct VisibilityReport {
    double v_standard = 0.0;               ///< from the sampled profile
    double v_flores_lower_bound = 0.0;     ///< square-profile lower bound
    double v_steuernagel_transmitted = 0.0;///< sin(a pi)/(pi (1-a))
    bool flores_degenerate = false;
    double loss_fraction = 0.0;            ///< L fed to the lower bound
    double covering_ratio = 0.0;           ///< a fed to both analyses
    std::string notes;
};

/// Greenberger-Yasin check: violated iff v^2 + k^2 > 1 + 1e-9.
struct DualityReport {
    double v = 0.0;
    double k = 0.0;
    double sum_of_squares = 0.0;
    bool violated = false;
};

/// Square-profile lower bound result. degenerate is set (and value is 0)
/// when the requested loss cannot be concentrated on the wire area without
/// the minima overtaking the maxima, i.e. L/a >= (1-L)/(1-a).
struct FloresBound {
    double value = 0.0;
    bool degenerate = false;
};

/// Standard fringe contrast (i_max - i_min)/(i_max + i_min).
/// Throws DomainError if both inputs are zero (undefined visibility),
/// if i_min > i_max (argument order), or if either is negative.
double visibility(double i_max, double i_min);

/// Visibility of a sampled profile: the profile is cut into consecutive
/// full periods of period_hint (half-periods at the edges are dropped),
/// i_max is the mean of the per-period maxima and i_min the mean of the
/// per-period minima. Throws InsufficientSpanError below 3 full periods.
double profile_visibility(const IntensityProfile& profile, double period_hint);

/// Lowest visibility of any non-negative intensity pattern that loses the
/// fraction L of its photons uniformly on the wire area fraction a: the
/// square pattern with the minima at L/a and the maxima at (1-L)/(1-a).
FloresBound flores_lower_bound(double loss_fraction, double wire_area_fraction);

/// Closed-form per-period transmitted intensities of a cos^2 fringe
/// pattern through a grating with covering ratio a:
/// (pi - a pi + sin(a pi))/(2 pi) with the wires on the minima and
/// (pi - a pi - sin(a pi))/(2 pi) with the wires on the maxima.
struct TransmittedIntensities {
    double i_t_max = 0.0;
    double i_t_min = 0.0;
};
TransmittedIntensities steuernagel_transmitted_intensities(double covering_ratio);

/// Visibility of the transmitted light, sin(a pi)/(pi (1-a)). Equals
/// visibility() applied to steuernagel_transmitted_intensities(a).
double steuernagel_visibility(double covering_ratio);

/// Which fringe placement a quadrature check integrates over.
enum class PhaseCase { Minima, Maxima };

/// Numeric quadrature of the per-period transmitted intensity:
/// cos^2 (wires at minima) or sin^2 (wires at maxima) integrated over the
/// slit opening |x| <= Lambda (1-a)/2 and normalized by the period.
/// Matches the closed forms to better than 1e-9.
double quadrature_check(double covering_ratio, PhaseCase phase_case);

/// Builds the duality report for one (V, K) pairing.
/// Throws DomainError if either input lies outside [0, 1].
DualityReport duality_check(double v, double k);

} // namespace afshar
