#pragma once

#include <string>
#include <vector>

namespace afshar {

/// Which of the two pinholes transmit light.
enum class OpenMask { Both, LeftOnly, RightOnly };

std::string to_string(OpenMask mask);

/// Pair of circular pinholes on the source plane, separated along x and
/// centered on the axis. The left pinhole sits at x = -separation/2.
/// relative_phase is applied to the right pinhole's amplitude.
struct PinholePair {
    double separation = 0.0;   ///< center-to-center, meters
    double diameter = 0.0;     ///< meters
    OpenMask open_mask = OpenMask::Both;
    double relative_phase = 0.0; ///< radians

    void validate() const;
};

/// Wire material model. Both variants remove amplitude; the flag is
/// bookkeeping for the loss report.
enum class WireMode { Absorbing, Reflecting };

std::string to_string(WireMode mode);

/// Periodic grid of opaque wire stripes across the fringe pattern.
///
/// Wire stripes run along y. With placement_phase = 0 the stripe centers
/// sit at the intensity minima of the ideal two-pinhole pattern,
/// x = (m + 1/2) * period; placement_phase = +-pi shifts them onto the
/// maxima. Only stripes inside the transverse extent (centered on the
/// axis) exist; stripes are clipped at the extent boundary.
struct WireGridSpec {
    double period = 0.0;          ///< fringe period Lambda, meters
    double covering_ratio = 0.0;  ///< a in (0,1); wire width = a * period
    double placement_phase = 0.0; ///< phi, radians
    double extent = 0.0;          ///< transverse span covered by the grid, meters
    WireMode mode = WireMode::Absorbing;
    /// Extra shift of the reference pattern from the pinholes' relative
    /// phase; the scenario runner fills this in.
    double pattern_phase = 0.0;

    void validate() const;
    /// Stripe center positions inside the extent, ascending.
    std::vector<double> wire_centers() const;
    double wire_width() const { return covering_ratio * period; }
};

/// Thin imaging lens. The lens plane sits object_distance downstream of
/// the source plane; the image plane image_distance beyond the lens.
struct LensSpec {
    double focal_length = 0.0;      ///< meters
    double aperture_diameter = 0.0; ///< meters
    double object_distance = 0.0;   ///< meters
    double image_distance = 0.0;    ///< meters

    /// Checks 1/o + 1/i = 1/f to 1e-9 relative, plus positivity.
    void validate() const;
    double magnification() const { return image_distance / object_distance; }
};

/// Two disjoint circular detector regions in the image plane, one per
/// pinhole image, plus an implicit "elsewhere" bucket. Region 1 collects
/// the image of the left pinhole.
struct DetectorRegions {
    double center_1 = 0.0; ///< x of region 1 center, meters (y = 0)
    double center_2 = 0.0; ///< x of region 2 center, meters (y = 0)
    double radius = 0.0;   ///< meters

    void validate() const;
};

} // namespace afshar
