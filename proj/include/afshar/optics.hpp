#pragma once

#include "afshar/apparatus.hpp"
#include "afshar/field.hpp"

#include <vector>

namespace afshar {

/// Result of one free-space propagation step. filtered_power is the power
/// removed by the evanescent cutoff and the anti-wraparound band limit;
/// power_in = total_power(field) + filtered_power up to FFT roundoff.
struct PropagationResult {
    Field2D field;
    double filtered_power = 0.0;
};

/// Power bookkeeping for one wire-grid masking step. Fractions are in
/// [0,1]; blocked_power + transmitted power equals the incident power.
/// blocked_fraction_on_extent normalizes by the power incident on the
/// grid's transverse extent, which is the per-grating-window loss used
/// by the transmission-visibility analysis.
struct GridLossReport {
    double incident_power = 0.0;
    double incident_on_extent = 0.0;
    double blocked_power = 0.0;
    double blocked_fraction = 0.0;
    double blocked_fraction_on_extent = 0.0;
    std::vector<double> per_wire_blocked; ///< power per stripe, ascending x
};

struct MaskResult {
    Field2D field;
    GridLossReport loss;
};

/// Result of lens imaging. clipped_power is removed at the aperture stop;
/// vignetting flags a clip above 5% of the power arriving at the lens.
/// filtered_power accumulates the propagation band-limit losses of both
/// legs (to the lens and to the image plane).
struct ImagingResult {
    Field2D field;
    double clipped_power = 0.0;
    double filtered_power = 0.0;
    bool vignetting = false;
};

/// Power integrated over the two detector regions and the rest of the grid.
struct FluxSplit {
    double detector_1 = 0.0;
    double detector_2 = 0.0;
    double elsewhere = 0.0;
};

/// Unit-amplitude field inside the open pinholes, zero elsewhere, with the
/// relative phase applied to the right pinhole. Cells straddling a pinhole
/// rim carry the area-weighted (gray pixel) amplitude, which keeps the
/// far-field diffraction structure of the hard disk; the total power then
/// approaches the open aperture area as the rim resolution improves
/// (deficit of order dx/diameter).
///
/// Throws ResolutionError if a pinhole diameter is resolved by fewer than
/// 4 samples or a pinhole does not fit inside the grid.
Field2D make_two_pinhole_source(const PinholePair& pinholes, const GridGeometry& grid,
                                double wavelength);

/// Band-limited angular-spectrum propagation over a non-negative distance.
/// Spatial frequencies beyond 1/wavelength (evanescent) and beyond the
/// window's anti-wraparound limit are zeroed and reported as filtered
/// power. Throws AliasingError if more than 0.1% of the output power ends
/// up within two samples of the grid edge.
PropagationResult propagate(const Field2D& field, double distance);

/// Zeroes the amplitude on the wire stripes. Stripe edges are applied with
/// per-cell coverage weighting, so incident = transmitted + blocked holds
/// to machine precision regardless of how finely a wire is resolved.
///
/// Requires field.plane_z to be the grid plane (the caller positions the
/// field) and the period to be resolved by at least 16 samples.
MaskResult apply_wire_grid(const Field2D& field, const WireGridSpec& grid);

/// Imaging through a thin lens: propagate to the lens plane, multiply by
/// the quadratic lens phase truncated at the aperture, propagate to the
/// image plane. The lens plane is at z = object_distance (sources at 0).
///
/// Throws ResolutionError if the lens phase is not sampled adequately at
/// the aperture edge (aperture radius above wavelength*f/(2*max(dx,dy))),
/// and DomainError if the field is already past the lens plane.
ImagingResult image_through_lens(const Field2D& field, const LensSpec& lens);

/// Splits total power into the two detector regions and everything else.
/// Cells are assigned by cell-center membership; the three parts always
/// sum to total_power(field) exactly.
FluxSplit detector_flux(const Field2D& field, const DetectorRegions& detectors);

/// Ideal fringe period of the two-pinhole pattern at distance z.
double fringe_period(double wavelength, double z, double separation);

} // namespace afshar
