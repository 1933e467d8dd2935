#include "afshar/apparatus.hpp"

#include "afshar/errors.hpp"

#include <cmath>
#include <numbers>

namespace afshar {

std::string to_string(OpenMask mask) {
    switch (mask) {
    case OpenMask::Both: return "both";
    case OpenMask::LeftOnly: return "left_only";
    case OpenMask::RightOnly: return "right_only";
    }
    return "?";
}

std::string to_string(WireMode mode) {
    return mode == WireMode::Absorbing ? "absorbing" : "reflecting";
}

void PinholePair::validate() const {
    if (!(diameter > 0.0))
        throw DomainError("pinhole diameter must be positive");
    if (!(separation > diameter))
        throw DomainError("pinhole separation must exceed the diameter");
    if (!std::isfinite(relative_phase))
        throw DomainError("pinhole relative_phase must be finite");
}

void WireGridSpec::validate() const {
    if (!(period > 0.0))
        throw DomainError("wire grid period must be positive");
    if (!(covering_ratio > 0.0) || !(covering_ratio < 1.0))
        throw DomainError("wire grid covering_ratio must lie in (0, 1)");
    if (!(extent > 0.0))
        throw DomainError("wire grid extent must be positive");
    if (!std::isfinite(placement_phase))
        throw DomainError("wire grid placement_phase must be finite");
}

std::vector<double> WireGridSpec::wire_centers() const {
    // The reference pattern has a maximum at x = shift; minima sit half a
    // period off. placement_phase = 0 puts stripe centers on the minima,
    // +-pi on the maxima.
    const double shift =
        (placement_phase + pattern_phase) / (2.0 * std::numbers::pi) * period;
    const double half = 0.5 * extent + 0.5 * wire_width();
    std::vector<double> centers;
    const long m_lo = std::lround(std::floor((-half - shift) / period - 0.5));
    const long m_hi = std::lround(std::ceil((half - shift) / period - 0.5));
    for (long m = m_lo; m <= m_hi; ++m) {
        const double c = (double(m) + 0.5) * period + shift;
        if (c > -half && c < half)
            centers.push_back(c);
    }
    return centers;
}

void LensSpec::validate() const {
    if (!(focal_length > 0.0) || !(aperture_diameter > 0.0))
        throw DomainError("lens focal length and aperture must be positive");
    if (!(object_distance > 0.0) || !(image_distance > 0.0))
        throw DomainError("lens conjugate distances must be positive");
    const double lhs = 1.0 / object_distance + 1.0 / image_distance;
    const double rhs = 1.0 / focal_length;
    if (std::abs(lhs - rhs) > 1e-9 * rhs)
        throw DomainError("lens distances do not satisfy the thin-lens imaging condition");
}

void DetectorRegions::validate() const {
    if (!(radius > 0.0))
        throw DomainError("detector radius must be positive");
    if (std::abs(center_1 - center_2) <= 2.0 * radius)
        throw DomainError("detector regions must be disjoint");
}

} // namespace afshar
