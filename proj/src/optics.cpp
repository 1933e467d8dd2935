#include "afshar/optics.hpp"

#include "afshar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace afshar {

namespace {

constexpr double kPi = std::numbers::pi;

class KahanSum {
public:
    void add(double term) {
        const double t = term - carry_;
        const double next = sum_ + t;
        carry_ = (next - sum_) - t;
        sum_ = next;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// Fraction of the cell [x0, x0+dx) x [y0, y0+dy) covered by the disk of
// radius r around (cx, cy), by supersampling. Only rim cells take this
// path, so the cost is negligible.
double disk_cell_coverage(double x0, double y0, double dx, double dy, double cx, double cy,
                          double r) {
    constexpr int kSub = 32;
    const double r2 = r * r;
    int inside = 0;
    for (int j = 0; j < kSub; ++j) {
        const double y = y0 + (j + 0.5) * dy / kSub - cy;
        for (int i = 0; i < kSub; ++i) {
            const double x = x0 + (i + 0.5) * dx / kSub - cx;
            if (x * x + y * y <= r2)
                ++inside;
        }
    }
    return double(inside) / (kSub * kSub);
}

void stamp_pinhole(Field2D& field, double cx, double diameter, std::complex<double> amplitude) {
    const double r = 0.5 * diameter;
    const double dx = field.dx();
    const double dy = field.dy();
    const int ix_lo = std::max(0, int(std::floor((cx - r) / dx)) + field.nx() / 2 - 1);
    const int ix_hi = std::min(field.nx() - 1, int(std::ceil((cx + r) / dx)) + field.nx() / 2 + 1);
    const int iy_lo = std::max(0, int(std::floor(-r / dy)) + field.ny() / 2 - 1);
    const int iy_hi = std::min(field.ny() - 1, int(std::ceil(r / dy)) + field.ny() / 2 + 1);
    for (int iy = iy_lo; iy <= iy_hi; ++iy) {
        const double y0 = field.y(iy) - 0.5 * dy;
        const double y1 = y0 + dy;
        for (int ix = ix_lo; ix <= ix_hi; ++ix) {
            const double x0 = field.x(ix) - 0.5 * dx;
            const double x1 = x0 + dx;
            // Classify the cell against the rim via its nearest and
            // farthest points from the disk center (cx, 0).
            const double fx = std::max({x0 - cx, cx - x1, 0.0});
            const double fy = std::max({y0, -y1, 0.0});
            const double near2 = fx * fx + fy * fy;
            const double gx = std::max(std::abs(x0 - cx), std::abs(x1 - cx));
            const double gy = std::max(std::abs(y0), std::abs(y1));
            const double far2 = gx * gx + gy * gy;
            double cov;
            if (far2 <= r * r)
                cov = 1.0;
            else if (near2 >= r * r)
                cov = 0.0;
            else
                cov = disk_cell_coverage(x0, y0, dx, dy, cx, 0.0, r);
            // Gray-pixel rim: the cell carries the area-weighted amplitude.
            // This is the linear (convolution) sampling of the aperture, so
            // the far-field zero structure of the disk is preserved; the
            // residual power deficit against the geometric area is the
            // out-of-band share of the hard edge, of order dx/diameter.
            if (cov > 0.0)
                field.at(ix, iy) += amplitude * cov;
        }
    }
}

} // namespace

double fringe_period(double wavelength, double z, double separation) {
    if (!(wavelength > 0.0) || !(z > 0.0) || !(separation > 0.0))
        throw DomainError("fringe_period requires positive wavelength, distance and separation");
    return wavelength * z / separation;
}

Field2D make_two_pinhole_source(const PinholePair& pinholes, const GridGeometry& grid,
                                double wavelength) {
    pinholes.validate();
    grid.validate();
    const double r = 0.5 * pinholes.diameter;
    if (pinholes.diameter < 4.0 * grid.dx || pinholes.diameter < 4.0 * grid.dy)
        throw ResolutionError("pinhole diameter resolved by fewer than 4 samples");
    if (0.5 * pinholes.separation + r >= 0.5 * grid.width() ||
        r >= 0.5 * grid.height())
        throw DomainError("pinholes do not fit inside the grid");

    Field2D field(grid, wavelength, 0.0);
    const bool left = pinholes.open_mask != OpenMask::RightOnly;
    const bool right = pinholes.open_mask != OpenMask::LeftOnly;
    if (left)
        stamp_pinhole(field, -0.5 * pinholes.separation, pinholes.diameter, {1.0, 0.0});
    if (right)
        stamp_pinhole(field, +0.5 * pinholes.separation, pinholes.diameter,
                      std::polar(1.0, pinholes.relative_phase));
    return field;
}

PropagationResult propagate(const Field2D& field, double distance) {
    if (distance < 0.0)
        throw DomainError("propagation distance must be non-negative");
    Field2D out = field;
    if (distance == 0.0)
        return {std::move(out), 0.0};

    const int nx = out.nx();
    const int ny = out.ny();
    const double lambda = out.wavelength();
    const double dfx = 1.0 / (nx * out.dx());
    const double dfy = 1.0 / (ny * out.dy());
    // Anti-wraparound band limit: keep only plane waves whose transverse
    // walk over this distance stays inside the periodic window.
    const double hx = 0.5 * nx * out.dx();
    const double hy = 0.5 * ny * out.dy();
    const double flim_x = hx / (lambda * std::hypot(distance, hx));
    const double flim_y = hy / (lambda * std::hypot(distance, hy));

    fft2(out, -1);

    KahanSum removed;
    const double k_z_scale = 2.0 * kPi * distance / lambda;
    for (int iy = 0; iy < ny; ++iy) {
        const int kfy = iy < ny / 2 ? iy : iy - ny;
        const double fy = kfy * dfy;
        const double sy = lambda * fy;
        for (int ix = 0; ix < nx; ++ix) {
            const int kfx = ix < nx / 2 ? ix : ix - nx;
            const double fx = kfx * dfx;
            const double sx = lambda * fx;
            const double s2 = sx * sx + sy * sy;
            std::complex<double>& a = out.at(ix, iy);
            if (s2 >= 1.0 || std::abs(fx) > flim_x || std::abs(fy) > flim_y) {
                removed.add(std::norm(a));
                a = {0.0, 0.0};
            } else {
                a *= std::polar(1.0, k_z_scale * std::sqrt(1.0 - s2));
            }
        }
    }

    fft2(out, +1);
    out.set_plane_z(field.plane_z() + distance);

    const double cell = out.dx() * out.dy();
    const double filtered = removed.value() * cell / (double(nx) * double(ny));

    // Wraparound guard: declared border energy after the step.
    KahanSum border;
    KahanSum total;
    for (int iy = 0; iy < ny; ++iy) {
        const bool edge_row = iy < 2 || iy >= ny - 2;
        for (int ix = 0; ix < nx; ++ix) {
            const double p = std::norm(out.at(ix, iy));
            total.add(p);
            if (edge_row || ix < 2 || ix >= nx - 2)
                border.add(p);
        }
    }
    if (total.value() > 0.0 && border.value() > 1.0e-3 * total.value())
        throw AliasingError("propagation: more than 0.1% of the power reached the window edge");

    return {std::move(out), filtered};
}

MaskResult apply_wire_grid(const Field2D& field, const WireGridSpec& grid) {
    grid.validate();
    if (grid.period < 16.0 * field.dx())
        throw ResolutionError("wire grid period resolved by fewer than 16 samples");

    const int nx = field.nx();
    const int ny = field.ny();
    const double dx = field.dx();
    const double cell = field.dx() * field.dy();
    const double half_extent = 0.5 * grid.extent;
    const double w = grid.wire_width();
    const std::vector<double> centers = grid.wire_centers();

    // Column power, once.
    std::vector<double> column_power(nx, 0.0);
    {
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                column_power[ix] += std::norm(field.at(ix, iy));
        for (int ix = 0; ix < nx; ++ix)
            column_power[ix] *= cell;
    }

    // Covered fraction of each column cell, per wire, clipped to the extent.
    std::vector<double> coverage(nx, 0.0);
    std::vector<double> per_wire(centers.size(), 0.0);
    for (std::size_t wi = 0; wi < centers.size(); ++wi) {
        const double lo = std::max(centers[wi] - 0.5 * w, -half_extent);
        const double hi = std::min(centers[wi] + 0.5 * w, half_extent);
        if (hi <= lo)
            continue;
        const int ix_lo = std::max(0, int(std::floor(lo / dx)) + nx / 2 - 1);
        const int ix_hi = std::min(nx - 1, int(std::ceil(hi / dx)) + nx / 2 + 1);
        KahanSum wire_power;
        for (int ix = ix_lo; ix <= ix_hi; ++ix) {
            const double x0 = (ix - nx / 2 - 0.5) * dx;
            const double x1 = x0 + dx;
            const double overlap = std::min(hi, x1) - std::max(lo, x0);
            if (overlap <= 0.0)
                continue;
            const double c = overlap / dx;
            coverage[ix] = std::min(1.0, coverage[ix] + c);
            wire_power.add(c * column_power[ix]);
        }
        per_wire[wi] = wire_power.value();
    }

    Field2D out = field;
    KahanSum blocked;
    for (int ix = 0; ix < nx; ++ix) {
        if (coverage[ix] <= 0.0)
            continue;
        blocked.add(coverage[ix] * column_power[ix]);
        const double t = std::sqrt(1.0 - coverage[ix]);
        for (int iy = 0; iy < ny; ++iy)
            out.at(ix, iy) *= t;
    }

    // Power incident on the grid extent (cells weighted by window overlap).
    KahanSum on_extent;
    KahanSum incident;
    for (int ix = 0; ix < nx; ++ix) {
        incident.add(column_power[ix]);
        const double x0 = (ix - nx / 2 - 0.5) * dx;
        const double x1 = x0 + dx;
        const double overlap = std::min(half_extent, x1) - std::max(-half_extent, x0);
        if (overlap > 0.0)
            on_extent.add((overlap / dx) * column_power[ix]);
    }

    GridLossReport report;
    report.incident_power = incident.value();
    report.incident_on_extent = on_extent.value();
    report.blocked_power = blocked.value();
    report.blocked_fraction = report.incident_power > 0.0
                                  ? report.blocked_power / report.incident_power
                                  : 0.0;
    report.blocked_fraction_on_extent = report.incident_on_extent > 0.0
                                            ? report.blocked_power / report.incident_on_extent
                                            : 0.0;
    report.per_wire_blocked = std::move(per_wire);
    return {std::move(out), std::move(report)};
}

ImagingResult image_through_lens(const Field2D& field, const LensSpec& lens) {
    lens.validate();
    const double lens_z = lens.object_distance;
    if (field.plane_z() > lens_z + 1e-12)
        throw DomainError("field is already past the lens plane");

    const double lambda = field.wavelength();
    const double sample_limit = lambda * lens.focal_length / (2.0 * std::max(field.dx(), field.dy()));
    const double r_ap = 0.5 * lens.aperture_diameter;
    if (r_ap > sample_limit * (1.0 + 1e-12))
        throw ResolutionError("lens phase under-sampled at the aperture edge; "
                              "reduce the aperture or refine the grid");

    PropagationResult to_lens = propagate(field, lens_z - field.plane_z());
    double filtered = to_lens.filtered_power;

    Field2D& at_lens = to_lens.field;
    const double incident = total_power(at_lens);
    KahanSum clipped_sum;
    const double phase_scale = -kPi / (lambda * lens.focal_length);
    for (int iy = 0; iy < at_lens.ny(); ++iy) {
        const double y = at_lens.y(iy);
        for (int ix = 0; ix < at_lens.nx(); ++ix) {
            const double x = at_lens.x(ix);
            const double r2 = x * x + y * y;
            std::complex<double>& a = at_lens.at(ix, iy);
            if (r2 > r_ap * r_ap) {
                clipped_sum.add(std::norm(a));
                a = {0.0, 0.0};
            } else {
                a *= std::polar(1.0, phase_scale * r2);
            }
        }
    }
    const double clipped = clipped_sum.value() * at_lens.dx() * at_lens.dy();
    const bool vignetting = incident > 0.0 && clipped > 0.05 * incident;

    PropagationResult to_image = propagate(at_lens, lens.image_distance);
    filtered += to_image.filtered_power;
    return {std::move(to_image.field), clipped, filtered, vignetting};
}

FluxSplit detector_flux(const Field2D& field, const DetectorRegions& detectors) {
    detectors.validate();
    const double half_w = 0.5 * field.nx() * field.dx();
    const double half_h = 0.5 * field.ny() * field.dy();
    for (double c : {detectors.center_1, detectors.center_2}) {
        if (std::abs(c) + detectors.radius > half_w || detectors.radius > half_h)
            throw DomainError("detector region extends outside the simulated grid");
    }

    const double r2 = detectors.radius * detectors.radius;
    KahanSum f1;
    KahanSum f2;
    KahanSum rest;
    for (int iy = 0; iy < field.ny(); ++iy) {
        const double y = field.y(iy);
        const double y2 = y * y;
        for (int ix = 0; ix < field.nx(); ++ix) {
            const double x = field.x(ix);
            const double p = std::norm(field.at(ix, iy));
            const double d1 = (x - detectors.center_1) * (x - detectors.center_1) + y2;
            if (d1 <= r2) {
                f1.add(p);
                continue;
            }
            const double d2 = (x - detectors.center_2) * (x - detectors.center_2) + y2;
            if (d2 <= r2)
                f2.add(p);
            else
                rest.add(p);
        }
    }
    const double cell = field.dx() * field.dy();
    return {f1.value() * cell, f2.value() * cell, rest.value() * cell};
}

} // namespace afshar
