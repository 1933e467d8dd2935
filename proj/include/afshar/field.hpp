#pragma once

#include <complex>
#include <span>
#include <vector>

namespace afshar {

/// Uniform 2-D sampling geometry: nx x ny cells of physical size dx x dy,
/// centered on the optical axis. nx and ny must be powers of two.
struct GridGeometry {
    int nx = 0;
    int ny = 0;
    double dx = 0.0; ///< meters
    double dy = 0.0; ///< meters

    void validate() const;
    double width() const { return nx * dx; }
    double height() const { return ny * dy; }
};

/// Complex scalar amplitude sampled on a uniform grid at one axial plane.
/// Intensity is |amplitude|^2; total power integrates it over the grid.
/// Treated as an immutable value by every operation: operations take a
/// const reference and return a new field, so sharing across threads is safe.
class Field2D {
public:
    Field2D(const GridGeometry& grid, double wavelength, double plane_z = 0.0);

    int nx() const { return grid_.nx; }
    int ny() const { return grid_.ny; }
    double dx() const { return grid_.dx; }
    double dy() const { return grid_.dy; }
    const GridGeometry& grid() const { return grid_; }
    double wavelength() const { return wavelength_; }
    double plane_z() const { return plane_z_; }
    void set_plane_z(double z) { plane_z_ = z; }

    /// Physical x coordinate of column ix (grid centered on the axis).
    double x(int ix) const { return (ix - grid_.nx / 2) * grid_.dx; }
    /// Physical y coordinate of row iy.
    double y(int iy) const { return (iy - grid_.ny / 2) * grid_.dy; }

    std::complex<double>& at(int ix, int iy) { return samples_[std::size_t(iy) * grid_.nx + ix]; }
    const std::complex<double>& at(int ix, int iy) const {
        return samples_[std::size_t(iy) * grid_.nx + ix];
    }

    std::span<std::complex<double>> samples() { return samples_; }
    std::span<const std::complex<double>> samples() const { return samples_; }

    /// Intensity integrated over row iy is sum_x |a|^2 dx dy; this returns
    /// the y-marginal intensity per unit length in x for each column.
    std::vector<double> intensity_marginal_x() const;

private:
    GridGeometry grid_;
    double wavelength_;
    double plane_z_;
    std::vector<std::complex<double>> samples_;
};

/// Sum of |amplitude|^2 dx dy over the grid. Zero iff the field is zero.
double total_power(const Field2D& field);

/// In-place unnormalized forward/inverse DFT used by the propagation code;
/// exposed for spectral round-trip checks. sign = -1 forward, +1 inverse
/// (inverse applies the 1/(nx*ny) normalization).
void fft2(Field2D& field, int sign);

} // namespace afshar
