#include "afshar/field.hpp"

#include "afshar/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace afshar {

namespace {

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

// FFTW planning is not thread-safe; execution of independent plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

void GridGeometry::validate() const {
    if (!is_power_of_two(nx) || !is_power_of_two(ny))
        throw DomainError("grid dimensions must be powers of two and >= 2");
    if (!(dx > 0.0) || !(dy > 0.0))
        throw DomainError("grid sample spacing must be positive");
}

Field2D::Field2D(const GridGeometry& grid, double wavelength, double plane_z)
    : grid_(grid), wavelength_(wavelength), plane_z_(plane_z) {
    grid_.validate();
    if (!(wavelength > 0.0))
        throw DomainError("wavelength must be positive");
    samples_.assign(std::size_t(grid_.nx) * grid_.ny, {0.0, 0.0});
}

std::vector<double> Field2D::intensity_marginal_x() const {
    std::vector<double> marginal(grid_.nx, 0.0);
    for (int iy = 0; iy < grid_.ny; ++iy) {
        const std::complex<double>* row = samples_.data() + std::size_t(iy) * grid_.nx;
        for (int ix = 0; ix < grid_.nx; ++ix)
            marginal[ix] += std::norm(row[ix]);
    }
    for (double& v : marginal)
        v *= grid_.dy;
    return marginal;
}

double total_power(const Field2D& field) {
    // Kahan summation keeps the power bookkeeping identities tight even on
    // multi-megasample grids.
    double sum = 0.0;
    double carry = 0.0;
    for (const auto& a : field.samples()) {
        const double term = std::norm(a) - carry;
        const double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return sum * field.dx() * field.dy();
}

void fft2(Field2D& field, int sign) {
    auto* data = reinterpret_cast<fftw_complex*>(field.samples().data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_2d(field.ny(), field.nx(), data, data,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr)
        throw Error("FFT planning failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (sign > 0) {
        const double norm = 1.0 / (double(field.nx()) * double(field.ny()));
        for (auto& a : field.samples())
            a *= norm;
    }
}

} // namespace afshar
