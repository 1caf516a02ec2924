#include <bkit/geometry.hpp>

#include <bkit/errors.hpp>

#include <cmath>
#include <string>

namespace bkit {

double wrap360(double deg) noexcept {
    double r = std::fmod(deg, kFullCircleDeg);
    if (r < 0.0) r += kFullCircleDeg;
    // fmod of a tiny negative value can round up to exactly 360
    if (r >= kFullCircleDeg) r = 0.0;
    return r;
}

GridGeometry GridGeometry::make(std::uint32_t n_depth, std::uint32_t n_azimuth, double depth_start,
                                double depth_step) {
    GridGeometry g{n_depth, n_azimuth, depth_start, depth_step};
    g.validate();
    return g;
}

void GridGeometry::validate() const {
    if (n_depth == 0) throw InvariantError("grid geometry: n_depth must be positive");
    if (n_azimuth < 8) {
        throw InvariantError("grid geometry: n_azimuth must be at least 8, got " + std::to_string(n_azimuth));
    }
    if (!std::isfinite(depth_start)) throw InvariantError("grid geometry: depth_start must be finite");
    if (!std::isfinite(depth_step) || depth_step <= 0.0) {
        throw InvariantError("grid geometry: depth_step must be positive");
    }
}

double azimuth_of_column(std::size_t column, const GridGeometry& geometry) {
    if (column >= geometry.n_azimuth) {
        throw RangeError("column " + std::to_string(column) + " outside [0, " +
                         std::to_string(geometry.n_azimuth) + ")");
    }
    // c*360/n rather than c*step keeps lattice azimuths exact for divisors of 360
    return static_cast<double>(column) * kFullCircleDeg / geometry.n_azimuth;
}

}  // namespace bkit
