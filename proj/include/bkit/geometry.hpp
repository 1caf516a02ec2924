#pragma once

#include <cstddef>
#include <cstdint>

namespace bkit {

inline constexpr double kFullCircleDeg = 360.0;

// Maps any finite angle into [0, 360).
double wrap360(double deg) noexcept;

// Depth x azimuth raster layout. Column c covers [c*azimuth_step, (c+1)*azimuth_step)
// and column n_azimuth-1 is adjacent to column 0.
struct GridGeometry {
    std::uint32_t n_depth = 0;
    std::uint32_t n_azimuth = 0;
    double depth_start = 0.0;  // m
    double depth_step = 0.0;   // m

    // Throws InvariantError on n_depth == 0, n_azimuth < 8, non-positive or non-finite step.
    static GridGeometry make(std::uint32_t n_depth, std::uint32_t n_azimuth, double depth_start,
                             double depth_step);
    void validate() const;

    double azimuth_step() const noexcept { return kFullCircleDeg / n_azimuth; }
    std::size_t cell_count() const noexcept { return std::size_t{n_depth} * n_azimuth; }
    double depth_of_row(std::size_t row) const noexcept {
        return depth_start + static_cast<double>(row) * depth_step;
    }

    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

// Left boundary azimuth of column c. Throws RangeError when c >= n_azimuth.
double azimuth_of_column(std::size_t column, const GridGeometry& geometry);

}  // namespace bkit
