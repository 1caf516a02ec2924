#pragma once

#include <bkit/grid.hpp>
#include <bkit/picks.hpp>

#include <span>
#include <vector>

namespace bkit {

// Rule-based baseline: a breakout zone is where the smoothed amplitude is unusually low
// and the smoothed radius unusually high, both relative to the row's own statistics.
struct PeakDetectParams {
    double smooth_window_deg = 15.0;
    double k_amp = 1.0;  // zone needs amplitude < mean - k_amp * sd
    double k_rad = 1.0;  // and radius > mean + k_rad * sd
    double min_width_deg = 10.0;
    bool apply_symmetry_validation = false;

    // Throws ParameterError.
    void validate(const GridGeometry& geometry) const;
};

// Number of columns in the smoothing window: round(window / step), bumped to the next odd
// count. Throws ParameterError when the window is narrower than one column.
std::size_t smoothing_columns(double window_deg, const GridGeometry& geometry);

// Circular moving average; NaN cells are left out of every average.
std::vector<double> smooth_circular(std::span<const double> row, double window_deg, const GridGeometry& geometry);

std::vector<BreakoutPick> detect_row(std::span<const double> amplitude, std::span<const double> radius,
                                     const PeakDetectParams& params, const GridGeometry& geometry, double depth);

// Throws ShapeError when the grids differ in geometry.
PickSet peak_detect(const ImageLogGrid& amplitude, const ImageLogGrid& radius, const PeakDetectParams& params);

}  // namespace bkit
