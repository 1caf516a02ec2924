#pragma once

#include <bkit/grid.hpp>
#include <bkit/picks.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bkit {

inline constexpr double kDefaultThreshold = 0.5;
inline constexpr double kMinBreakoutWidthDeg = 10.0;

// Contiguous 1-cells of a circular row, possibly wrapping past the last column.
struct CircularRun {
    std::uint32_t start_col = 0;
    std::uint32_t length = 0;
    bool full_circle = false;

    friend bool operator==(const CircularRun&, const CircularRun&) = default;
};

// cell = 1 iff probability >= threshold. Throws ParameterError unless 0 < threshold < 1.
MaskGrid binarize(const ProbGrid& prob, double threshold = kDefaultThreshold);

// Runs ordered by start column; a run crossing column 0 is reported once, by its true start.
std::vector<CircularRun> extract_runs(std::span<const std::uint8_t> row);

// Empty for runs narrower than `min_width_deg` and for full-circle runs (washouts).
std::optional<BreakoutPick> run_to_pick(const CircularRun& run, const GridGeometry& geometry, double depth,
                                        double min_width_deg = kMinBreakoutWidthDeg);

struct MaskPicks {
    PickSet picks;
    std::size_t washout_rows = 0;  // rows whose only content was a full-circle run
};

MaskPicks picks_from_mask_detailed(const MaskGrid& mask, double min_width_deg = kMinBreakoutWidthDeg,
                                   PickSource source = PickSource::segnet);
PickSet picks_from_mask(const MaskGrid& mask, double min_width_deg = kMinBreakoutWidthDeg,
                        PickSource source = PickSource::segnet);

// Paints each pick's zone into its row. Edges snap to the nearest column boundary and
// overlapping zones merge. Throws RangeError for a depth outside the grid.
MaskGrid rasterize_picks(const PickSet& set, const GridGeometry& geometry);

// Row index holding `depth`, or empty when it is off-grid by more than 1e-6 of a step.
std::optional<std::size_t> row_of_depth(const GridGeometry& geometry, double depth);

}  // namespace bkit
