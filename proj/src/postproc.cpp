#include <bkit/postproc.hpp>

#include <bkit/errors.hpp>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace bkit {

MaskGrid binarize(const ProbGrid& prob, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ParameterError(fmt::format("threshold {} must lie in (0, 1)", threshold));
    }
    MaskGrid m = MaskGrid::zeros(prob.geometry);
    std::transform(prob.values.begin(), prob.values.end(), m.values.begin(),
                   [threshold](float p) { return static_cast<std::uint8_t>(static_cast<double>(p) >= threshold); });
    return m;
}

std::vector<CircularRun> extract_runs(std::span<const std::uint8_t> row) {
    std::vector<CircularRun> runs;
    const auto n = static_cast<std::uint32_t>(row.size());
    if (n == 0) return runs;

    // Start scanning just after a 0-cell so that no run is split by the seam.
    std::uint32_t zero = n;
    for (std::uint32_t c = 0; c < n; ++c) {
        if (row[c] == 0) {
            zero = c;
            break;
        }
    }
    if (zero == n) {
        runs.push_back({0, n, true});
        return runs;
    }

    std::uint32_t i = 1;
    while (i <= n) {
        const std::uint32_t c = (zero + i) % n;
        if (row[c] == 0) {
            ++i;
            continue;
        }
        std::uint32_t len = 0;
        while (i <= n && row[(zero + i) % n] != 0) {
            ++len;
            ++i;
        }
        runs.push_back({c, len, false});
    }
    std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.start_col < b.start_col; });
    return runs;
}

std::optional<BreakoutPick> run_to_pick(const CircularRun& run, const GridGeometry& geometry, double depth,
                                        double min_width_deg) {
    if (run.full_circle || run.length >= geometry.n_azimuth) return std::nullopt;
    const double width = static_cast<double>(run.length) * kFullCircleDeg / geometry.n_azimuth;
    // 1e-9 absorbs the rounding in length*360/n for lattice widths like 10.0
    if (width < min_width_deg - 1e-9) return std::nullopt;
    return BreakoutPick::from_edges(depth, azimuth_of_column(run.start_col, geometry), width);
}

MaskPicks picks_from_mask_detailed(const MaskGrid& mask, double min_width_deg, PickSource source) {
    std::vector<BreakoutPick> picks;
    std::size_t washouts = 0;
    const auto& g = mask.geometry;
    for (std::size_t r = 0; r < g.n_depth; ++r) {
        const double depth = g.depth_of_row(r);
        for (const auto& run : extract_runs(mask.row(r))) {
            if (run.full_circle) {
                ++washouts;
                continue;
            }
            if (auto p = run_to_pick(run, g, depth, min_width_deg)) picks.push_back(*p);
        }
    }
    if (washouts > 0) spdlog::debug("picks_from_mask: {} full-circle rows flagged as washout", washouts);
    return {PickSet(std::move(picks), source), washouts};
}

PickSet picks_from_mask(const MaskGrid& mask, double min_width_deg, PickSource source) {
    return picks_from_mask_detailed(mask, min_width_deg, source).picks;
}

std::optional<std::size_t> row_of_depth(const GridGeometry& geometry, double depth) {
    const double pos = (depth - geometry.depth_start) / geometry.depth_step;
    const double idx = std::round(pos);
    if (std::abs(pos - idx) > 1e-6 || idx < 0.0 || idx >= static_cast<double>(geometry.n_depth)) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

MaskGrid rasterize_picks(const PickSet& set, const GridGeometry& geometry) {
    MaskGrid m = MaskGrid::zeros(geometry);
    const std::int64_t n = geometry.n_azimuth;
    const double step = geometry.azimuth_step();
    std::size_t overlaps = 0;
    for (const auto& p : set) {
        auto row = row_of_depth(geometry, p.depth);
        if (!row) throw RangeError(fmt::format("pick depth {} is not a row of the grid", p.depth));
        const auto start = static_cast<std::int64_t>(std::llround(p.left_deg / step));
        const auto len = std::clamp<std::int64_t>(std::llround(p.width_deg / step), 1, n);
        auto cells = m.row(*row);
        for (std::int64_t k = 0; k < len; ++k) {
            auto& cell = cells[static_cast<std::size_t>(((start + k) % n + n) % n)];
            if (cell != 0) ++overlaps;
            cell = 1;
        }
    }
    if (overlaps > 0) spdlog::warn("rasterize_picks: {} cells covered by more than one pick were merged", overlaps);
    return m;
}

}  // namespace bkit
