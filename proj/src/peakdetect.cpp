#include <bkit/peakdetect.hpp>

#include <bkit/errors.hpp>
#include <bkit/postproc.hpp>
#include <bkit/validation.hpp>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdint>
#include <limits>

namespace bkit {

void PeakDetectParams::validate(const GridGeometry& geometry) const {
    if (!(smooth_window_deg >= geometry.azimuth_step() - 1e-12)) {
        throw ParameterError(fmt::format("smoothing window {} deg is narrower than one column ({} deg)",
                                         smooth_window_deg, geometry.azimuth_step()));
    }
    if (!(k_amp > 0.0) || !(k_rad > 0.0)) throw ParameterError("k_amp and k_rad must be positive");
    if (!(min_width_deg >= 0.0)) throw ParameterError("min_width_deg must be non-negative");
}

std::size_t smoothing_columns(double window_deg, const GridGeometry& geometry) {
    const double cols = window_deg / geometry.azimuth_step();
    if (!std::isfinite(cols) || cols < 1.0 - 1e-9) {
        throw ParameterError(fmt::format("smoothing window {} deg is narrower than one column", window_deg));
    }
    auto k = static_cast<std::size_t>(std::llround(cols));
    if (k % 2 == 0) ++k;
    return std::min<std::size_t>(k, geometry.n_azimuth % 2 == 1 ? geometry.n_azimuth : geometry.n_azimuth - 1);
}

std::vector<double> smooth_circular(std::span<const double> row, double window_deg, const GridGeometry& geometry) {
    const std::size_t n = row.size();
    const std::size_t k = smoothing_columns(window_deg, geometry);
    const std::size_t half = k / 2;
    std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t c = 0; c < n; ++c) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const double v = row[(c + n - half + j) % n];
            if (std::isnan(v)) continue;
            sum += v;
            ++count;
        }
        if (count > 0) out[c] = sum / static_cast<double>(count);
    }
    return out;
}

namespace {

struct RowStats {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t valid = 0;
};

RowStats stats_of(const std::vector<double>& v) {
    RowStats s;
    for (double x : v) {
        if (std::isnan(x)) continue;
        s.mean += x;
        ++s.valid;
    }
    if (s.valid == 0) return s;
    s.mean /= static_cast<double>(s.valid);
    double ss = 0.0;
    for (double x : v) {
        if (!std::isnan(x)) ss += (x - s.mean) * (x - s.mean);
    }
    s.sd = std::sqrt(ss / static_cast<double>(s.valid));
    return s;
}

}  // namespace

std::vector<BreakoutPick> detect_row(std::span<const double> amplitude, std::span<const double> radius,
                                     const PeakDetectParams& params, const GridGeometry& geometry, double depth) {
    if (amplitude.size() != geometry.n_azimuth || radius.size() != geometry.n_azimuth) {
        throw ShapeError("detect_row: row length does not match n_azimuth");
    }
    const auto amp = smooth_circular(amplitude, params.smooth_window_deg, geometry);
    const auto rad = smooth_circular(radius, params.smooth_window_deg, geometry);
    const RowStats sa = stats_of(amp);
    const RowStats sr = stats_of(rad);
    if (sa.valid == 0 || sr.valid == 0) {
        spdlog::warn("detect_row: no valid samples at depth {}", depth);
        return {};
    }
    const double amp_limit = sa.mean - params.k_amp * sa.sd;
    const double rad_limit = sr.mean + params.k_rad * sr.sd;

    std::vector<std::uint8_t> zone(geometry.n_azimuth, 0);
    for (std::size_t c = 0; c < zone.size(); ++c) {
        // NaN compares false, so missing cells never join a zone
        zone[c] = static_cast<std::uint8_t>(amp[c] < amp_limit && rad[c] > rad_limit);
    }

    std::vector<BreakoutPick> picks;
    const std::size_t n = geometry.n_azimuth;
    for (const auto& run : extract_runs(zone)) {
        auto pick = run_to_pick(run, geometry, depth, params.min_width_deg);
        if (!pick) continue;
        std::size_t best = run.start_col;
        for (std::size_t j = 0; j < run.length; ++j) {
            const std::size_t c = (run.start_col + j) % n;
            if (amp[c] < amp[best]) best = c;
        }
        pick->azimuth_deg = wrap360((static_cast<double>(best) + 0.5) * geometry.azimuth_step());
        picks.push_back(*pick);
    }
    return picks;
}

PickSet peak_detect(const ImageLogGrid& amplitude, const ImageLogGrid& radius, const PeakDetectParams& params) {
    require_same_geometry(amplitude.geometry, radius.geometry, "peak_detect");
    const auto& g = amplitude.geometry;
    params.validate(g);
    std::vector<BreakoutPick> picks;
    std::vector<double> amp_row(g.n_azimuth);
    std::vector<double> rad_row(g.n_azimuth);
    for (std::size_t r = 0; r < g.n_depth; ++r) {
        auto a = amplitude.row(r);
        auto b = radius.row(r);
        std::copy(a.begin(), a.end(), amp_row.begin());
        std::copy(b.begin(), b.end(), rad_row.begin());
        auto row_picks = detect_row(amp_row, rad_row, params, g, g.depth_of_row(r));
        picks.insert(picks.end(), row_picks.begin(), row_picks.end());
    }
    PickSet set(std::move(picks), PickSource::peak_detect);
    if (params.apply_symmetry_validation) return validate(set).retained;
    return set;
}

}  // namespace bkit
