#include <bkit/grid.hpp>

#include <bkit/errors.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace bkit {

std::string_view to_string(Channel channel) noexcept {
    switch (channel) {
        case Channel::amplitude: return "amplitude";
        case Channel::radius: return "radius";
        case Channel::mask: return "mask";
        case Channel::probability: return "probability";
    }
    return "unknown";
}

namespace {

template <class T>
void check_length(const RasterData<T>& grid, std::string_view kind) {
    grid.geometry.validate();
    if (grid.values.size() != grid.geometry.cell_count()) {
        throw InvariantError(std::string(kind) + ": value count " + std::to_string(grid.values.size()) +
                             " does not match geometry " + std::to_string(grid.geometry.n_depth) + "x" +
                             std::to_string(grid.geometry.n_azimuth));
    }
}

}  // namespace

ImageLogGrid ImageLogGrid::filled(const GridGeometry& geometry, Channel channel, float value) {
    ImageLogGrid g;
    g.geometry = geometry;
    g.channel = channel;
    g.values.assign(geometry.cell_count(), value);
    return g;
}

void ImageLogGrid::validate() const {
    check_length(*this, "image log grid");
    if (channel != Channel::amplitude && channel != Channel::radius) {
        throw InvariantError("image log grid: channel must be amplitude or radius");
    }
    if (channel == Channel::radius) {
        for (float v : values) {
            if (!std::isnan(v) && !(v > 0.0f)) {
                throw InvariantError("image log grid: radius values must be positive");
            }
        }
    }
}

// NaN-aware: missing cells compare equal when both are NaN.
bool operator==(const ImageLogGrid& a, const ImageLogGrid& b) {
    if (a.geometry != b.geometry || a.channel != b.channel || a.values.size() != b.values.size()) return false;
    return std::equal(a.values.begin(), a.values.end(), b.values.begin(), [](float x, float y) {
        return std::bit_cast<std::uint32_t>(x) == std::bit_cast<std::uint32_t>(y) || x == y;
    });
}

MaskGrid MaskGrid::zeros(const GridGeometry& geometry) {
    MaskGrid m;
    m.geometry = geometry;
    m.values.assign(geometry.cell_count(), 0);
    return m;
}

void MaskGrid::validate() const {
    check_length(*this, "mask grid");
    auto bad = std::find_if(values.begin(), values.end(), [](std::uint8_t v) { return v > 1; });
    if (bad != values.end()) {
        throw InvariantError("mask grid: cell " + std::to_string(bad - values.begin()) + " has value " +
                             std::to_string(*bad) + ", expected 0 or 1");
    }
}

std::size_t MaskGrid::count() const noexcept {
    return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::uint8_t{1}));
}

ProbGrid ProbGrid::filled(const GridGeometry& geometry, float value) {
    ProbGrid p;
    p.geometry = geometry;
    p.values.assign(geometry.cell_count(), value);
    return p;
}

void ProbGrid::validate() const {
    check_length(*this, "probability grid");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0f && values[i] <= 1.0f)) {
            throw InvariantError("probability grid: cell " + std::to_string(i) + " outside [0, 1]");
        }
    }
}

void require_same_geometry(const GridGeometry& a, const GridGeometry& b, std::string_view what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": geometry mismatch (" + std::to_string(a.n_depth) + "x" +
                         std::to_string(a.n_azimuth) + " vs " + std::to_string(b.n_depth) + "x" +
                         std::to_string(b.n_azimuth) + ")");
    }
}

MaskGrid union_masks(const MaskGrid& a, const MaskGrid& b) {
    require_same_geometry(a.geometry, b.geometry, "union_masks");
    MaskGrid out = MaskGrid::zeros(a.geometry);
    std::transform(a.values.begin(), a.values.end(), b.values.begin(), out.values.begin(),
                   [](std::uint8_t x, std::uint8_t y) { return static_cast<std::uint8_t>((x | y) != 0); });
    return out;
}

}  // namespace bkit
