#pragma once

#include <bkit/geometry.hpp>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace bkit {

enum class Channel : std::uint16_t { amplitude = 0, radius = 1, mask = 2, probability = 3 };

std::string_view to_string(Channel channel) noexcept;

// Row-major (depth-major, azimuth-minor) cell storage shared by the grid kinds.
template <class T>
struct RasterData {
    GridGeometry geometry;
    std::vector<T> values;

    T& at(std::size_t row, std::size_t col) { return values[row * geometry.n_azimuth + col]; }
    const T& at(std::size_t row, std::size_t col) const { return values[row * geometry.n_azimuth + col]; }

    std::span<T> row(std::size_t r) {
        return std::span<T>(values).subspan(r * geometry.n_azimuth, geometry.n_azimuth);
    }
    std::span<const T> row(std::size_t r) const {
        return std::span<const T>(values).subspan(r * geometry.n_azimuth, geometry.n_azimuth);
    }

    friend bool operator==(const RasterData&, const RasterData&) = default;
};

// Amplitude (dimensionless) or radius (mm). NaN marks missing samples.
struct ImageLogGrid : RasterData<float> {
    Channel channel = Channel::amplitude;

    static ImageLogGrid filled(const GridGeometry& geometry, Channel channel, float value);
    // Throws InvariantError: wrong channel, wrong length, non-positive radius.
    void validate() const;

    friend bool operator==(const ImageLogGrid& a, const ImageLogGrid& b);
};

// 1 = breakout, 0 = background.
struct MaskGrid : RasterData<std::uint8_t> {
    static MaskGrid zeros(const GridGeometry& geometry);
    void validate() const;
    std::size_t count() const noexcept;

    friend bool operator==(const MaskGrid&, const MaskGrid&) = default;
};

struct ProbGrid : RasterData<float> {
    static ProbGrid filled(const GridGeometry& geometry, float value);
    void validate() const;

    friend bool operator==(const ProbGrid&, const ProbGrid&) = default;
};

// Cellwise OR. Throws ShapeError when geometries differ.
MaskGrid union_masks(const MaskGrid& a, const MaskGrid& b);

void require_same_geometry(const GridGeometry& a, const GridGeometry& b, std::string_view what);

}  // namespace bkit
