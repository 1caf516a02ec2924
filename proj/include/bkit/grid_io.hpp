#pragma once

#include <bkit/grid.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

namespace bkit {

using AnyGrid = std::variant<ImageLogGrid, MaskGrid, ProbGrid>;

// IGRID layout, all little-endian:
//
//   off  size  field
//     0     4  magic "IGLG"
//     4     2  version (1)
//     6     2  dtype (0 = f32, 1 = u8)
//     8     4  n_depth
//    12     4  n_azimuth
//    16     8  depth_start (f64, m)
//    24     8  depth_step (f64, m)
//    32     2  channel (0 amplitude, 1 radius, 2 mask, 3 probability)
//    34     2  reserved, 0
//    36     8  padding, 0
//    44        payload, row-major (depth-major, azimuth-minor)
namespace igrid {
inline constexpr std::size_t kHeaderSize = 44;
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::uint16_t kDtypeF32 = 0;
inline constexpr std::uint16_t kDtypeU8 = 1;
}  // namespace igrid

// Throws InvariantError if the grid violates its invariants.
std::vector<std::uint8_t> encode_grid(const AnyGrid& grid);
// Throws ParseError carrying the byte offset of the first offending field.
AnyGrid decode_grid(std::span<const std::uint8_t> bytes);

void write_grid(const AnyGrid& grid, const std::filesystem::path& path);
AnyGrid read_grid(const std::filesystem::path& path);

// Typed readers; throw ParseError when the file holds a different kind.
ImageLogGrid read_image_log(const std::filesystem::path& path);
MaskGrid read_mask(const std::filesystem::path& path);
ProbGrid read_prob(const std::filesystem::path& path);

// Writes bytes to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace bkit
