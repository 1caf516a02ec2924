#include <bkit/grid_io.hpp>

#include <bkit/errors.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

namespace bkit {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'I', 'G', 'L', 'G'};

class ByteWriter {
public:
    explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put_le(v); }
    void u32(std::uint32_t v) { put_le(v); }
    void u64(std::uint64_t v) { put_le(v); }
    void f32(float v) { put_le(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }

private:
    template <class U>
    void put_le(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    std::vector<std::uint8_t>& out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

    std::uint8_t u8() { return get_le<std::uint8_t>(); }
    std::uint16_t u16() { return get_le<std::uint16_t>(); }
    std::uint32_t u32() { return get_le<std::uint32_t>(); }
    std::uint64_t u64() { return get_le<std::uint64_t>(); }
    float f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }
    double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

private:
    template <class U>
    U get_le() {
        if (remaining() < sizeof(U)) {
            throw ParseError(ParseError::Locus::byte_offset, pos_, "unexpected end of file");
        }
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
        pos_ += sizeof(U);
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
    throw ParseError(ParseError::Locus::byte_offset, offset, what);
}

void write_header(ByteWriter& w, const GridGeometry& g, std::uint16_t dtype, Channel channel) {
    for (auto b : kMagic) w.u8(b);
    w.u16(igrid::kVersion);
    w.u16(dtype);
    w.u32(g.n_depth);
    w.u32(g.n_azimuth);
    w.f64(g.depth_start);
    w.f64(g.depth_step);
    w.u16(static_cast<std::uint16_t>(channel));
    w.u16(0);
    w.u64(0);
}

}  // namespace

std::vector<std::uint8_t> encode_grid(const AnyGrid& grid) {
    std::vector<std::uint8_t> out;
    ByteWriter w(out);
    std::visit(
        [&](const auto& g) {
            g.validate();
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, MaskGrid>) {
                out.reserve(igrid::kHeaderSize + g.values.size());
                write_header(w, g.geometry, igrid::kDtypeU8, Channel::mask);
                out.insert(out.end(), g.values.begin(), g.values.end());
            } else {
                out.reserve(igrid::kHeaderSize + 4 * g.values.size());
                Channel channel = Channel::probability;
                if constexpr (std::is_same_v<G, ImageLogGrid>) channel = g.channel;
                write_header(w, g.geometry, igrid::kDtypeF32, channel);
                for (float v : g.values) w.f32(v);
            }
        },
        grid);
    return out;
}

AnyGrid decode_grid(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    for (std::size_t i = 0; i < kMagic.size(); ++i) {
        if (r.remaining() == 0 || r.u8() != kMagic[i]) fail(0, "bad magic, expected \"IGLG\"");
    }
    std::size_t at = r.offset();
    if (auto version = r.u16(); version != igrid::kVersion) {
        fail(at, "unsupported version " + std::to_string(version));
    }
    at = r.offset();
    const std::uint16_t dtype = r.u16();
    if (dtype != igrid::kDtypeF32 && dtype != igrid::kDtypeU8) fail(at, "unknown dtype " + std::to_string(dtype));

    GridGeometry g;
    at = r.offset();
    g.n_depth = r.u32();
    if (g.n_depth == 0) fail(at, "n_depth must be positive");
    at = r.offset();
    g.n_azimuth = r.u32();
    if (g.n_azimuth < 8) fail(at, "n_azimuth must be at least 8");
    at = r.offset();
    g.depth_start = r.f64();
    if (!std::isfinite(g.depth_start)) fail(at, "depth_start is not finite");
    at = r.offset();
    g.depth_step = r.f64();
    if (!(g.depth_step > 0.0) || !std::isfinite(g.depth_step)) fail(at, "depth_step must be positive");

    at = r.offset();
    const std::uint16_t channel_code = r.u16();
    if (channel_code > 3) fail(at, "unknown channel " + std::to_string(channel_code));
    const auto channel = static_cast<Channel>(channel_code);
    const bool wants_u8 = channel == Channel::mask;
    if (wants_u8 != (dtype == igrid::kDtypeU8)) {
        fail(at, "dtype " + std::to_string(dtype) + " does not match channel " + std::string(to_string(channel)));
    }
    at = r.offset();
    if (r.u16() != 0) fail(at, "reserved field must be zero");
    at = r.offset();
    if (r.u64() != 0) fail(at, "header padding must be zero");

    const std::size_t cells = g.cell_count();
    const std::size_t width = dtype == igrid::kDtypeU8 ? 1 : 4;
    if (r.remaining() != cells * width) {
        fail(r.offset(), "payload holds " + std::to_string(r.remaining()) + " bytes, header declares " +
                             std::to_string(g.n_depth) + "x" + std::to_string(g.n_azimuth) + " cells of " +
                             std::to_string(width) + " bytes" + (r.remaining() < cells * width ? " (truncated)" : ""));
    }

    if (channel == Channel::mask) {
        MaskGrid m = MaskGrid::zeros(g);
        for (std::size_t i = 0; i < cells; ++i) {
            at = r.offset();
            m.values[i] = r.u8();
            if (m.values[i] > 1) fail(at, "mask cell value " + std::to_string(m.values[i]) + " not in {0,1}");
        }
        return m;
    }

    std::vector<float> values(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        at = r.offset();
        values[i] = r.f32();
        if (channel == Channel::probability && !(values[i] >= 0.0f && values[i] <= 1.0f)) {
            fail(at, "probability outside [0,1]");
        }
        if (channel == Channel::radius && !std::isnan(values[i]) && !(values[i] > 0.0f)) {
            fail(at, "radius must be positive");
        }
    }
    if (channel == Channel::probability) {
        ProbGrid p;
        p.geometry = g;
        p.values = std::move(values);
        return p;
    }
    ImageLogGrid img;
    img.geometry = g;
    img.channel = channel;
    img.values = std::move(values);
    return img;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

void write_grid(const AnyGrid& grid, const std::filesystem::path& path) {
    const auto bytes = encode_grid(grid);
    write_file_atomic(path, bytes);
}

AnyGrid read_grid(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_grid(bytes);
}

namespace {

template <class G>
G read_kind(const std::filesystem::path& path, const char* kind) {
    auto any = read_grid(path);
    if (auto* g = std::get_if<G>(&any)) return std::move(*g);
    throw ParseError(ParseError::Locus::byte_offset, 32, path.string() + " does not hold a " + kind);
}

}  // namespace

ImageLogGrid read_image_log(const std::filesystem::path& path) { return read_kind<ImageLogGrid>(path, "image log"); }
MaskGrid read_mask(const std::filesystem::path& path) { return read_kind<MaskGrid>(path, "mask"); }
ProbGrid read_prob(const std::filesystem::path& path) { return read_kind<ProbGrid>(path, "probability grid"); }

}  // namespace bkit
