#include <bkit/augment.hpp>

#include <bkit/errors.hpp>
#include <bkit/grid_io.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace bkit::augment {

void TrainingSample::validate() const {
    amplitude.validate();
    radius.validate();
    label.validate();
    require_same_geometry(amplitude.geometry, radius.geometry, "training sample");
    require_same_geometry(amplitude.geometry, label.geometry, "training sample");
    if (polarity == Polarity::negative && label.count() != 0) {
        throw InvariantError("negative sample must have an all-zero label");
    }
}

namespace {

template <class G, class F>
G remap(const G& src, F&& source_index) {
    G out = src;
    const auto& g = src.geometry;
    for (std::size_t r = 0; r < g.n_depth; ++r) {
        for (std::size_t c = 0; c < g.n_azimuth; ++c) {
            const auto [sr, sc] = source_index(r, c);
            out.at(r, c) = src.at(sr, sc);
        }
    }
    return out;
}

template <class F>
TrainingSample remap_all(const TrainingSample& s, F&& source_index) {
    return {remap(s.amplitude, source_index), remap(s.radius, source_index), remap(s.label, source_index), s.polarity};
}

float bilinear(const ImageLogGrid& g, double y, double x) {
    const auto rows = static_cast<double>(g.geometry.n_depth);
    const auto cols = static_cast<double>(g.geometry.n_azimuth);
    y = std::clamp(y, 0.0, rows - 1.0);
    x = std::clamp(x, 0.0, cols - 1.0);
    const auto y0 = static_cast<std::size_t>(std::floor(y));
    const auto x0 = static_cast<std::size_t>(std::floor(x));
    const std::size_t y1 = std::min(y0 + 1, g.geometry.n_depth - std::size_t{1});
    const std::size_t x1 = std::min(x0 + 1, g.geometry.n_azimuth - std::size_t{1});
    const double fy = y - static_cast<double>(y0);
    const double fx = x - static_cast<double>(x0);
    // Zero-weight neighbours are skipped so an exact grid point returns its sample unchanged.
    double acc = 0.0;
    auto add = [&](std::size_t r, std::size_t c, double w) {
        if (w != 0.0) acc += w * static_cast<double>(g.at(r, c));
    };
    add(y0, x0, (1.0 - fy) * (1.0 - fx));
    add(y0, x1, (1.0 - fy) * fx);
    add(y1, x0, fy * (1.0 - fx));
    add(y1, x1, fy * fx);
    if (fy == 0.0 && fx == 0.0) return g.at(y0, x0);
    return static_cast<float>(acc);
}

}  // namespace

TrainingSample flip_depth(const TrainingSample& s) {
    const std::size_t n = s.label.geometry.n_depth;
    return remap_all(s, [n](std::size_t r, std::size_t c) { return std::pair{n - 1 - r, c}; });
}

TrainingSample shift_azimuth(const TrainingSample& s, double theta_deg) {
    const auto n = static_cast<std::int64_t>(s.label.geometry.n_azimuth);
    const auto k = std::llround(theta_deg / s.label.geometry.azimuth_step());
    const std::int64_t shift = ((k % n) + n) % n;
    return remap_all(s, [n, shift](std::size_t r, std::size_t c) {
        return std::pair{r, static_cast<std::size_t>((static_cast<std::int64_t>(c) - shift + n) % n)};
    });
}

TrainingSample crop_resize(const TrainingSample& s, const CropWindow& w) {
    const auto& g = s.label.geometry;
    if (w.rows == 0 || w.cols == 0 || w.top + w.rows > g.n_depth || w.left + w.cols > g.n_azimuth) {
        throw ParameterError("crop window outside the patch");
    }
    const double sy = static_cast<double>(w.rows) / g.n_depth;
    const double sx = static_cast<double>(w.cols) / g.n_azimuth;
    TrainingSample out = s;
    for (std::size_t r = 0; r < g.n_depth; ++r) {
        // half-pixel centres: the identity window maps every cell onto itself
        const double y = static_cast<double>(w.top) + (static_cast<double>(r) + 0.5) * sy - 0.5;
        const auto ny = w.top + std::min(w.rows - 1, static_cast<std::size_t>((static_cast<double>(r) + 0.5) * sy));
        for (std::size_t c = 0; c < g.n_azimuth; ++c) {
            const double x = static_cast<double>(w.left) + (static_cast<double>(c) + 0.5) * sx - 0.5;
            const auto nx = w.left + std::min(w.cols - 1, static_cast<std::size_t>((static_cast<double>(c) + 0.5) * sx));
            out.label.at(r, c) = s.label.at(ny, nx);
            out.amplitude.at(r, c) = bilinear(s.amplitude, y, x);
            out.radius.at(r, c) = bilinear(s.radius, y, x);
        }
    }
    return out;
}

TrainingSample crop_enlarge(const TrainingSample& s, std::uint64_t rng_seed) {
    if (s.polarity == Polarity::negative) throw ParameterError("crop-and-enlarge is not applied to negative samples");
    const auto& g = s.label.geometry;
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < s.label.values.size(); ++i) {
        if (s.label.values[i] != 0) hits.push_back(i);
    }
    if (hits.empty()) throw InvariantError("crop-and-enlarge needs a positive sample with breakout cells");

    std::mt19937_64 rng(rng_seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    const std::size_t rows = uniform((g.n_depth + 1) / 2, g.n_depth);
    const std::size_t cols = uniform((g.n_azimuth + 1) / 2, g.n_azimuth);
    const std::size_t anchor = hits[uniform(0, hits.size() - 1)];
    const std::size_t ar = anchor / g.n_azimuth;
    const std::size_t ac = anchor % g.n_azimuth;
    // window must cover the anchor cell and stay inside the patch
    const std::size_t top = uniform(ar + 1 >= rows ? ar + 1 - rows : 0, std::min(ar, g.n_depth - rows));
    const std::size_t left = uniform(ac + 1 >= cols ? ac + 1 - cols : 0, std::min(ac, g.n_azimuth - cols));
    return crop_resize(s, {top, left, rows, cols});
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    // splitmix64 over the mixed inputs
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ a) ^ b);
}

std::vector<TrainingSample> augment_set(const std::vector<TrainingSample>& samples, const AugmentConfig& config,
                                        std::uint64_t seed) {
    if (!(config.shift_min_deg <= config.shift_max_deg)) throw ParameterError("shift range is empty");
    std::vector<TrainingSample> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const auto& ops = s.polarity == Polarity::positive ? config.positive : config.negative;
        for (std::size_t slot = 0; slot < ops.size(); ++slot) {
            const std::uint64_t op_seed = derive_seed(seed, i, slot);
            switch (ops[slot]) {
                case Op::identity: out.push_back(s); break;
                case Op::flip: out.push_back(flip_depth(s)); break;
                case Op::shift: {
                    std::mt19937_64 rng(op_seed);
                    const double theta =
                        std::uniform_real_distribution<double>(config.shift_min_deg, config.shift_max_deg)(rng);
                    out.push_back(shift_azimuth(s, theta));
                    break;
                }
                case Op::crop:
                    if (s.polarity == Polarity::negative) {
                        throw ParameterError("augment config applies crop to negative samples");
                    }
                    out.push_back(crop_enlarge(s, op_seed));
                    break;
            }
        }
    }
    return out;
}

namespace {

constexpr std::string_view kManifestHeader = "sample_id,polarity,amp_path,rad_path,label_path";

std::string_view polarity_text(Polarity p) { return p == Polarity::positive ? "positive" : "negative"; }

}  // namespace

std::vector<ManifestEntry> write_samples(const std::vector<TrainingSample>& samples, const std::filesystem::path& dir,
                                         const std::string& prefix) {
    std::filesystem::create_directories(dir);
    std::vector<ManifestEntry> entries;
    std::string manifest(kManifestHeader);
    manifest += '\n';
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        s.validate();
        ManifestEntry e;
        e.sample_id = fmt::format("{}_{:05d}", prefix, i);
        e.polarity = s.polarity;
        e.amp_path = e.sample_id + "_amp.igrid";
        e.rad_path = e.sample_id + "_rad.igrid";
        e.label_path = e.sample_id + "_label.igrid";
        write_grid(s.amplitude, dir / e.amp_path);
        write_grid(s.radius, dir / e.rad_path);
        write_grid(s.label, dir / e.label_path);
        manifest += fmt::format("{},{},{},{},{}\n", e.sample_id, polarity_text(e.polarity), e.amp_path.string(),
                                e.rad_path.string(), e.label_path.string());
        entries.push_back(std::move(e));
    }
    write_file_atomic(dir / "manifest.csv",
                      std::span(reinterpret_cast<const std::uint8_t*>(manifest.data()), manifest.size()));
    return entries;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open " + manifest_path.string());
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != kManifestHeader) throw ParseError(ParseError::Locus::line, 1, "missing manifest header");
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (std::size_t comma; (comma = line.find(',', start)) != std::string::npos; start = comma + 1) {
            f.push_back(line.substr(start, comma - start));
        }
        f.push_back(line.substr(start));
        if (f.size() != 5) throw ParseError(ParseError::Locus::line, line_no, "expected 5 fields");
        ManifestEntry e;
        e.sample_id = f[0];
        if (f[1] == "positive") {
            e.polarity = Polarity::positive;
        } else if (f[1] == "negative") {
            e.polarity = Polarity::negative;
        } else {
            throw ParseError(ParseError::Locus::line, line_no, "polarity must be positive or negative");
        }
        e.amp_path = f[2];
        e.rad_path = f[3];
        e.label_path = f[4];
        entries.push_back(std::move(e));
    }
    if (line_no == 0) throw ParseError(ParseError::Locus::line, 1, "missing manifest header");
    return entries;
}

std::vector<TrainingSample> load_samples(const std::filesystem::path& manifest_path) {
    const auto base = manifest_path.parent_path();
    std::vector<TrainingSample> samples;
    for (const auto& e : read_manifest(manifest_path)) {
        TrainingSample s{read_image_log(base / e.amp_path), read_image_log(base / e.rad_path),
                         read_mask(base / e.label_path), e.polarity};
        s.validate();
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace bkit::augment
