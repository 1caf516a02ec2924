#include <bkit/synthgen.hpp>

#include <bkit/errors.hpp>
#include <bkit/postproc.hpp>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <utility>

namespace bkit::synth {

namespace {

constexpr double kZoneEdgeContrast = 0.5;

enum class CellClass : std::uint8_t { none, breakout, keyseat, washout, other };

// Per-cell anomaly layer; the last feature to touch a cell owns it.
struct Canvas {
    const GridGeometry& g;
    std::vector<float> d_amp;
    std::vector<float> d_rad;
    std::vector<CellClass> cls;
    std::vector<int> owner;
    std::size_t overlaps = 0;

    explicit Canvas(const GridGeometry& geometry)
        : g(geometry),
          d_amp(geometry.cell_count(), 0.0f),
          d_rad(geometry.cell_count(), 0.0f),
          cls(geometry.cell_count(), CellClass::none),
          owner(geometry.cell_count(), -1) {}

    void paint(std::size_t row, std::size_t col, int feature, double da, double dr, CellClass c) {
        const std::size_t i = row * g.n_azimuth + col;
        if (owner[i] >= 0 && owner[i] != feature) ++overlaps;
        owner[i] = feature;
        d_amp[i] = static_cast<float>(da);
        d_rad[i] = static_cast<float>(dr);
        cls[i] = c;
    }
};

// Rows with depth in [top, bottom).
std::pair<std::size_t, std::size_t> row_span(const GridGeometry& g, double top, double bottom) {
    const double a = std::ceil((top - g.depth_start) / g.depth_step - 1e-9);
    const double b = std::ceil((bottom - g.depth_start) / g.depth_step - 1e-9);
    const auto clamp = [&](double v) {
        return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(g.n_depth)));
    };
    return {clamp(a), clamp(b)};
}

// Lattice-aligned columns of a zone centred on `center_deg`.
std::pair<std::int64_t, std::int64_t> column_span(const GridGeometry& g, double center_deg, double width_deg) {
    const double step = g.azimuth_step();
    const auto len = std::max<std::int64_t>(1, std::llround(width_deg / step));
    const double left = wrap360(center_deg - static_cast<double>(len) * step / 2.0);
    const auto start = std::llround(left / step) % static_cast<std::int64_t>(g.n_azimuth);
    return {start, len};
}

// Contrast weight across a zone: `edge` at the borders rising linearly to 1 at the centre.
// Spalled zones are deepest mid-zone; stripes use edge = 1 (flat).
double taper(std::int64_t k, std::int64_t len, double edge) {
    const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(len);
    return edge + (1.0 - edge) * (1.0 - std::abs(2.0 * u - 1.0));
}

void paint_zone(Canvas& canvas, int feature, double center_deg, double width_deg, std::size_t r0, std::size_t r1,
                double da, double dr, CellClass c, double edge = 1.0) {
    const auto [start, len] = column_span(canvas.g, center_deg, width_deg);
    const auto n = static_cast<std::int64_t>(canvas.g.n_azimuth);
    for (std::size_t r = r0; r < r1; ++r) {
        for (std::int64_t k = 0; k < len; ++k) {
            const double w = taper(k, len, edge);
            canvas.paint(r, static_cast<std::size_t>((start + k) % n), feature, da * w, dr * w, c);
        }
    }
}

void check_depths(const GridGeometry& g, double top, double bottom, std::size_t index) {
    const double end = g.depth_start + g.n_depth * g.depth_step;
    if (!(top < bottom) || top < g.depth_start - 1e-9 || bottom > end + 1e-9) {
        throw InvariantError(fmt::format("feature {}: depth span [{}, {}) outside grid [{}, {})", index, top, bottom,
                                         g.depth_start, end));
    }
}

void check_width(double w, std::size_t index) {
    if (!(w > 0.0 && w < 180.0)) throw InvariantError(fmt::format("feature {}: width {} outside (0, 180)", index, w));
}

}  // namespace

void SceneSpec::validate() const {
    geometry.validate();
    if (!(background.amplitude_sigma >= 0.0) || !(background.radius_sigma >= 0.0) || !(speckle_level >= 0.0)) {
        throw InvariantError("scene: noise levels must be non-negative");
    }
    if (!(background.radius_mean > 0.0)) throw InvariantError("scene: radius mean must be positive");
    for (std::size_t i = 0; i < features.size(); ++i) {
        std::visit(
            [&](const auto& f) {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, BreakoutPair> || std::is_same_v<F, Keyseat>) {
                    check_width(f.width_deg, i);
                    check_depths(geometry, f.depth_top, f.depth_bottom, i);
                } else if constexpr (std::is_same_v<F, Washout>) {
                    check_depths(geometry, f.depth_top, f.depth_bottom, i);
                } else if constexpr (std::is_same_v<F, ArtifactStripes>) {
                    check_width(f.width_deg, i);
                } else {
                    const double half = std::abs(f.sine_amplitude_m) + f.thickness_m / 2.0;
                    check_depths(geometry, f.depth_mid - half, f.depth_mid + half, i);
                    if (!(f.thickness_m > 0.0)) throw InvariantError(fmt::format("feature {}: thickness must be positive", i));
                }
            },
            features[i]);
    }
}

Scene render(const SceneSpec& spec) {
    spec.validate();
    const GridGeometry& g = spec.geometry;
    Canvas canvas(g);

    for (std::size_t i = 0; i < spec.features.size(); ++i) {
        const int id = static_cast<int>(i);
        std::visit(
            [&](const auto& f) {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, BreakoutPair>) {
                    const auto [r0, r1] = row_span(g, f.depth_top, f.depth_bottom);
                    paint_zone(canvas, id, f.azimuth_deg, f.width_deg, r0, r1, -f.delta_amplitude, f.delta_radius,
                               CellClass::breakout, kZoneEdgeContrast);
                    paint_zone(canvas, id, f.azimuth_deg + 180.0 + f.asymmetry_deg, f.width_deg, r0, r1,
                               -f.delta_amplitude, f.delta_radius, CellClass::breakout, kZoneEdgeContrast);
                } else if constexpr (std::is_same_v<F, Keyseat>) {
                    const auto [r0, r1] = row_span(g, f.depth_top, f.depth_bottom);
                    paint_zone(canvas, id, f.azimuth_deg, f.width_deg, r0, r1, -f.delta_amplitude, f.delta_radius,
                               CellClass::keyseat, kZoneEdgeContrast);
                } else if constexpr (std::is_same_v<F, ArtifactStripes>) {
                    for (double center : {f.azimuth_deg, f.azimuth_deg + 180.0}) {
                        paint_zone(canvas, id, center, f.width_deg, 0, g.n_depth, -f.delta_amplitude, 0.0,
                                   CellClass::other);
                    }
                } else if constexpr (std::is_same_v<F, Washout>) {
                    const auto [r0, r1] = row_span(g, f.depth_top, f.depth_bottom);
                    for (std::size_t r = r0; r < r1; ++r) {
                        for (std::size_t c = 0; c < g.n_azimuth; ++c) {
                            canvas.paint(r, c, id, -f.delta_amplitude, f.delta_radius, CellClass::washout);
                        }
                    }
                } else {
                    const double step = g.azimuth_step();
                    for (std::size_t c = 0; c < g.n_azimuth; ++c) {
                        const double phi = (static_cast<double>(c) + 0.5) * step;
                        const double trace =
                            f.depth_mid + f.sine_amplitude_m * std::sin((phi + f.phase_deg) * std::numbers::pi / 180.0);
                        const auto [r0, r1] = row_span(g, trace - f.thickness_m / 2.0, trace + f.thickness_m / 2.0);
                        for (std::size_t r = r0; r < r1; ++r) {
                            canvas.paint(r, c, id, -f.delta_amplitude, -std::abs(f.delta_radius), CellClass::other);
                        }
                    }
                }
            },
            spec.features[i]);
    }
    if (canvas.overlaps > 0) {
        spdlog::warn("render: {} cells painted by more than one feature; the later feature wins", canvas.overlaps);
    }

    Scene scene;
    scene.overlapping_cells = canvas.overlaps;
    scene.amplitude = ImageLogGrid::filled(g, Channel::amplitude, 0.0f);
    scene.radius = ImageLogGrid::filled(g, Channel::radius, 0.0f);
    scene.truth_mask = MaskGrid::zeros(g);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> amp_noise(0.0, 1.0);
    const double amp_sd = spec.background.amplitude_sigma * spec.speckle_level;
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
        scene.amplitude.values[i] =
            static_cast<float>(spec.background.amplitude_mean + canvas.d_amp[i] + amp_sd * amp_noise(rng));
    }
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
        const double r = spec.background.radius_mean + canvas.d_rad[i] + spec.background.radius_sigma * amp_noise(rng);
        scene.radius.values[i] = static_cast<float>(std::max(r, 1e-3));
    }
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
        const CellClass c = canvas.cls[i];
        const bool truth = c == CellClass::breakout || c == CellClass::washout ||
                           (spec.include_keyseats_in_truth && c == CellClass::keyseat);
        scene.truth_mask.values[i] = static_cast<std::uint8_t>(truth);
    }
    scene.truth_picks = picks_from_mask(scene.truth_mask, kMinBreakoutWidthDeg, PickSource::synthetic);
    return scene;
}

namespace {

SceneSpec base_scene(std::uint64_t seed) {
    SceneSpec s;
    s.geometry = GridGeometry::make(400, 720, 100.0, 0.05);
    s.seed = seed;
    return s;
}

constexpr double kDeltaAmp = 0.1;   // 2 sd of the background amplitude
constexpr double kDeltaRad = 5.0;   // mm

}  // namespace

SceneSpec scene_suite(std::string_view name) {
    if (name == "clean_pair") {
        SceneSpec s = base_scene(11);
        s.features.push_back(BreakoutPair{143.0, 0.0, 45.0, 102.0, 118.0, kDeltaAmp, kDeltaRad});
        return s;
    }
    if (name == "keyseat") {
        SceneSpec s = base_scene(12);
        s.features.push_back(Keyseat{60.0, 40.0, 104.0, 116.0, kDeltaAmp, kDeltaRad});
        return s;
    }
    if (name == "fracture") {
        SceneSpec s = base_scene(13);
        s.features.push_back(Fracture{110.0, 1.5, 0.0, 0.3, 1.5 * kDeltaAmp, 3.0});
        return s;
    }
    if (name == "artifact") {
        SceneSpec s = base_scene(14);
        s.features.push_back(ArtifactStripes{30.0, 15.0, 1.5 * kDeltaAmp});
        return s;
    }
    if (name == "mixed") {
        SceneSpec s = base_scene(15);
        s.features.push_back(ArtifactStripes{30.0, 12.0, 1.5 * kDeltaAmp});
        s.features.push_back(BreakoutPair{143.0, 0.0, 45.0, 101.0, 107.0, kDeltaAmp, kDeltaRad});
        s.features.push_back(Keyseat{70.0, 40.0, 109.0, 113.0, kDeltaAmp, kDeltaRad});
        s.features.push_back(Fracture{116.5, 1.0, 0.0, 0.3, 1.5 * kDeltaAmp, 3.0});
        return s;
    }
    if (name == "washout") {
        SceneSpec s = base_scene(16);
        s.features.push_back(BreakoutPair{143.0, 0.0, 45.0, 102.0, 108.0, kDeltaAmp, kDeltaRad});
        s.features.push_back(Washout{110.0, 114.0, kDeltaAmp, 8.0});
        return s;
    }
    if (name == "asymmetric_pair") {
        SceneSpec s = base_scene(17);
        s.features.push_back(BreakoutPair{143.0, 30.0, 45.0, 102.0, 118.0, kDeltaAmp, kDeltaRad});
        return s;
    }
    throw ParameterError(fmt::format("unknown scene '{}'", name));
}

// ---------------------------------------------------------------------------
// Key-value text form

namespace {

template <class F>
using Fields = std::vector<std::pair<std::string_view, double F::*>>;

const Fields<BreakoutPair>& fields(const BreakoutPair*) {
    static const Fields<BreakoutPair> f{{"azimuth_deg", &BreakoutPair::azimuth_deg},
                                        {"asymmetry_deg", &BreakoutPair::asymmetry_deg},
                                        {"width_deg", &BreakoutPair::width_deg},
                                        {"depth_top", &BreakoutPair::depth_top},
                                        {"depth_bottom", &BreakoutPair::depth_bottom},
                                        {"delta_amplitude", &BreakoutPair::delta_amplitude},
                                        {"delta_radius", &BreakoutPair::delta_radius}};
    return f;
}
const Fields<Keyseat>& fields(const Keyseat*) {
    static const Fields<Keyseat> f{{"azimuth_deg", &Keyseat::azimuth_deg},
                                   {"width_deg", &Keyseat::width_deg},
                                   {"depth_top", &Keyseat::depth_top},
                                   {"depth_bottom", &Keyseat::depth_bottom},
                                   {"delta_amplitude", &Keyseat::delta_amplitude},
                                   {"delta_radius", &Keyseat::delta_radius}};
    return f;
}
const Fields<Fracture>& fields(const Fracture*) {
    static const Fields<Fracture> f{{"depth_mid", &Fracture::depth_mid},
                                    {"sine_amplitude_m", &Fracture::sine_amplitude_m},
                                    {"phase_deg", &Fracture::phase_deg},
                                    {"thickness_m", &Fracture::thickness_m},
                                    {"delta_amplitude", &Fracture::delta_amplitude},
                                    {"delta_radius", &Fracture::delta_radius}};
    return f;
}
const Fields<ArtifactStripes>& fields(const ArtifactStripes*) {
    static const Fields<ArtifactStripes> f{{"azimuth_deg", &ArtifactStripes::azimuth_deg},
                                           {"width_deg", &ArtifactStripes::width_deg},
                                           {"delta_amplitude", &ArtifactStripes::delta_amplitude}};
    return f;
}
const Fields<Washout>& fields(const Washout*) {
    static const Fields<Washout> f{{"depth_top", &Washout::depth_top},
                                   {"depth_bottom", &Washout::depth_bottom},
                                   {"delta_amplitude", &Washout::delta_amplitude},
                                   {"delta_radius", &Washout::delta_radius}};
    return f;
}

constexpr std::string_view type_name(const BreakoutPair*) { return "breakout_pair"; }
constexpr std::string_view type_name(const Keyseat*) { return "keyseat"; }
constexpr std::string_view type_name(const Fracture*) { return "fracture"; }
constexpr std::string_view type_name(const ArtifactStripes*) { return "artifact_stripes"; }
constexpr std::string_view type_name(const Washout*) { return "washout"; }

std::optional<FeatureSpec> feature_of_type(std::string_view type) {
    if (type == "breakout_pair") return BreakoutPair{};
    if (type == "keyseat") return Keyseat{};
    if (type == "fracture") return Fracture{};
    if (type == "artifact_stripes") return ArtifactStripes{};
    if (type == "washout") return Washout{};
    return std::nullopt;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string format_scene(const SceneSpec& spec) {
    std::string out;
    auto kv = [&](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
    kv("geometry.n_depth", spec.geometry.n_depth);
    kv("geometry.n_azimuth", spec.geometry.n_azimuth);
    kv("geometry.depth_start", spec.geometry.depth_start);
    kv("geometry.depth_step", spec.geometry.depth_step);
    kv("background.amplitude_mean", spec.background.amplitude_mean);
    kv("background.amplitude_sigma", spec.background.amplitude_sigma);
    kv("background.radius_mean", spec.background.radius_mean);
    kv("background.radius_sigma", spec.background.radius_sigma);
    kv("speckle_level", spec.speckle_level);
    kv("seed", spec.seed);
    kv("include_keyseats_in_truth", spec.include_keyseats_in_truth ? "true" : "false");
    for (std::size_t i = 0; i < spec.features.size(); ++i) {
        std::visit(
            [&](const auto& f) {
                using F = std::decay_t<decltype(f)>;
                kv(fmt::format("feature.{}.type", i), type_name(static_cast<const F*>(nullptr)));
                for (const auto& [name, member] : fields(static_cast<const F*>(nullptr))) {
                    kv(fmt::format("feature.{}.{}", i, name), f.*member);
                }
            },
            spec.features[i]);
    }
    return out;
}

SceneSpec parse_scene(std::string_view text) {
    SceneSpec spec;
    spec.geometry = GridGeometry{};
    std::map<std::size_t, FeatureSpec> features;
    std::map<std::size_t, std::vector<std::tuple<std::string, std::string, std::size_t>>> pending;

    auto fail = [](std::size_t line, const std::string& what) {
        throw ParseError(ParseError::Locus::line, line, what);
    };
    auto to_double = [&](std::string_view v, std::size_t line) {
        double d = 0.0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
        if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) fail(line, fmt::format("'{}' is not a number", v));
        return d;
    };
    auto to_uint = [&](std::string_view v, std::size_t line) {
        std::uint64_t u = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), u);
        if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) {
            fail(line, fmt::format("'{}' is not an unsigned integer", v));
        }
        return u;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') {
            if (eol == text.size()) break;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "geometry.n_depth") {
            spec.geometry.n_depth = static_cast<std::uint32_t>(to_uint(value, line_no));
        } else if (key == "geometry.n_azimuth") {
            spec.geometry.n_azimuth = static_cast<std::uint32_t>(to_uint(value, line_no));
        } else if (key == "geometry.depth_start") {
            spec.geometry.depth_start = to_double(value, line_no);
        } else if (key == "geometry.depth_step") {
            spec.geometry.depth_step = to_double(value, line_no);
        } else if (key == "background.amplitude_mean") {
            spec.background.amplitude_mean = to_double(value, line_no);
        } else if (key == "background.amplitude_sigma") {
            spec.background.amplitude_sigma = to_double(value, line_no);
        } else if (key == "background.radius_mean") {
            spec.background.radius_mean = to_double(value, line_no);
        } else if (key == "background.radius_sigma") {
            spec.background.radius_sigma = to_double(value, line_no);
        } else if (key == "speckle_level") {
            spec.speckle_level = to_double(value, line_no);
        } else if (key == "seed") {
            spec.seed = to_uint(value, line_no);
        } else if (key == "include_keyseats_in_truth") {
            if (value != "true" && value != "false") fail(line_no, "expected true or false");
            spec.include_keyseats_in_truth = value == "true";
        } else if (key.starts_with("feature.")) {
            const auto rest = key.substr(8);
            const auto dot = rest.find('.');
            if (dot == std::string_view::npos) fail(line_no, "expected feature.<n>.<field>");
            const std::size_t index = to_uint(rest.substr(0, dot), line_no);
            const std::string_view field = rest.substr(dot + 1);
            if (field == "type") {
                auto f = feature_of_type(value);
                if (!f) fail(line_no, fmt::format("unknown feature type '{}'", value));
                if (features.contains(index)) fail(line_no, fmt::format("feature {} declared twice", index));
                features.emplace(index, *f);
            } else {
                pending[index].emplace_back(std::string(field), std::string(value), line_no);
            }
        } else {
            fail(line_no, fmt::format("unknown key '{}'", key));
        }
        if (eol == text.size()) break;
    }

    for (auto& [index, entries] : pending) {
        auto it = features.find(index);
        if (it == features.end()) {
            fail(std::get<2>(entries.front()), fmt::format("feature {} has no type", index));
        }
        for (const auto& [field, value, line] : entries) {
            std::visit(
                [&](auto& f) {
                    using F = std::decay_t<decltype(f)>;
                    for (const auto& [name, member] : fields(static_cast<const F*>(nullptr))) {
                        if (name == field) {
                            f.*member = to_double(value, line);
                            return;
                        }
                    }
                    fail(line, fmt::format("feature {} ({}) has no field '{}'", index,
                                           type_name(static_cast<const F*>(nullptr)), field));
                },
                it->second);
        }
    }
    std::size_t expected = 0;
    for (auto& [index, f] : features) {
        if (index != expected++) fail(line_no, fmt::format("feature indices must be contiguous from 0, missing {}", expected - 1));
        spec.features.push_back(std::move(f));
    }
    try {
        spec.validate();
    } catch (const InvariantError& e) {
        fail(line_no, e.what());
    }
    return spec;
}

}  // namespace bkit::synth
