#pragma once

#include <bkit/grid.hpp>
#include <bkit/picks.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bkit::synth {

// Two low-amplitude, enlarged-radius patches on opposite sides of the hole:
// one centred on azimuth_deg, the other on azimuth_deg + 180 + asymmetry_deg.
struct BreakoutPair {
    double azimuth_deg = 0.0;
    double asymmetry_deg = 0.0;
    double width_deg = 0.0;
    double depth_top = 0.0;
    double depth_bottom = 0.0;  // exclusive
    double delta_amplitude = 0.0;
    double delta_radius = 0.0;  // mm, added
};

// One-sided groove worn by the drill string.
struct Keyseat {
    double azimuth_deg = 0.0;
    double width_deg = 0.0;
    double depth_top = 0.0;
    double depth_bottom = 0.0;
    double delta_amplitude = 0.0;
    double delta_radius = 0.0;
};

// Open fracture: a sinusoidal band depth(phi) = depth_mid + sine_amplitude * sin(phi + phase),
// darker and with a reduced radius.
struct Fracture {
    double depth_mid = 0.0;
    double sine_amplitude_m = 0.0;
    double phase_deg = 0.0;
    double thickness_m = 0.0;
    double delta_amplitude = 0.0;
    double delta_radius = 0.0;  // mm, subtracted
};

// Pair of full-length low-amplitude stripes 180 degrees apart with no radius change.
struct ArtifactStripes {
    double azimuth_deg = 0.0;
    double width_deg = 0.0;
    double delta_amplitude = 0.0;
};

// Full-circumference enlargement over a depth interval.
struct Washout {
    double depth_top = 0.0;
    double depth_bottom = 0.0;
    double delta_amplitude = 0.0;
    double delta_radius = 0.0;
};

using FeatureSpec = std::variant<BreakoutPair, Keyseat, Fracture, ArtifactStripes, Washout>;

struct Background {
    double amplitude_mean = 1.0;
    double amplitude_sigma = 0.05;
    double radius_mean = 108.0;  // mm
    double radius_sigma = 0.2;   // mm
};

struct SceneSpec {
    GridGeometry geometry;
    Background background;
    std::vector<FeatureSpec> features;
    double speckle_level = 1.0;  // amplitude noise sd = speckle_level * amplitude_sigma
    std::uint64_t seed = 0;
    bool include_keyseats_in_truth = false;

    // Throws InvariantError.
    void validate() const;
};

struct Scene {
    ImageLogGrid amplitude;
    ImageLogGrid radius;
    MaskGrid truth_mask;
    PickSet truth_picks;
    std::size_t overlapping_cells = 0;
};

// Deterministic for a given spec. Where features overlap, the later one owns the cell.
// The truth mask marks breakout-pair and washout cells (and keyseats when enabled).
Scene render(const SceneSpec& spec);

inline constexpr std::string_view kSceneNames[] = {"clean_pair", "keyseat", "fracture", "artifact",
                                                   "mixed",      "washout", "asymmetric_pair"};

// Canonical fixed-seed scenes. Throws ParameterError for an unknown name.
SceneSpec scene_suite(std::string_view name);

// Flat `key = value` text, one entry per line; features as `feature.<n>.<field>`.
std::string format_scene(const SceneSpec& spec);
// Throws ParseError naming the line.
SceneSpec parse_scene(std::string_view text);

}  // namespace bkit::synth
