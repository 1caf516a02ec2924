#pragma once

#include <bkit/grid.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bkit::augment {

enum class Polarity { positive, negative };

// Co-registered amplitude / radius / label patches. Negative samples carry all-zero labels.
struct TrainingSample {
    ImageLogGrid amplitude;
    ImageLogGrid radius;
    MaskGrid label;
    Polarity polarity = Polarity::positive;

    void validate() const;  // throws InvariantError / ShapeError
    friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

TrainingSample flip_depth(const TrainingSample& s);

// Column shift k = round(theta / azimuth_step); content at column c moves to c + k (mod n).
TrainingSample shift_azimuth(const TrainingSample& s, double theta_deg);

// Axis-aligned window of rows x cols starting at (top, left), resized back to full size:
// nearest neighbour for the label, bilinear for amplitude and radius.
struct CropWindow {
    std::size_t top = 0;
    std::size_t left = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
};
TrainingSample crop_resize(const TrainingSample& s, const CropWindow& window);

// Random window, each side in [n/2, n], that contains at least one breakout cell.
// Throws ParameterError for negative samples and InvariantError for an empty positive label.
TrainingSample crop_enlarge(const TrainingSample& s, std::uint64_t rng_seed);

enum class Op { identity, flip, shift, crop };

struct AugmentConfig {
    std::vector<Op> positive{Op::identity, Op::flip, Op::shift, Op::shift, Op::crop};
    std::vector<Op> negative{Op::identity, Op::flip, Op::shift, Op::shift, Op::shift};
    double shift_min_deg = 45.0;
    double shift_max_deg = 135.0;
};

// Every sample yields one output per operator in its polarity's list, in list order.
// Randomness is derived from (seed, sample index, operator slot), so results do not depend
// on evaluation order.
std::vector<TrainingSample> augment_set(const std::vector<TrainingSample>& samples, const AugmentConfig& config,
                                        std::uint64_t seed);

// Manifest CSV: sample_id,polarity,amp_path,rad_path,label_path (paths relative to the manifest).
struct ManifestEntry {
    std::string sample_id;
    Polarity polarity = Polarity::positive;
    std::filesystem::path amp_path;
    std::filesystem::path rad_path;
    std::filesystem::path label_path;
};

std::vector<ManifestEntry> write_samples(const std::vector<TrainingSample>& samples, const std::filesystem::path& dir,
                                         const std::string& prefix = "sample");
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path);
std::vector<TrainingSample> load_samples(const std::filesystem::path& manifest_path);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

}  // namespace bkit::augment
