#pragma once

#include <bkit/peakdetect.hpp>
#include <bkit/postproc.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// An output file already exists and --force was not given.
class OutputExists : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunContext {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
    bool force = false;
    bool quiet = false;

    // Resolves `name` under out_dir. Throws OutputExists unless the file is absent or --force is set.
    std::filesystem::path claim(const std::string& name) const;
    void write_text(const std::filesystem::path& path, const std::string& text) const;
    // Progress line on stdout, suppressed by --quiet.
    void note(const std::string& line) const;
};

struct PostprocArgs {
    std::filesystem::path input;
    double threshold = bkit::kDefaultThreshold;
    double min_width_deg = bkit::kMinBreakoutWidthDeg;
    std::string output = "picks.csv";
};
void cmd_postproc(const RunContext& ctx, const PostprocArgs& args);

struct ValidateArgs {
    std::filesystem::path picks;
    double grid_step = 0.0;  // > 0: resample before grouping by depth
    std::string retained = "retained.csv";
    std::string rejected = "rejected.csv";
};
void cmd_validate(const RunContext& ctx, const ValidateArgs& args);

struct PeakdetectArgs {
    std::filesystem::path amplitude;
    std::filesystem::path radius;
    bkit::PeakDetectParams params;
    std::string output = "picks.csv";
};
void cmd_peakdetect(const RunContext& ctx, const PeakdetectArgs& args);

struct EvaluateArgs {
    std::filesystem::path automatic;
    std::filesystem::path manual;
    std::optional<std::filesystem::path> pred;
    std::optional<std::filesystem::path> label;
    double threshold = bkit::kDefaultThreshold;
    double az_tol_deg = 30.0;
    double step = 0.2;
    double native_step = 0.0;
    std::string report = "report.json";
    std::string rose = "rose.csv";
};
void cmd_evaluate(const RunContext& ctx, const EvaluateArgs& args);

struct BenchArgs {
    std::vector<std::string> scenes;
    std::optional<std::filesystem::path> config;
    bkit::PeakDetectParams params;
    double az_tol_deg = 30.0;
    double step = 0.2;
    std::string output = "bench.json";
};
void cmd_bench(const RunContext& ctx, const BenchArgs& args);

struct AugmentArgs {
    std::filesystem::path manifest;
    std::string prefix = "aug";
};
void cmd_augment(const RunContext& ctx, const AugmentArgs& args);

struct SynthArgs {
    std::string scene;
};
void cmd_synth(const RunContext& ctx, const SynthArgs& args);

struct StressArgs {
    std::optional<double> width_deg;
    double shmin = 0.0;
    double pf = 0.0;
    double cef = 0.0;
    std::optional<std::string> sweep;  // lo:hi:step
    double dwidth_deg = 0.0;
    std::optional<std::string> output;
};
void cmd_stress(const RunContext& ctx, const StressArgs& args);

}  // namespace cli
