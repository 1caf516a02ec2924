// breakout: command-line front end for the borehole breakout toolkit.
//
// Exit codes: 0 ok, 2 input/parse/IO error, 3 parameter error, 4 internal error.

#include "commands.hpp"

#include <bkit/errors.hpp>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>

namespace {

constexpr int kExitInput = 2;
constexpr int kExitParameter = 3;
constexpr int kExitInternal = 4;

void add_peak_options(CLI::App* cmd, bkit::PeakDetectParams& p) {
    cmd->add_option("--smooth-window", p.smooth_window_deg, "Smoothing window in degrees")->capture_default_str();
    cmd->add_option("--k-amp", p.k_amp, "Amplitude threshold in row standard deviations")->capture_default_str();
    cmd->add_option("--k-rad", p.k_rad, "Radius threshold in row standard deviations")->capture_default_str();
    cmd->add_option("--min-width", p.min_width_deg, "Minimum breakout width in degrees")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Borehole breakout picking, validation and evaluation"};
    app.require_subcommand(1);

    cli::RunContext ctx;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized steps");
    app.add_flag("--force", ctx.force, "Overwrite existing outputs");
    app.add_flag("--quiet", ctx.quiet, "Only report errors");

    cli::PostprocArgs post;
    auto* c_post = app.add_subcommand("postproc", "Extract breakout picks from a probability or mask grid");
    c_post->add_option("input", post.input, "Probability or mask IGRID file")->required();
    c_post->add_option("--threshold", post.threshold, "Binarization threshold")->capture_default_str();
    c_post->add_option("--min-width", post.min_width_deg, "Minimum breakout width in degrees")->capture_default_str();
    c_post->add_option("-o,--output", post.output, "Output CSV name")->capture_default_str();

    cli::ValidateArgs val;
    auto* c_val = app.add_subcommand("validate", "Apply the paired-azimuth symmetry check to picks");
    c_val->add_option("picks", val.picks, "Pick CSV")->required();
    c_val->add_option("--grid-step", val.grid_step, "Resample to this depth step (m) before grouping");
    c_val->add_option("--retained", val.retained, "Output CSV for retained picks")->capture_default_str();
    c_val->add_option("--rejected", val.rejected, "Output CSV for rejected picks")->capture_default_str();

    cli::PeakdetectArgs peak;
    auto* c_peak = app.add_subcommand("peakdetect", "Rule-based picks from amplitude and radius logs");
    c_peak->add_option("--amplitude", peak.amplitude, "Amplitude IGRID")->required();
    c_peak->add_option("--radius", peak.radius, "Radius IGRID")->required();
    add_peak_options(c_peak, peak.params);
    c_peak->add_flag("--validate", peak.params.apply_symmetry_validation, "Keep only symmetric pairs");
    c_peak->add_option("-o,--output", peak.output, "Output CSV name")->capture_default_str();

    cli::EvaluateArgs ev;
    auto* c_ev = app.add_subcommand("evaluate", "Compare automatic picks with manual picks");
    c_ev->add_option("--auto", ev.automatic, "Automatic pick CSV")->required();
    c_ev->add_option("--manual", ev.manual, "Manual pick CSV")->required();
    c_ev->add_option("--pred", ev.pred, "Predicted mask or probability IGRID");
    c_ev->add_option("--label", ev.label, "Label mask IGRID");
    c_ev->add_option("--threshold", ev.threshold, "Threshold for probability grids")->capture_default_str();
    c_ev->add_option("--az-tol", ev.az_tol_deg, "Azimuth match tolerance in degrees")->capture_default_str();
    c_ev->add_option("--step", ev.step, "Evaluation depth step in m (<= 0: native depths)")->capture_default_str();
    c_ev->add_option("--native-step", ev.native_step, "Native row spacing for WSM zones when --step <= 0");
    c_ev->add_option("--report", ev.report, "Report JSON name")->capture_default_str();
    c_ev->add_option("--rose", ev.rose, "Rose histogram CSV name")->capture_default_str();

    cli::BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Method comparison table over boreholes");
    c_bench->add_option("--scene", bench.scenes, "Suite scene name or scene file (repeatable)");
    c_bench->add_option("--config", bench.config, "Bench JSON config");
    add_peak_options(c_bench, bench.params);
    c_bench->add_option("--az-tol", bench.az_tol_deg, "Azimuth match tolerance in degrees")->capture_default_str();
    c_bench->add_option("--step", bench.step, "Evaluation depth step in m (<= 0: native depths)")->capture_default_str();
    c_bench->add_option("-o,--output", bench.output, "Output JSON name")->capture_default_str();

    cli::AugmentArgs aug;
    auto* c_aug = app.add_subcommand("augment", "Augment a training-sample manifest (needs --seed)");
    c_aug->add_option("manifest", aug.manifest, "Input manifest CSV")->required();
    c_aug->add_option("--prefix", aug.prefix, "Output sample id prefix")->capture_default_str();

    cli::SynthArgs syn;
    auto* c_syn = app.add_subcommand("synth", "Render a synthetic image log with ground truth");
    c_syn->add_option("--scene", syn.scene, "Suite scene name or scene file")->required();

    cli::StressArgs st;
    auto* c_st = app.add_subcommand("stress", "Maximum horizontal stress from breakout width");
    c_st->add_option("--width-deg", st.width_deg, "Breakout width in degrees");
    c_st->add_option("--shmin", st.shmin, "Minimum horizontal stress (MPa)")->required();
    c_st->add_option("--pf", st.pf, "Pore pressure (MPa)")->required();
    c_st->add_option("--cef", st.cef, "Effective rock strength (MPa)")->required();
    c_st->add_option("--sweep", st.sweep, "Baseline widths lo:hi:step");
    c_st->add_option("--dwidth", st.dwidth_deg, "Width error in degrees");
    c_st->add_option("-o,--output", st.output, "Write CSV to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParameter;
    }

    ctx.out_dir = out_dir;
    if (*seed_opt) ctx.seed = seed;
    spdlog::set_level(ctx.quiet ? spdlog::level::err : spdlog::level::warn);

    try {
        if (*c_post) cli::cmd_postproc(ctx, post);
        else if (*c_val) cli::cmd_validate(ctx, val);
        else if (*c_peak) cli::cmd_peakdetect(ctx, peak);
        else if (*c_ev) cli::cmd_evaluate(ctx, ev);
        else if (*c_bench) cli::cmd_bench(ctx, bench);
        else if (*c_aug) cli::cmd_augment(ctx, aug);
        else if (*c_syn) cli::cmd_synth(ctx, syn);
        else if (*c_st) cli::cmd_stress(ctx, st);
        return 0;
    } catch (const bkit::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const bkit::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const bkit::ShapeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const cli::OutputExists& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const bkit::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const bkit::RangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const bkit::SingularityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const bkit::InvariantError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
