#include "commands.hpp"

#include <bkit/augment.hpp>
#include <bkit/errors.hpp>
#include <bkit/evaluation.hpp>
#include <bkit/grid_io.hpp>
#include <bkit/stress.hpp>
#include <bkit/synthgen.hpp>
#include <bkit/validation.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>

namespace cli {

namespace fs = std::filesystem;
using namespace bkit;

fs::path RunContext::claim(const std::string& name) const {
    const fs::path path = out_dir / name;
    if (!force && fs::exists(path)) {
        throw OutputExists(fmt::format("{} exists; pass --force to overwrite", path.string()));
    }
    return path;
}

void RunContext::write_text(const fs::path& path, const std::string& text) const {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void RunContext::note(const std::string& line) const {
    if (!quiet) std::cout << line << '\n';
}

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Masks are used as they are; probability grids are binarized.
MaskGrid read_mask_or_prob(const fs::path& path, double threshold) {
    auto any = read_grid(path);
    if (auto* m = std::get_if<MaskGrid>(&any)) return std::move(*m);
    if (auto* p = std::get_if<ProbGrid>(&any)) return binarize(*p, threshold);
    throw ParseError(ParseError::Locus::byte_offset, 32, path.string() + " holds an image log, not a mask or probability grid");
}

ImageLogGrid read_channel(const fs::path& path, Channel expected) {
    auto g = read_image_log(path);
    if (g.channel != expected) {
        throw ParseError(ParseError::Locus::byte_offset, 32,
                         fmt::format("{} holds a {} grid, expected {}", path.string(), to_string(g.channel),
                                     to_string(expected)));
    }
    return g;
}

void check_threshold(double t) {
    if (!(t > 0.0 && t < 1.0)) throw ParameterError(fmt::format("threshold {} outside (0, 1)", t));
}

std::vector<double> parse_range(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find(':', pos), text.size());
        double v = 0.0;
        const auto [p, ec] = std::from_chars(text.data() + pos, text.data() + end, v);
        if (ec != std::errc{} || p != text.data() + end) {
            throw ParameterError(fmt::format("--sweep expects lo:hi:step, got '{}'", text));
        }
        out.push_back(v);
        pos = end + 1;
    }
    if (out.size() != 3) throw ParameterError(fmt::format("--sweep expects lo:hi:step, got '{}'", text));
    return out;
}

synth::SceneSpec load_scene(const std::string& name_or_file) {
    if (std::find(std::begin(synth::kSceneNames), std::end(synth::kSceneNames), name_or_file) !=
        std::end(synth::kSceneNames)) {
        return synth::scene_suite(name_or_file);
    }
    if (!fs::exists(name_or_file)) {
        throw IoError(fmt::format("'{}' is neither a suite scene nor a readable scene file", name_or_file));
    }
    return synth::parse_scene(read_text(name_or_file));
}

struct Borehole {
    std::string name;
    ImageLogGrid amplitude;
    ImageLogGrid radius;
    PickSet manual;
    std::optional<PickSet> external;
};

nlohmann::json bench_row(const std::string& borehole, const std::string& method, const EvaluationReport& r) {
    nlohmann::json row = to_json(r);
    row.erase("schema");
    row["borehole"] = borehole;
    row["method"] = method;
    return row;
}

}  // namespace

void cmd_postproc(const RunContext& ctx, const PostprocArgs& args) {
    check_threshold(args.threshold);
    if (!(args.min_width_deg >= 0.0)) throw ParameterError("--min-width must be non-negative");
    const auto out = ctx.claim(args.output);
    const MaskGrid mask = read_mask_or_prob(args.input, args.threshold);
    const auto result = picks_from_mask_detailed(mask, args.min_width_deg, PickSource::segnet);
    ctx.write_text(out, format_picks_csv(result.picks));
    ctx.note(fmt::format("{} picks ({} washout rows) -> {}", result.picks.size(), result.washout_rows, out.string()));
}

void cmd_validate(const RunContext& ctx, const ValidateArgs& args) {
    if (args.grid_step < 0.0) throw ParameterError("--grid-step must be non-negative");
    const auto kept_path = ctx.claim(args.retained);
    const auto rejected_path = ctx.claim(args.rejected);
    const PickSet picks = read_picks(args.picks);
    const auto outcome = args.grid_step > 0.0 ? validate_on_grid(picks, args.grid_step) : validate(picks);
    ctx.write_text(kept_path, format_picks_csv(outcome.retained));
    ctx.write_text(rejected_path, format_picks_csv(outcome.rejected));
    ctx.note(fmt::format("{} retained, {} rejected", outcome.retained.size(), outcome.rejected.size()));
}

void cmd_peakdetect(const RunContext& ctx, const PeakdetectArgs& args) {
    const auto out = ctx.claim(args.output);
    const auto amp = read_channel(args.amplitude, Channel::amplitude);
    const auto rad = read_channel(args.radius, Channel::radius);
    const PickSet picks = peak_detect(amp, rad, args.params);
    ctx.write_text(out, format_picks_csv(picks));
    ctx.note(fmt::format("{} picks -> {}", picks.size(), out.string()));
}

void cmd_evaluate(const RunContext& ctx, const EvaluateArgs& args) {
    check_threshold(args.threshold);
    if (args.pred.has_value() != args.label.has_value()) {
        throw ParameterError("--pred and --label must be given together");
    }
    const auto report_path = ctx.claim(args.report);
    const auto rose_path = ctx.claim(args.rose);
    const PickSet automatic = read_picks(args.automatic, PickSource::segnet);
    const PickSet manual = read_picks(args.manual, PickSource::manual);
    std::optional<MaskGrid> pred;
    std::optional<MaskGrid> label;
    if (args.pred) {
        pred = read_mask_or_prob(*args.pred, args.threshold);
        label = read_mask_or_prob(*args.label, args.threshold);
    }
    EvaluationOptions opt;
    opt.az_tol_deg = args.az_tol_deg;
    opt.step = args.step;
    opt.native_step = args.native_step;
    const auto report = evaluate(automatic, manual, opt, pred ? &*pred : nullptr, label ? &*label : nullptr);

    std::vector<double> az;
    for (const auto& p : automatic) az.push_back(p.azimuth_deg);
    ctx.write_text(report_path, to_json(report).dump(2) + "\n");
    ctx.write_text(rose_path, format_rose_csv(rose_histogram(az)));
    ctx.note(fmt::format("fpr {:.4f} fnr {:.4f} matched {} -> {}", report.fpr, report.fnr, report.n_matched,
                         report_path.string()));
}

void cmd_bench(const RunContext& ctx, const BenchArgs& args) {
    if (args.scenes.empty() && !args.config) throw ParameterError("bench needs --scene or --config");
    const auto out = ctx.claim(args.output);

    PeakDetectParams params = args.params;
    EvaluationOptions opt;
    opt.az_tol_deg = args.az_tol_deg;
    opt.step = args.step;

    std::vector<Borehole> holes;
    for (const auto& s : args.scenes) {
        auto spec = load_scene(s);
        if (ctx.seed) spec.seed = *ctx.seed;
        auto scene = synth::render(spec);
        holes.push_back({s, std::move(scene.amplitude), std::move(scene.radius), std::move(scene.truth_picks), {}});
    }
    if (args.config) {
        nlohmann::json cfg;
        try {
            cfg = nlohmann::json::parse(read_text(*args.config));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(ParseError::Locus::byte_offset, e.byte, e.what());
        }
        const fs::path base = args.config->parent_path();
        auto path_of = [&](const nlohmann::json& j, const char* key) { return base / j.at(key).get<std::string>(); };
        try {
            if (cfg.contains("peakdetect")) {
                const auto& p = cfg["peakdetect"];
                params.smooth_window_deg = p.value("smooth_window_deg", params.smooth_window_deg);
                params.k_amp = p.value("k_amp", params.k_amp);
                params.k_rad = p.value("k_rad", params.k_rad);
                params.min_width_deg = p.value("min_width_deg", params.min_width_deg);
            }
            if (cfg.contains("evaluation")) {
                opt.az_tol_deg = cfg["evaluation"].value("az_tol_deg", opt.az_tol_deg);
                opt.step = cfg["evaluation"].value("step", opt.step);
            }
            for (const auto& b : cfg.at("boreholes")) {
                Borehole h;
                h.name = b.at("name").get<std::string>();
                if (b.contains("scene")) {
                    const auto ref = b["scene"].get<std::string>();
                    auto spec = load_scene(fs::exists(base / ref) ? (base / ref).string() : ref);
                    if (ctx.seed) spec.seed = *ctx.seed;
                    auto scene = synth::render(spec);
                    h.amplitude = std::move(scene.amplitude);
                    h.radius = std::move(scene.radius);
                    h.manual = std::move(scene.truth_picks);
                } else {
                    h.amplitude = read_channel(path_of(b, "amplitude"), Channel::amplitude);
                    h.radius = read_channel(path_of(b, "radius"), Channel::radius);
                    h.manual = read_picks(path_of(b, "manual"), PickSource::manual);
                }
                if (b.contains("external")) h.external = read_picks(path_of(b, "external"), PickSource::segnet);
                holes.push_back(std::move(h));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(ParseError::Locus::byte_offset, 0, fmt::format("bench config: {}", e.what()));
        }
    }

    params.apply_symmetry_validation = false;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& h : holes) {
        opt.native_step = h.amplitude.geometry.depth_step;
        const PickSet raw = peak_detect(h.amplitude, h.radius, params);
        rows.push_back(bench_row(h.name, "peak_detect", evaluate(raw, h.manual, opt)));
        rows.push_back(bench_row(h.name, "peak_detect+validation", evaluate(validate(raw).retained, h.manual, opt)));
        if (h.external) {
            rows.push_back(bench_row(h.name, "external", evaluate(*h.external, h.manual, opt)));
            rows.push_back(
                bench_row(h.name, "external+validation", evaluate(validate(*h.external).retained, h.manual, opt)));
        }
    }
    nlohmann::json doc;
    doc["schema"] = 1;
    doc["rows"] = rows;
    ctx.write_text(out, doc.dump(2) + "\n");
    ctx.note(fmt::format("{} rows -> {}", rows.size(), out.string()));
}

void cmd_augment(const RunContext& ctx, const AugmentArgs& args) {
    if (!ctx.seed) throw ParameterError("augment requires --seed");
    const auto manifest = ctx.claim("manifest.csv");
    const auto samples = augment::load_samples(args.manifest);
    const auto out = augment::augment_set(samples, augment::AugmentConfig{}, *ctx.seed);
    if (!ctx.force) {
        for (std::size_t i = 0; i < out.size(); ++i) ctx.claim(fmt::format("{}_{:05d}_amp.igrid", args.prefix, i));
    }
    fs::create_directories(ctx.out_dir);
    augment::write_samples(out, ctx.out_dir, args.prefix);
    ctx.note(fmt::format("{} samples -> {} samples, {}", samples.size(), out.size(), manifest.string()));
}

void cmd_synth(const RunContext& ctx, const SynthArgs& args) {
    auto spec = load_scene(args.scene);
    if (ctx.seed) spec.seed = *ctx.seed;
    const auto amp = ctx.claim("amplitude.igrid");
    const auto rad = ctx.claim("radius.igrid");
    const auto mask = ctx.claim("truth_mask.igrid");
    const auto picks = ctx.claim("truth_picks.csv");
    const auto text = ctx.claim("scene.txt");
    const auto scene = synth::render(spec);
    fs::create_directories(ctx.out_dir);
    write_grid(scene.amplitude, amp);
    write_grid(scene.radius, rad);
    write_grid(scene.truth_mask, mask);
    ctx.write_text(picks, format_picks_csv(scene.truth_picks));
    ctx.write_text(text, synth::format_scene(spec));
    ctx.note(fmt::format("{}: {} truth picks -> {}", args.scene, scene.truth_picks.size(), ctx.out_dir.string()));
}

void cmd_stress(const RunContext& ctx, const StressArgs& args) {
    const stress::StressParams params{args.shmin, args.pf, args.cef};
    params.validate();
    std::string csv;
    if (args.sweep) {
        const auto r = parse_range(*args.sweep);
        csv = stress::format_sweep_csv(stress::sensitivity_sweep(r[0], r[1], r[2], args.dwidth_deg, params));
    } else {
        if (!args.width_deg) throw ParameterError("stress needs --width-deg or --sweep");
        const double s = stress::shmax(*args.width_deg, params);
        csv = "width_deg,shmax_mpa";
        if (args.dwidth_deg != 0.0) csv += ",delta_shmax_mpa";
        csv += fmt::format("\n{:.6f},{:.6f}", *args.width_deg, s);
        if (args.dwidth_deg != 0.0) {
            csv += fmt::format(",{:.6f}", stress::width_sensitivity(*args.width_deg, args.dwidth_deg, params));
        }
        csv += '\n';
    }
    if (args.output) {
        const auto path = ctx.claim(*args.output);
        ctx.write_text(path, csv);
    } else {
        std::cout << csv;
    }
}

}  // namespace cli
