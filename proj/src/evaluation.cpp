#include <bkit/evaluation.hpp>

#include <bkit/errors.hpp>
#include <bkit/geometry.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

namespace bkit {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

}  // namespace

double iou(const MaskGrid& pred, const MaskGrid& label) {
    require_same_geometry(pred.geometry, label.geometry, "iou");
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const bool a = pred.values[i] != 0;
        const bool b = label.values[i] != 0;
        inter += static_cast<std::size_t>(a && b);
        uni += static_cast<std::size_t>(a || b);
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double circ_diff(double a, double b) noexcept {
    const double d = wrap360(a - b);
    return std::min(d, kFullCircleDeg - d);
}

PickSet resample_picks(const PickSet& set, double step, double origin) {
    if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError(fmt::format("resample step {} must be positive", step));

    // bin -> (distance to center, native depth) of the best row so far
    std::map<long long, std::pair<double, double>> best;
    auto bin_of = [&](double depth) { return static_cast<long long>(std::floor((depth - origin) / step + 1e-9)); };
    auto center_of = [&](long long bin) { return origin + (static_cast<double>(bin) + 0.5) * step; };
    for (const auto& p : set) {
        const long long bin = bin_of(p.depth);
        const double dist = std::abs(p.depth - center_of(bin));
        auto [it, inserted] = best.try_emplace(bin, dist, p.depth);
        if (inserted) continue;
        // distances within rounding noise of each other are a tie; the shallower depth wins
        const double tie_tol = 1e-9 * step;
        const auto [best_dist, best_depth] = it->second;
        if (dist < best_dist - tie_tol || (std::abs(dist - best_dist) <= tie_tol && p.depth < best_depth)) {
            it->second = {dist, p.depth};
        }
    }
    std::vector<BreakoutPick> out;
    for (const auto& p : set) {
        const long long bin = bin_of(p.depth);
        if (best.at(bin).second != p.depth) continue;
        BreakoutPick q = p;
        q.depth = center_of(bin);
        out.push_back(q);
    }
    return PickSet(std::move(out), set.source());
}

ValidationOutcome validate_on_grid(const PickSet& set, double step, double origin) {
    return validate(resample_picks(set, step, origin));
}

MatchResult match_picks(const PickSet& automatic, const PickSet& manual, double az_tol_deg) {
    MatchResult result;
    const auto& a = automatic.picks();
    const auto& m = manual.picks();
    std::size_t i = 0;
    std::size_t j = 0;
    // Both sets are depth-sorted: walk them in lockstep one depth at a time.
    while (i < a.size() || j < m.size()) {
        double depth = 0.0;
        if (i < a.size() && j < m.size()) {
            depth = std::min(a[i].depth, m[j].depth);
        } else {
            depth = i < a.size() ? a[i].depth : m[j].depth;
        }
        std::size_t ie = i;
        while (ie < a.size() && a[ie].depth == depth) ++ie;
        std::size_t je = j;
        while (je < m.size() && m[je].depth == depth) ++je;

        struct Candidate {
            double diff;
            std::size_t ai;
            std::size_t mi;
        };
        std::vector<Candidate> candidates;
        for (std::size_t x = i; x < ie; ++x) {
            for (std::size_t y = j; y < je; ++y) {
                const double d = circ_diff(a[x].azimuth_deg, m[y].azimuth_deg);
                if (d <= az_tol_deg) candidates.push_back({d, x, y});
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const auto& p, const auto& q) { return std::tie(p.diff, p.ai, p.mi) < std::tie(q.diff, q.ai, q.mi); });
        std::vector<bool> used_a(ie - i, false);
        std::vector<bool> used_m(je - j, false);
        for (const auto& c : candidates) {
            if (used_a[c.ai - i] || used_m[c.mi - j]) continue;
            used_a[c.ai - i] = true;
            used_m[c.mi - j] = true;
            result.matched.emplace_back(a[c.ai], m[c.mi]);
        }
        for (std::size_t x = i; x < ie; ++x) {
            if (!used_a[x - i]) result.false_positives.push_back(a[x]);
        }
        for (std::size_t y = j; y < je; ++y) {
            if (!used_m[y - j]) result.false_negatives.push_back(m[y]);
        }
        i = ie;
        j = je;
    }
    return result;
}

Rates rates(const MatchResult& m) noexcept {
    const std::size_t n_auto = m.matched.size() + m.false_positives.size();
    const std::size_t n_manual = m.matched.size() + m.false_negatives.size();
    Rates r;
    if (n_auto > 0) r.fpr = static_cast<double>(m.false_positives.size()) / static_cast<double>(n_auto);
    if (n_manual > 0) r.fnr = static_cast<double>(m.false_negatives.size()) / static_cast<double>(n_manual);
    return r;
}

std::optional<PickErrors> pick_errors(const MatchResult& m) {
    if (m.matched.empty()) return std::nullopt;
    PickErrors e;
    for (const auto& [a, b] : m.matched) {
        e.azimuth_error_deg += circ_diff(a.azimuth_deg, b.azimuth_deg);
        e.width_error_deg += std::abs(a.width_deg - b.width_deg);
    }
    const auto n = static_cast<double>(m.matched.size());
    e.azimuth_error_deg /= n;
    e.width_error_deg /= n;
    return e;
}

DirectionalStats circular_stats(std::span<const double> azimuths_deg) {
    if (azimuths_deg.empty()) throw ParameterError("circular_stats: empty azimuth list");
    double s = 0.0;
    double c = 0.0;
    for (double az : azimuths_deg) {
        s += std::sin(az / kDegPerRad);
        c += std::cos(az / kDegPerRad);
    }
    const auto n = static_cast<double>(azimuths_deg.size());
    DirectionalStats st;
    st.resultant_length = std::min(1.0, std::hypot(s, c) / n);
    if (st.resultant_length < 1e-12) {
        st.mean_defined = false;
        st.mean_deg = 0.0;
        st.std_deg = std::numeric_limits<double>::infinity();
        return st;
    }
    st.mean_deg = wrap360(std::atan2(s, c) * kDegPerRad);
    st.std_deg = std::sqrt(-2.0 * std::log(st.resultant_length)) * kDegPerRad;
    return st;
}

DirectionalStats axial_stats(std::span<const double> azimuths_deg) {
    std::vector<double> doubled(azimuths_deg.begin(), azimuths_deg.end());
    for (double& v : doubled) v = wrap360(2.0 * v);
    DirectionalStats st = circular_stats(doubled);
    st.mean_deg /= 2.0;
    st.std_deg /= 2.0;
    return st;
}

DirectionalStats arithmetic_stats(std::span<const double> azimuths_deg) {
    if (azimuths_deg.empty()) throw ParameterError("arithmetic_stats: empty azimuth list");
    const auto n = static_cast<double>(azimuths_deg.size());
    DirectionalStats st;
    for (double v : azimuths_deg) st.mean_deg += v;
    st.mean_deg /= n;
    double ss = 0.0;
    for (double v : azimuths_deg) ss += (v - st.mean_deg) * (v - st.mean_deg);
    st.std_deg = std::sqrt(ss / n);
    st.resultant_length = std::numeric_limits<double>::quiet_NaN();
    return st;
}

std::string_view to_string(WsmRank rank) noexcept {
    return rank == WsmRank::C_or_better ? "C_or_better" : "below_C";
}

WsmAssessment wsm_assess(const PickSet& set, double native_step) {
    if (!(native_step > 0.0)) throw ParameterError("wsm_quality: native_step must be positive");
    WsmAssessment a;
    if (set.empty()) return a;

    std::vector<double> depths;
    std::vector<double> azimuths;
    for (const auto& p : set) {
        if (depths.empty() || depths.back() != p.depth) depths.push_back(p.depth);
        azimuths.push_back(p.azimuth_deg);
    }
    double zone_top = depths.front();
    for (std::size_t i = 1; i <= depths.size(); ++i) {
        if (i == depths.size() || depths[i] - depths[i - 1] > native_step * (1.0 + 1e-6)) {
            ++a.zones;
            a.combined_length_m += depths[i - 1] - zone_top + native_step;
            if (i < depths.size()) zone_top = depths[i];
        }
    }
    a.azimuth_std_deg = axial_stats(azimuths).std_deg;
    const bool ok = a.zones >= 4 && a.combined_length_m >= 20.0 - 1e-9 && a.azimuth_std_deg < 25.0;
    a.rank = ok ? WsmRank::C_or_better : WsmRank::below_C;
    return a;
}

WsmRank wsm_quality(const PickSet& set, double native_step) { return wsm_assess(set, native_step).rank; }

BalancedBce balanced_bce(std::span<const double> y, std::span<const double> p) {
    if (y.size() != p.size()) throw ShapeError("balanced_bce: label and probability sizes differ");
    BalancedBce out;
    if (y.empty()) return out;
    double background = 0.0;
    for (double v : y) background += 1.0 - v;
    out.beta = background / static_cast<double>(y.size());
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double q = std::clamp(p[i], kBceEpsilon, 1.0 - kBceEpsilon);
        pos += y[i] * std::log(q);
        neg += (1.0 - y[i]) * std::log(1.0 - q);
    }
    out.loss = -out.beta * pos - neg;
    return out;
}

BalancedBce balanced_bce(const MaskGrid& y, const ProbGrid& p) {
    require_same_geometry(y.geometry, p.geometry, "balanced_bce");
    std::vector<double> yy(y.values.begin(), y.values.end());
    std::vector<double> pp(p.values.begin(), p.values.end());
    return balanced_bce(yy, pp);
}

std::vector<std::size_t> rose_histogram(std::span<const double> azimuths_deg, double bin_deg) {
    if (!(bin_deg > 0.0)) throw ParameterError("rose_histogram: bin width must be positive");
    const auto bins = static_cast<std::size_t>(std::ceil(kFullCircleDeg / bin_deg - 1e-9));
    std::vector<std::size_t> counts(bins, 0);
    for (double az : azimuths_deg) {
        auto b = static_cast<std::size_t>(wrap360(az) / bin_deg);
        counts[std::min(b, bins - 1)] += 1;
    }
    return counts;
}

std::string format_rose_csv(const std::vector<std::size_t>& counts, double bin_deg) {
    std::string out = "bin_start_deg,count\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out += fmt::format("{:.1f},{}\n", static_cast<double>(i) * bin_deg, counts[i]);
    }
    return out;
}

EvaluationReport evaluate(const PickSet& automatic, const PickSet& manual, const EvaluationOptions& options,
                          const MaskGrid* pred, const MaskGrid* label) {
    const bool regrid = options.step > 0.0;
    const PickSet a = regrid ? resample_picks(automatic, options.step, options.origin) : automatic;
    const PickSet m = regrid ? resample_picks(manual, options.step, options.origin) : manual;

    EvaluationReport r;
    const MatchResult match = match_picks(a, m, options.az_tol_deg);
    const Rates rt = rates(match);
    r.fpr = rt.fpr;
    r.fnr = rt.fnr;
    r.n_auto = a.size();
    r.n_manual = m.size();
    r.n_matched = match.matched.size();
    if (auto e = pick_errors(match)) {
        r.azimuth_error_deg = e->azimuth_error_deg;
        r.width_error_deg = e->width_error_deg;
    }
    if (!a.empty()) {
        std::vector<double> az;
        for (const auto& p : a) az.push_back(p.azimuth_deg);
        const auto st = axial_stats(az);
        if (st.mean_defined) r.azimuth_mean_deg = st.mean_deg;
        r.azimuth_std_deg = st.std_deg;
        const double zone_step = regrid ? options.step : (options.native_step > 0.0 ? options.native_step : kEvaluationStep);
        r.wsm_rank = wsm_quality(a, zone_step);
    }
    if (pred != nullptr && label != nullptr) r.iou = iou(*pred, *label);
    return r;
}

nlohmann::json to_json(const EvaluationReport& report) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["schema"] = 1;
    j["iou"] = opt(report.iou);
    j["azimuth_mean_deg"] = opt(report.azimuth_mean_deg);
    j["azimuth_std_deg"] = report.azimuth_std_deg && std::isfinite(*report.azimuth_std_deg) ? opt(report.azimuth_std_deg)
                                                                                           : nlohmann::json(nullptr);
    j["azimuth_error_deg"] = opt(report.azimuth_error_deg);
    j["width_error_deg"] = opt(report.width_error_deg);
    j["fpr"] = report.fpr;
    j["fnr"] = report.fnr;
    j["wsm_rank"] = std::string(to_string(report.wsm_rank));
    j["n_auto"] = report.n_auto;
    j["n_manual"] = report.n_manual;
    j["n_matched"] = report.n_matched;
    return j;
}

}  // namespace bkit
