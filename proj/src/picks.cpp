#include <bkit/picks.hpp>

#include <bkit/errors.hpp>
#include <bkit/geometry.hpp>
#include <bkit/grid_io.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <tuple>

namespace bkit {

namespace {

constexpr double kEdgeTolDeg = 1e-5;

}  // namespace

std::string_view to_string(PickSource source) noexcept {
    switch (source) {
        case PickSource::manual: return "manual";
        case PickSource::peak_detect: return "peak_detect";
        case PickSource::segnet: return "segnet";
        case PickSource::synthetic: return "synthetic";
    }
    return "manual";
}

std::optional<PickSource> parse_source(std::string_view text) noexcept {
    for (auto s : {PickSource::manual, PickSource::peak_detect, PickSource::segnet, PickSource::synthetic}) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

double clockwise_deg(double from, double to) noexcept { return wrap360(to - from); }

BreakoutPick BreakoutPick::from_edges(double depth, double left_deg, double width_deg) {
    BreakoutPick p;
    p.depth = depth;
    p.left_deg = wrap360(left_deg);
    p.width_deg = width_deg;
    p.right_deg = wrap360(p.left_deg + width_deg);
    p.azimuth_deg = wrap360(p.left_deg + width_deg / 2.0);
    return p;
}

std::string BreakoutPick::status_text() const {
    switch (status) {
        case PickStatus::candidate: return "candidate";
        case PickStatus::validated: return "validated";
        case PickStatus::rejected:
            return reason == RejectReason::count_not_two ? "rejected:count_not_two" : "rejected:separation";
    }
    return "candidate";
}

void BreakoutPick::validate() const {
    auto in_circle = [](double v) { return std::isfinite(v) && v >= 0.0 && v < kFullCircleDeg; };
    if (!std::isfinite(depth)) throw InvariantError("pick depth must be finite");
    if (!in_circle(left_deg)) throw InvariantError(fmt::format("left_deg {} outside [0,360)", left_deg));
    if (!in_circle(right_deg)) throw InvariantError(fmt::format("right_deg {} outside [0,360)", right_deg));
    if (!in_circle(azimuth_deg)) throw InvariantError(fmt::format("azimuth_deg {} outside [0,360)", azimuth_deg));
    if (!(width_deg > 0.0 && width_deg < kFullCircleDeg)) {
        throw InvariantError(fmt::format("width_deg {} outside (0,360)", width_deg));
    }
    const double edge_span = clockwise_deg(left_deg, right_deg);
    const double edge_gap = std::min(std::abs(edge_span - width_deg), kFullCircleDeg - std::abs(edge_span - width_deg));
    if (edge_gap > kEdgeTolDeg) {
        throw InvariantError(fmt::format("width_deg {} disagrees with edges {} -> {}", width_deg, left_deg, right_deg));
    }
    const double offset = clockwise_deg(left_deg, azimuth_deg);
    if (offset > width_deg + kEdgeTolDeg && kFullCircleDeg - offset > kEdgeTolDeg) {
        throw InvariantError(fmt::format("azimuth_deg {} lies outside its zone", azimuth_deg));
    }
    if ((status == PickStatus::rejected) != (reason != RejectReason::none)) {
        throw InvariantError("reject reason must be set exactly for rejected picks");
    }
}

PickSet::PickSet(std::vector<BreakoutPick> picks, PickSource source) : picks_(std::move(picks)), source_(source) {
    auto key = [](const BreakoutPick& p) { return std::tie(p.depth, p.left_deg); };
    std::stable_sort(picks_.begin(), picks_.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    auto dup = std::adjacent_find(picks_.begin(), picks_.end(),
                                  [&](const auto& a, const auto& b) { return key(a) == key(b); });
    if (dup != picks_.end()) {
        throw InvariantError(fmt::format("duplicate pick at depth {} left {}", dup->depth, dup->left_deg));
    }
}

PickSet PickSet::with_status(PickStatus status) const {
    PickSet out = *this;
    for (auto& p : out.picks_) {
        p.status = status;
        if (status != PickStatus::rejected) p.reason = RejectReason::none;
    }
    return out;
}

namespace {

// Fixed 6-decimal text; an angle that rounds up to 360 is written as 0.
std::string fmt6(double v, bool angle) {
    std::string s = fmt::format("{:.6f}", v);
    if (angle && s == "360.000000") return "0.000000";
    if (s == "-0.000000") return "0.000000";
    return s;
}

}  // namespace

bool equal_at_csv_precision(const PickSet& a, const PickSet& b) {
    if (a.size() != b.size() || a.source() != b.source()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& p = a.picks()[i];
        const auto& q = b.picks()[i];
        if (fmt6(p.depth, false) != fmt6(q.depth, false) || fmt6(p.azimuth_deg, true) != fmt6(q.azimuth_deg, true) ||
            fmt6(p.width_deg, false) != fmt6(q.width_deg, false) || fmt6(p.left_deg, true) != fmt6(q.left_deg, true) ||
            fmt6(p.right_deg, true) != fmt6(q.right_deg, true) || p.status != q.status || p.reason != q.reason) {
            return false;
        }
    }
    return true;
}

std::string format_picks_csv(const PickSet& set) {
    std::string out(kPickCsvHeader);
    out += '\n';
    const auto source = to_string(set.source());
    for (const auto& p : set) {
        out += fmt::format("{},{},{},{},{},{},{}\n", fmt6(p.depth, false), fmt6(p.azimuth_deg, true),
                           fmt6(p.width_deg, false), fmt6(p.left_deg, true), fmt6(p.right_deg, true), p.status_text(),
                           source);
    }
    return out;
}

PickSet parse_picks_csv(std::string_view text, PickSource fallback_source) {
    std::vector<BreakoutPick> picks;
    std::optional<PickSource> source;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            throw ParseError(ParseError::Locus::line, line_no, "CRLF line endings are not accepted");
        }
        if (!saw_header) {
            if (line != kPickCsvHeader) throw ParseError(ParseError::Locus::line, line_no, "missing pick CSV header");
            saw_header = true;
            continue;
        }
        if (line.empty()) {
            if (pos >= text.size()) break;
            throw ParseError(ParseError::Locus::line, line_no, "empty row");
        }

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 7) {
            throw ParseError(ParseError::Locus::line, line_no, fmt::format("expected 7 fields, got {}", fields.size()));
        }
        auto number = [&](std::size_t i, const char* name) {
            double v = 0.0;
            auto f = fields[i];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty()) {
                throw ParseError(ParseError::Locus::line, line_no, fmt::format("field {} is not a number", name));
            }
            return v;
        };
        BreakoutPick p;
        p.depth = number(0, "depth_m");
        p.azimuth_deg = number(1, "azimuth_deg");
        p.width_deg = number(2, "width_deg");
        p.left_deg = number(3, "left_deg");
        p.right_deg = number(4, "right_deg");

        const auto status = fields[5];
        if (status == "candidate") {
            p.status = PickStatus::candidate;
        } else if (status == "validated") {
            p.status = PickStatus::validated;
        } else if (status == "rejected:count_not_two") {
            p.status = PickStatus::rejected;
            p.reason = RejectReason::count_not_two;
        } else if (status == "rejected:separation") {
            p.status = PickStatus::rejected;
            p.reason = RejectReason::separation_out_of_window;
        } else {
            throw ParseError(ParseError::Locus::line, line_no, fmt::format("unknown status '{}'", status));
        }
        auto row_source = parse_source(fields[6]);
        if (!row_source) {
            throw ParseError(ParseError::Locus::line, line_no, fmt::format("unknown source '{}'", fields[6]));
        }
        if (source && *source != *row_source) {
            throw ParseError(ParseError::Locus::line, line_no, "mixed sources in one pick file");
        }
        source = row_source;

        try {
            p.validate();
        } catch (const InvariantError& e) {
            throw ParseError(ParseError::Locus::line, line_no, e.what());
        }
        picks.push_back(p);
    }
    if (!saw_header) throw ParseError(ParseError::Locus::line, 1, "missing pick CSV header");
    try {
        return PickSet(std::move(picks), source.value_or(fallback_source));
    } catch (const InvariantError& e) {
        throw ParseError(ParseError::Locus::line, line_no, e.what());
    }
}

void write_picks(const PickSet& set, const std::filesystem::path& path) {
    const std::string text = format_picks_csv(set);
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

PickSet read_picks(const std::filesystem::path& path, PickSource fallback_source) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_picks_csv(text, fallback_source);
}

}  // namespace bkit
