#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bkit {

enum class PickStatus { candidate, validated, rejected };
enum class RejectReason { none, count_not_two, separation_out_of_window };
enum class PickSource { manual, peak_detect, segnet, synthetic };

std::string_view to_string(PickSource source) noexcept;
std::optional<PickSource> parse_source(std::string_view text) noexcept;

// One breakout at one depth. The zone spans clockwise from left_deg to right_deg.
struct BreakoutPick {
    double depth = 0.0;        // m
    double left_deg = 0.0;     // [0, 360)
    double right_deg = 0.0;    // [0, 360)
    double width_deg = 0.0;    // (0, 360), clockwise left -> right
    double azimuth_deg = 0.0;  // [0, 360), inside the zone
    PickStatus status = PickStatus::candidate;
    RejectReason reason = RejectReason::none;

    // Zone from its left edge and clockwise width; azimuth at the midpoint.
    static BreakoutPick from_edges(double depth, double left_deg, double width_deg);

    // Status column text: candidate, validated, rejected:count_not_two, rejected:separation.
    std::string status_text() const;

    // Throws InvariantError when a field is out of range or the edges disagree with the width.
    void validate() const;

    friend bool operator==(const BreakoutPick&, const BreakoutPick&) = default;
};

// Clockwise angular distance from `from` to `to`, in [0, 360).
double clockwise_deg(double from, double to) noexcept;

// Picks sorted by (depth, left_deg), unique per (depth, left_deg).
class PickSet {
public:
    PickSet() = default;
    explicit PickSet(PickSource source) : source_(source) {}
    // Sorts; throws InvariantError on a duplicate (depth, left_deg).
    PickSet(std::vector<BreakoutPick> picks, PickSource source);

    const std::vector<BreakoutPick>& picks() const noexcept { return picks_; }
    PickSource source() const noexcept { return source_; }
    std::size_t size() const noexcept { return picks_.size(); }
    bool empty() const noexcept { return picks_.empty(); }
    auto begin() const noexcept { return picks_.begin(); }
    auto end() const noexcept { return picks_.end(); }

    // Returns a copy with every pick's status replaced.
    PickSet with_status(PickStatus status) const;

    friend bool operator==(const PickSet&, const PickSet&) = default;

private:
    std::vector<BreakoutPick> picks_;
    PickSource source_ = PickSource::manual;
};

// Equality after rounding every real field to 6 decimals (the CSV precision).
bool equal_at_csv_precision(const PickSet& a, const PickSet& b);

inline constexpr std::string_view kPickCsvHeader = "depth_m,azimuth_deg,width_deg,left_deg,right_deg,status,source";

std::string format_picks_csv(const PickSet& set);
// `fallback_source` is used when the file has no rows. Throws ParseError naming the line.
PickSet parse_picks_csv(std::string_view text, PickSource fallback_source = PickSource::manual);

void write_picks(const PickSet& set, const std::filesystem::path& path);
PickSet read_picks(const std::filesystem::path& path, PickSource fallback_source = PickSource::manual);

}  // namespace bkit
