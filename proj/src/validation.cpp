#include <bkit/validation.hpp>

#include <bkit/errors.hpp>
#include <bkit/geometry.hpp>

#include <cmath>

namespace bkit {

double circ360(double x) {
    if (!std::isfinite(x)) throw ParameterError("circ360: non-finite angle");
    return wrap360(x);
}

namespace {

void judge(const std::vector<BreakoutPick>& picks, std::vector<BreakoutPick>& kept,
           std::vector<BreakoutPick>& dropped) {
    RejectReason reason = RejectReason::none;
    if (picks.size() != 2) {
        reason = RejectReason::count_not_two;
    } else {
        const double sep = circ360(picks[1].azimuth_deg - picks[0].azimuth_deg);
        if (sep < kMinPairSeparationDeg || sep > kMaxPairSeparationDeg) reason = RejectReason::separation_out_of_window;
    }
    for (auto p : picks) {
        p.status = reason == RejectReason::none ? PickStatus::validated : PickStatus::rejected;
        p.reason = reason;
        (reason == RejectReason::none ? kept : dropped).push_back(p);
    }
}

}  // namespace

ValidationOutcome validate_depth(const DepthGroup& group, PickSource source) {
    std::vector<BreakoutPick> kept;
    std::vector<BreakoutPick> dropped;
    judge(group.picks, kept, dropped);
    return {PickSet(std::move(kept), source), PickSet(std::move(dropped), source)};
}

ValidationOutcome validate(const PickSet& set) {
    std::vector<BreakoutPick> kept;
    std::vector<BreakoutPick> dropped;
    const auto& picks = set.picks();
    // PickSet is sorted by depth, so each group is a contiguous slice.
    for (std::size_t i = 0; i < picks.size();) {
        std::size_t j = i;
        while (j < picks.size() && picks[j].depth == picks[i].depth) ++j;
        judge(std::vector<BreakoutPick>(picks.begin() + static_cast<std::ptrdiff_t>(i),
                                        picks.begin() + static_cast<std::ptrdiff_t>(j)),
              kept, dropped);
        i = j;
    }
    return {PickSet(std::move(kept), set.source()), PickSet(std::move(dropped), set.source())};
}

}  // namespace bkit
