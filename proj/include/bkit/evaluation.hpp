#pragma once

#include <bkit/grid.hpp>
#include <bkit/picks.hpp>
#include <bkit/validation.hpp>

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bkit {

inline constexpr double kEvaluationStep = 0.2;  // m
inline constexpr double kDefaultMatchTolDeg = 30.0;

// |pred & label| / |pred | label|; 1 when both are empty. Throws ShapeError.
double iou(const MaskGrid& pred, const MaskGrid& label);

// Smallest angle between two directions, in [0, 180].
double circ_diff(double a, double b) noexcept;

// Bins are [origin + k*step, origin + (k+1)*step). For every bin holding picks, the picks of
// the depth nearest the bin center are re-emitted at the center depth (ties: shallower).
// Throws ParameterError for step <= 0.
PickSet resample_picks(const PickSet& set, double step = kEvaluationStep, double origin = 0.0);

// Symmetry validation applied after regridding, so picks are grouped per depth bin.
ValidationOutcome validate_on_grid(const PickSet& set, double step = kEvaluationStep, double origin = 0.0);

struct MatchResult {
    std::vector<std::pair<BreakoutPick, BreakoutPick>> matched;  // (auto, manual)
    std::vector<BreakoutPick> false_positives;
    std::vector<BreakoutPick> false_negatives;
};

// Per depth, greedily pairs the closest azimuths; a pair counts when circ_diff <= tol.
MatchResult match_picks(const PickSet& automatic, const PickSet& manual, double az_tol_deg = kDefaultMatchTolDeg);

struct Rates {
    double fpr = 0.0;  // false positives / automatic picks
    double fnr = 0.0;  // false negatives / manual picks
};
Rates rates(const MatchResult& m) noexcept;

struct PickErrors {
    double azimuth_error_deg = 0.0;
    double width_error_deg = 0.0;
};
// Empty when nothing matched.
std::optional<PickErrors> pick_errors(const MatchResult& m);

struct DirectionalStats {
    double mean_deg = 0.0;
    double std_deg = 0.0;
    double resultant_length = 0.0;  // mean resultant length R in [0, 1]
    bool mean_defined = true;       // false when R is ~0 (no preferred direction)
};

// Directional mean and circular standard deviation sqrt(-2 ln R). Throws ParameterError if empty.
DirectionalStats circular_stats(std::span<const double> azimuths_deg);
// Same statistics for axial data (a direction and its opposite are equivalent): angles are
// doubled, summarized, and halved. The mean lies in [0, 180).
DirectionalStats axial_stats(std::span<const double> azimuths_deg);
// Plain arithmetic mean and population standard deviation.
DirectionalStats arithmetic_stats(std::span<const double> azimuths_deg);

enum class WsmRank { C_or_better, below_C };
std::string_view to_string(WsmRank rank) noexcept;

struct WsmAssessment {
    WsmRank rank = WsmRank::below_C;
    std::size_t zones = 0;
    double combined_length_m = 0.0;
    double azimuth_std_deg = 0.0;
};

// Adjacent pick depths (spacing <= native_step) form one zone whose length is its depth span
// plus one step. C quality needs >= 4 zones, >= 20 m combined and axial azimuth std < 25 deg.
WsmAssessment wsm_assess(const PickSet& set, double native_step);
WsmRank wsm_quality(const PickSet& set, double native_step);

inline constexpr double kBceEpsilon = 1e-7;

struct BalancedBce {
    double beta = 0.0;
    double loss = 0.0;
};
// beta = share of background cells; loss = -beta*sum(y ln p) - sum((1-y) ln(1-p)),
// with p clamped to [eps, 1-eps]. Throws ShapeError.
BalancedBce balanced_bce(const MaskGrid& y, const ProbGrid& p);
BalancedBce balanced_bce(std::span<const double> y, std::span<const double> p);

// Counts of azimuths in 10-degree bins starting at 0.
std::vector<std::size_t> rose_histogram(std::span<const double> azimuths_deg, double bin_deg = 10.0);
std::string format_rose_csv(const std::vector<std::size_t>& counts, double bin_deg = 10.0);

struct EvaluationReport {
    std::optional<double> iou;
    std::optional<double> azimuth_mean_deg;
    std::optional<double> azimuth_std_deg;
    std::optional<double> azimuth_error_deg;
    std::optional<double> width_error_deg;
    double fpr = 0.0;
    double fnr = 0.0;
    WsmRank wsm_rank = WsmRank::below_C;
    std::size_t n_auto = 0;
    std::size_t n_manual = 0;
    std::size_t n_matched = 0;
};

struct EvaluationOptions {
    double az_tol_deg = kDefaultMatchTolDeg;
    // Depth grid the pick sets are compared on; <= 0 compares native depths as they are.
    double step = kEvaluationStep;
    double origin = 0.0;
    // Row spacing of the automatic picks, used to join WSM zones. <= 0 uses `step`.
    double native_step = 0.0;
};

EvaluationReport evaluate(const PickSet& automatic, const PickSet& manual, const EvaluationOptions& options,
                          const MaskGrid* pred = nullptr, const MaskGrid* label = nullptr);

nlohmann::json to_json(const EvaluationReport& report);

}  // namespace bkit
