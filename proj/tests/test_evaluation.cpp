#include "oracles.hpp"

#include <bkit/errors.hpp>
#include <bkit/evaluation.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace bkit;

namespace {

BreakoutPick pick_at(double depth, double az, double width) {
    return BreakoutPick::from_edges(depth, wrap360(az - width / 2.0), width);
}

MaskGrid mask_with(const GridGeometry& g, std::size_t first, std::size_t count) {
    MaskGrid m = MaskGrid::zeros(g);
    for (std::size_t i = first; i < first + count; ++i) m.values[i] = 1;
    return m;
}

}  // namespace

TEST(Iou, Examples) {
    const auto g = GridGeometry::make(4, 32, 0.0, 1.0);
    const auto a = mask_with(g, 0, 50);
    EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
    EXPECT_DOUBLE_EQ(iou(a, mask_with(g, 60, 50)), 0.0);
    EXPECT_DOUBLE_EQ(iou(a, mask_with(g, 25, 50)), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(iou(MaskGrid::zeros(g), MaskGrid::zeros(g)), 1.0);
    EXPECT_THROW(iou(a, MaskGrid::zeros(GridGeometry::make(4, 16, 0.0, 1.0))), ShapeError);
}

TEST(Iou, SymmetricAndMonotone) {
    std::mt19937 rng(8);
    std::bernoulli_distribution bit(0.4);
    const auto g = GridGeometry::make(4, 32, 0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        MaskGrid a = MaskGrid::zeros(g);
        MaskGrid b = MaskGrid::zeros(g);
        for (auto& v : a.values) v = bit(rng);
        for (auto& v : b.values) v = bit(rng);
        EXPECT_DOUBLE_EQ(iou(a, b), iou(b, a));
        // adding a cell both agree on never lowers the score
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            if (!a.values[i] && !b.values[i]) {
                MaskGrid a2 = a;
                MaskGrid b2 = b;
                a2.values[i] = b2.values[i] = 1;
                EXPECT_GE(iou(a2, b2), iou(a, b));
                break;
            }
        }
    }
}

TEST(CircDiff, ExamplesAndMetric) {
    EXPECT_DOUBLE_EQ(circ_diff(10, 350), 20.0);
    EXPECT_DOUBLE_EQ(circ_diff(0, 180), 180.0);
    EXPECT_DOUBLE_EQ(circ_diff(143, 147), 4.0);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-720.0, 720.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        EXPECT_NEAR(circ_diff(a, b), circ_diff(b, a), 1e-9);
        EXPECT_LE(circ_diff(a, c), circ_diff(a, b) + circ_diff(b, c) + 1e-9);
        EXPECT_GE(circ_diff(a, b), 0.0);
        EXPECT_LE(circ_diff(a, b), 180.0);
    }
}

TEST(Resample, Examples) {
    EXPECT_TRUE(resample_picks(PickSet(PickSource::manual)).empty());

    // native 0.2 m rows at bin centres -> identity
    std::vector<BreakoutPick> native;
    for (int i = 0; i < 10; ++i) native.push_back(pick_at(0.1 + 0.2 * i, 143.0, 45.0));
    const PickSet s(native, PickSource::manual);
    const auto same = resample_picks(s, 0.2);
    ASSERT_EQ(same.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(same.picks()[i].depth, s.picks()[i].depth, 1e-12);

    // native 0.05 m, picks only at 0.10 -> emitted at the centre of bin [0, 0.2)
    const PickSet fine({pick_at(0.10, 143.0, 45.0), pick_at(0.10, 323.0, 45.0)}, PickSource::manual);
    const auto out = resample_picks(fine, 0.2);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_NEAR(out.picks()[0].depth, 0.1, 1e-12);

    EXPECT_THROW(resample_picks(fine, 0.0), ParameterError);
}

TEST(Resample, NearestDepthWinsWithShallowerTie) {
    // bin [0.2, 0.4), centre 0.3: depths 0.25 and 0.35 tie, 0.25 wins; 0.20 is farther
    const PickSet s({pick_at(0.20, 10.0, 20.0), pick_at(0.25, 50.0, 20.0), pick_at(0.35, 90.0, 20.0)},
                    PickSource::manual);
    const auto out = resample_picks(s, 0.2);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out.picks()[0].azimuth_deg, 50.0, 1e-9);
}

TEST(Match, Examples) {
    const PickSet manual({pick_at(1.0, 100.0, 40.0), pick_at(1.0, 280.0, 40.0)}, PickSource::manual);
    const auto self = match_picks(manual, manual);
    EXPECT_EQ(self.matched.size(), 2u);
    EXPECT_DOUBLE_EQ(rates(self).fpr, 0.0);
    EXPECT_DOUBLE_EQ(rates(self).fnr, 0.0);

    const PickSet extra({pick_at(2.0, 100.0, 40.0)}, PickSource::segnet);
    const auto fp = match_picks(extra, manual);
    EXPECT_EQ(fp.false_positives.size(), 1u);
    EXPECT_EQ(fp.false_negatives.size(), 2u);

    const PickSet a({pick_at(1.0, 100.0, 40.0)}, PickSource::segnet);
    const PickSet m({pick_at(1.0, 125.0, 40.0)}, PickSource::manual);
    EXPECT_EQ(match_picks(a, m, 30.0).matched.size(), 1u);
    EXPECT_EQ(match_picks(a, m, 20.0).matched.size(), 0u);
}

TEST(Match, GreedyPrefersClosestPair) {
    const PickSet a({pick_at(1.0, 100.0, 20.0), pick_at(1.0, 120.0, 20.0)}, PickSource::segnet);
    const PickSet m({pick_at(1.0, 118.0, 20.0)}, PickSource::manual);
    const auto r = match_picks(a, m);
    ASSERT_EQ(r.matched.size(), 1u);
    EXPECT_NEAR(r.matched[0].first.azimuth_deg, 120.0, 1e-9);
}

TEST(Match, CountsAndBoundsOnRandomSets) {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> az(0.0, 360.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<BreakoutPick> av, mv;
        for (int i = 0; i < 15; ++i) av.push_back(pick_at(0.1 * (rng() % 5), az(rng), 20.0 + i));
        for (int i = 0; i < 12; ++i) mv.push_back(pick_at(0.1 * (rng() % 5), az(rng), 20.0 + i));
        const PickSet a(av, PickSource::segnet);
        const PickSet m(mv, PickSource::manual);
        const auto r = match_picks(a, m);
        EXPECT_EQ(r.matched.size() + r.false_positives.size(), a.size());
        EXPECT_EQ(r.matched.size() + r.false_negatives.size(), m.size());
        const auto rt = rates(r);
        EXPECT_GE(rt.fpr, 0.0);
        EXPECT_LE(rt.fpr, 1.0);
        EXPECT_GE(rt.fnr, 0.0);
        EXPECT_LE(rt.fnr, 1.0);
    }
}

TEST(Rates, Examples) {
    MatchResult m;
    const auto p = pick_at(1.0, 10.0, 20.0);
    for (int i = 0; i < 96; ++i) m.matched.emplace_back(p, p);
    for (int i = 0; i < 4; ++i) m.false_positives.push_back(p);
    EXPECT_DOUBLE_EQ(rates(m).fpr, 0.04);

    MatchResult n;
    for (int i = 0; i < 61; ++i) n.matched.emplace_back(p, p);
    for (int i = 0; i < 39; ++i) n.false_negatives.push_back(p);
    EXPECT_DOUBLE_EQ(rates(n).fnr, 0.39);
    EXPECT_DOUBLE_EQ(rates(n).fpr, 0.0);

    EXPECT_DOUBLE_EQ(rates(MatchResult{}).fpr, 0.0);
}

TEST(PickErrors, Examples) {
    EXPECT_FALSE(pick_errors(MatchResult{}).has_value());

    MatchResult one;
    one.matched.emplace_back(pick_at(1.0, 143.0, 40.0), pick_at(1.0, 147.0, 50.0));
    const auto e = pick_errors(one);
    ASSERT_TRUE(e);
    EXPECT_NEAR(e->azimuth_error_deg, 4.0, 1e-9);
    EXPECT_NEAR(e->width_error_deg, 10.0, 1e-9);

    MatchResult wrap;
    wrap.matched.emplace_back(pick_at(1.0, 10.0, 20.0), pick_at(1.0, 350.0, 20.0));
    wrap.matched.emplace_back(pick_at(2.0, 20.0, 20.0), pick_at(2.0, 40.0, 20.0));
    EXPECT_NEAR(pick_errors(wrap)->azimuth_error_deg, 20.0, 1e-9);
}

TEST(CircularStats, Examples) {
    const std::vector<double> same(7, 143.0);
    auto s = circular_stats(same);
    EXPECT_NEAR(s.mean_deg, 143.0, 1e-9);
    EXPECT_NEAR(s.std_deg, 0.0, 1e-6);

    const std::vector<double> wrap{350.0, 10.0};
    s = circular_stats(wrap);
    EXPECT_NEAR(circ_diff(s.mean_deg, 0.0), 0.0, 1e-9);

    const std::vector<double> pair{80.0, 100.0};
    s = circular_stats(pair);
    EXPECT_NEAR(s.mean_deg, 90.0, 1e-9);
    const double ref = std::sqrt(-2.0 * std::log(std::cos(10.0 * std::numbers::pi / 180.0))) * 180.0 / std::numbers::pi;
    EXPECT_NEAR(s.std_deg, ref, 1e-9);
    EXPECT_NEAR(s.std_deg, 10.0, 0.05);

    const std::vector<double> opposite{0.0, 180.0};
    EXPECT_FALSE(circular_stats(opposite).mean_defined);
    EXPECT_THROW(circular_stats(std::vector<double>{}), ParameterError);
}

TEST(CircularStats, RotationShiftsMeanOnly) {
    std::mt19937 rng(3);
    std::normal_distribution<double> n(0.0, 15.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> az;
        for (int i = 0; i < 30; ++i) az.push_back(wrap360(143.0 + n(rng)));
        const double k = 360.0 * (rng() % 1000) / 1000.0;
        std::vector<double> rot;
        for (double a : az) rot.push_back(wrap360(a + k));
        const auto s0 = circular_stats(az);
        const auto s1 = circular_stats(rot);
        EXPECT_NEAR(s1.std_deg, s0.std_deg, 1e-7);
        EXPECT_NEAR(circ_diff(s1.mean_deg, s0.mean_deg + k), 0.0, 1e-7);
    }
}

TEST(AxialStats, PairedBreakoutsCollapse) {
    const std::vector<double> az{133.0, 313.0, 153.0, 333.0};
    const auto s = axial_stats(az);
    EXPECT_NEAR(s.mean_deg, 143.0, 1e-9);
    // doubled angles are +-20 about 286, so the halved spread is about 10
    const double ref = 0.5 * std::sqrt(-2.0 * std::log(std::cos(20.0 * std::numbers::pi / 180.0))) * 180.0 / std::numbers::pi;
    EXPECT_NEAR(s.std_deg, ref, 1e-9);
    EXPECT_GT(circular_stats(az).std_deg, 80.0);
}

TEST(ArithmeticStats, PopulationSd) {
    const std::vector<double> az{140.0, 146.0};
    const auto s = arithmetic_stats(az);
    EXPECT_DOUBLE_EQ(s.mean_deg, 143.0);
    EXPECT_DOUBLE_EQ(s.std_deg, 3.0);
}

namespace {

// `zones` runs of rows at 0.1 m spacing, each `rows` long, zones 20 m apart, azimuths alternating
// centre +- spread so the axial sd is about `spread`.
PickSet zoned_set(int zones, int rows, double centre, double spread) {
    std::vector<BreakoutPick> picks;
    for (int z = 0; z < zones; ++z) {
        for (int r = 0; r < rows; ++r) {
            const double depth = 1000.0 + 20.0 * z + 0.1 * r;
            const double az = centre + ((r % 2) ? spread : -spread);
            picks.push_back(pick_at(depth, az, 30.0));
            picks.push_back(pick_at(depth, az + 180.0, 30.0));
        }
    }
    return PickSet(picks, PickSource::segnet);
}

}  // namespace

TEST(Wsm, Examples) {
    // 5 zones x 5 m, sd 10
    auto a = wsm_assess(zoned_set(5, 50, 143.0, 10.0), 0.1);
    EXPECT_EQ(a.zones, 5u);
    EXPECT_NEAR(a.combined_length_m, 25.0, 1e-6);
    EXPECT_NEAR(a.azimuth_std_deg, 10.0, 0.2);
    EXPECT_EQ(a.rank, WsmRank::C_or_better);

    // 3 zones x 10 m, sd 5: too few zones
    a = wsm_assess(zoned_set(3, 100, 143.0, 5.0), 0.1);
    EXPECT_EQ(a.zones, 3u);
    EXPECT_EQ(a.rank, WsmRank::below_C);

    // 6 zones, sd 30
    a = wsm_assess(zoned_set(6, 42, 143.0, 30.0), 0.1);
    EXPECT_EQ(a.zones, 6u);
    EXPECT_GE(a.combined_length_m, 25.0);
    EXPECT_GT(a.azimuth_std_deg, 25.0);
    EXPECT_EQ(a.rank, WsmRank::below_C);

    EXPECT_EQ(wsm_quality(PickSet(PickSource::segnet), 0.1), WsmRank::below_C);
    EXPECT_EQ(to_string(WsmRank::C_or_better), "C_or_better");
}

TEST(Wsm, AddingConsistentZoneNeverDemotes) {
    for (int zones = 1; zones < 8; ++zones) {
        const auto before = wsm_quality(zoned_set(zones, 60, 143.0, 5.0), 0.1);
        const auto after = wsm_quality(zoned_set(zones + 1, 60, 143.0, 5.0), 0.1);
        if (before == WsmRank::C_or_better) EXPECT_EQ(after, WsmRank::C_or_better);
    }
}

TEST(BalancedBce, Examples) {
    const std::vector<double> ones(6, 1.0);
    EXPECT_EQ(balanced_bce(ones, ones).loss, 0.0);
    EXPECT_DOUBLE_EQ(balanced_bce(ones, ones).beta, 0.0);

    const std::vector<double> zeros(9, 0.0);
    const std::vector<double> half(9, 0.5);
    const auto h = balanced_bce(zeros, half);
    EXPECT_DOUBLE_EQ(h.beta, 1.0);
    EXPECT_NEAR(h.loss, 9.0 * std::log(2.0), 1e-12);

    const std::vector<double> y{1, 0, 0, 0};
    const std::vector<double> p{0.8, 0.2, 0.2, 0.2};
    const auto r = balanced_bce(y, p);
    EXPECT_DOUBLE_EQ(r.beta, 0.75);
    EXPECT_NEAR(r.loss, oracle::bce_ref(y, p), 1e-12);
    EXPECT_NEAR(r.loss, 3.75 * -std::log(0.8), 1e-12);
    EXPECT_NEAR(r.loss, 0.8368, 1e-4);
}

TEST(BalancedBce, GridOverloadAndShape) {
    const auto g = GridGeometry::make(2, 8, 0.0, 1.0);
    MaskGrid y = MaskGrid::zeros(g);
    y.values[3] = 1;
    ProbGrid p = ProbGrid::filled(g, 0.25f);
    std::vector<double> yy(y.values.begin(), y.values.end());
    std::vector<double> pp(p.values.begin(), p.values.end());
    EXPECT_NEAR(balanced_bce(y, p).loss, oracle::bce_ref(yy, pp), 1e-9);
    EXPECT_THROW(balanced_bce(y, ProbGrid::filled(GridGeometry::make(2, 16, 0.0, 1.0), 0.5f)), ShapeError);
}

TEST(BalancedBce, Properties) {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 64;
        std::vector<double> y(n), p(n);
        for (auto& v : y) v = u(rng) < 0.3 ? 1.0 : 0.0;
        for (auto& v : p) v = u(rng);
        const auto r = balanced_bce(y, p);
        EXPECT_GE(r.loss, 0.0);
        EXPECT_NEAR(r.loss, oracle::bce_ref(y, p), 1e-9 * std::max(1.0, r.loss));

        // an all-background mask makes it the plain binary cross-entropy
        std::vector<double> z(n, 0.0);
        double plain = 0.0;
        for (double q : p) plain -= std::log(1.0 - std::clamp(q, 1e-7, 1.0 - 1e-7));
        EXPECT_NEAR(balanced_bce(z, p).loss, plain, 1e-9 * std::max(1.0, plain));

        // exact predictions: loss is the clamping floor only
        EXPECT_LT(balanced_bce(y, y).loss, 1e-5);
    }
}

TEST(Rose, HistogramAndCsv) {
    const std::vector<double> az{0.0, 9.99, 10.0, 143.0, 359.9};
    const auto h = rose_histogram(az);
    ASSERT_EQ(h.size(), 36u);
    EXPECT_EQ(h[0], 2u);
    EXPECT_EQ(h[1], 1u);
    EXPECT_EQ(h[14], 1u);
    EXPECT_EQ(h[35], 1u);
    const auto csv = format_rose_csv(h);
    EXPECT_EQ(csv.substr(0, 33), "bin_start_deg,count\n0.0,2\n10.0,1\n");
}

TEST(Evaluate, IdenticalSetsAndJson) {
    std::vector<BreakoutPick> picks;
    for (int i = 0; i < 40; ++i) {
        picks.push_back(pick_at(0.1 + 0.2 * i, 143.0, 45.0));
        picks.push_back(pick_at(0.1 + 0.2 * i, 323.0, 45.0));
    }
    const PickSet s(picks, PickSource::segnet);
    const auto r = evaluate(s, s.with_status(PickStatus::candidate), EvaluationOptions{});
    EXPECT_DOUBLE_EQ(r.fpr, 0.0);
    EXPECT_DOUBLE_EQ(r.fnr, 0.0);
    EXPECT_NEAR(*r.azimuth_error_deg, 0.0, 1e-12);
    EXPECT_NEAR(*r.width_error_deg, 0.0, 1e-12);
    EXPECT_NEAR(*r.azimuth_mean_deg, 143.0, 1e-9);
    EXPECT_EQ(r.n_matched, 80u);
    EXPECT_FALSE(r.iou.has_value());

    const auto j = to_json(r);
    EXPECT_EQ(j["schema"], 1);
    for (const char* key : {"iou", "azimuth_mean_deg", "azimuth_std_deg", "azimuth_error_deg", "width_error_deg",
                            "fpr", "fnr", "wsm_rank", "n_auto", "n_manual", "n_matched"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["iou"].is_null());

    const auto g = GridGeometry::make(2, 8, 0.0, 1.0);
    const auto m = mask_with(g, 2, 4);
    const auto with_iou = evaluate(s, s, EvaluationOptions{}, &m, &m);
    ASSERT_TRUE(with_iou.iou.has_value());
    EXPECT_DOUBLE_EQ(*with_iou.iou, 1.0);
}

TEST(Evaluate, RotationInvariance) {
    std::mt19937 rng(5);
    std::normal_distribution<double> n(0.0, 8.0);
    std::vector<BreakoutPick> a, m;
    for (int i = 0; i < 30; ++i) {
        const double d = 0.1 + 0.2 * i;
        a.push_back(pick_at(d, 143.0 + n(rng), 40.0 + n(rng)));
        m.push_back(pick_at(d, 143.0 + n(rng), 45.0));
        if (i % 4 == 0) a.push_back(pick_at(d, 250.0, 30.0));
    }
    const auto base = evaluate(PickSet(a, PickSource::segnet), PickSet(m, PickSource::manual), EvaluationOptions{});
    for (double k : {37.0, 200.0}) {
        auto rot = [k](std::vector<BreakoutPick> v) {
            for (auto& p : v) p = BreakoutPick::from_edges(p.depth, wrap360(p.left_deg + k), p.width_deg);
            return v;
        };
        const auto r = evaluate(PickSet(rot(a), PickSource::segnet), PickSet(rot(m), PickSource::manual),
                                EvaluationOptions{});
        EXPECT_NEAR(*r.azimuth_error_deg, *base.azimuth_error_deg, 1e-9);
        EXPECT_NEAR(*r.width_error_deg, *base.width_error_deg, 1e-9);
        EXPECT_DOUBLE_EQ(r.fpr, base.fpr);
        EXPECT_DOUBLE_EQ(r.fnr, base.fnr);
        EXPECT_NEAR(*r.azimuth_std_deg, *base.azimuth_std_deg, 1e-7);
        EXPECT_NEAR(circ_diff(2.0 * *r.azimuth_mean_deg, 2.0 * (*base.azimuth_mean_deg + k)), 0.0, 1e-6);
    }
}
