#include "oracles.hpp"

#include <bkit/errors.hpp>
#include <bkit/postproc.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace bkit;

namespace {

std::vector<std::uint8_t> row_with(std::size_t n, std::initializer_list<std::size_t> ones) {
    std::vector<std::uint8_t> row(n, 0);
    for (auto c : ones) row[c] = 1;
    return row;
}

bool same_runs(const std::vector<CircularRun>& got, const std::vector<oracle::Run>& want) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i].start_col != want[i].start || got[i].length != want[i].length ||
            got[i].full_circle != want[i].full)
            return false;
    }
    return true;
}

MaskGrid mask_from_rows(const std::vector<std::vector<std::uint8_t>>& rows, double depth_step = 0.1) {
    const auto g = GridGeometry::make(static_cast<std::uint32_t>(rows.size()),
                                      static_cast<std::uint32_t>(rows.front().size()), 50.0, depth_step);
    MaskGrid m = MaskGrid::zeros(g);
    for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    return m;
}

}  // namespace

TEST(Binarize, ThresholdConvention) {
    const auto g = GridGeometry::make(1, 8, 0.0, 1.0);
    auto p = ProbGrid::filled(g, 0.0f);
    EXPECT_EQ(binarize(p, 0.5).count(), 0u);
    p.values = {0.4f, 0.6f, 0.5f, 0.0f, 1.0f, 0.49999f, 0.2f, 0.8f};
    const auto m = binarize(p, 0.5);
    EXPECT_EQ(m.values, (std::vector<std::uint8_t>{0, 1, 1, 0, 1, 0, 0, 1}));
    EXPECT_THROW(binarize(p, 1.5), ParameterError);
    EXPECT_THROW(binarize(p, 0.0), ParameterError);
    EXPECT_THROW(binarize(p, 1.0), ParameterError);
}

TEST(ExtractRuns, Examples) {
    EXPECT_EQ(extract_runs(row_with(256, {2, 3})), (std::vector<CircularRun>{{2, 2, false}}));
    EXPECT_EQ(extract_runs(row_with(256, {254, 255, 0, 1})), (std::vector<CircularRun>{{254, 4, false}}));
    EXPECT_EQ(extract_runs(std::vector<std::uint8_t>(256, 1)), (std::vector<CircularRun>{{0, 256, true}}));
    EXPECT_TRUE(extract_runs(std::vector<std::uint8_t>(256, 0)).empty());
    EXPECT_EQ(extract_runs(row_with(16, {0, 5, 6, 15})),
              (std::vector<CircularRun>{{5, 2, false}, {15, 2, false}}));
}

TEST(ExtractRuns, ExhaustiveWidth16MatchesOracle) {
    std::vector<std::uint8_t> row(16);
    for (std::uint32_t bits = 0; bits < (1u << 16); ++bits) {
        for (int c = 0; c < 16; ++c) row[c] = (bits >> c) & 1u;
        const auto got = extract_runs(row);
        ASSERT_TRUE(same_runs(got, oracle::scan_runs(row))) << "bits=" << bits;
    }
}

TEST(ExtractRuns, RandomWidth256MatchesOracleAndConservesCells) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    std::vector<std::uint8_t> row(256);
    for (int trial = 0; trial < 10000; ++trial) {
        const double d = trial % 97 == 0 ? 1.0 : density(rng);
        std::bernoulli_distribution bit(d);
        for (auto& v : row) v = bit(rng) ? 1 : 0;
        const auto got = extract_runs(row);
        ASSERT_TRUE(same_runs(got, oracle::scan_runs(row))) << "trial " << trial;
        std::size_t total = 0;
        for (const auto& r : got) total += r.length;
        EXPECT_EQ(total, static_cast<std::size_t>(std::count(row.begin(), row.end(), 1)));
    }
}

TEST(RunToPick, Examples) {
    const auto g256 = GridGeometry::make(1, 256, 0.0, 0.1);
    const auto g360 = GridGeometry::make(1, 360, 0.0, 0.1);
    EXPECT_FALSE(run_to_pick({2, 2, false}, g256, 0.0).has_value());

    const auto wrap = run_to_pick({350, 20, false}, g360, 0.0);
    ASSERT_TRUE(wrap);
    EXPECT_DOUBLE_EQ(wrap->left_deg, 350.0);
    EXPECT_DOUBLE_EQ(wrap->right_deg, 10.0);
    EXPECT_DOUBLE_EQ(wrap->width_deg, 20.0);
    EXPECT_DOUBLE_EQ(wrap->azimuth_deg, 0.0);

    const auto p = run_to_pick({100, 32, false}, g256, 0.0);
    ASSERT_TRUE(p);
    EXPECT_DOUBLE_EQ(p->left_deg, 140.625);
    EXPECT_DOUBLE_EQ(p->width_deg, 45.0);
    EXPECT_DOUBLE_EQ(p->azimuth_deg, 163.125);

    EXPECT_FALSE(run_to_pick({0, 256, true}, g256, 0.0).has_value());
}

TEST(RunToPick, WidthThreshold) {
    // 10 degrees is exactly representable on a 360-column grid (10 columns) and on a 720 one (20)
    for (std::uint32_t n : {36u, 360u, 720u}) {
        const auto g = GridGeometry::make(1, n, 0.0, 0.1);
        const std::uint32_t ten = n / 36;
        EXPECT_TRUE(run_to_pick({5, ten, false}, g, 0.0).has_value()) << n;
        EXPECT_FALSE(run_to_pick({5, ten - 1, false}, g, 0.0).has_value()) << n;
    }
    // every run narrower than 10 degrees on a 256-column grid (7 columns = 9.84 deg) is dropped
    const auto g = GridGeometry::make(1, 256, 0.0, 0.1);
    for (std::uint32_t len = 1; len * g.azimuth_step() < 10.0; ++len)
        EXPECT_FALSE(run_to_pick({0, len, false}, g, 0.0).has_value()) << len;
    EXPECT_TRUE(run_to_pick({0, 8, false}, g, 0.0).has_value());
}

TEST(PicksFromMask, EmptyAndWashout) {
    const auto g = GridGeometry::make(4, 64, 0.0, 0.1);
    EXPECT_TRUE(picks_from_mask(MaskGrid::zeros(g)).empty());

    auto m = MaskGrid::zeros(g);
    std::fill(m.row(2).begin(), m.row(2).end(), 1);
    const auto d = picks_from_mask_detailed(m);
    EXPECT_TRUE(d.picks.empty());
    EXPECT_EQ(d.washout_rows, 1u);
}

TEST(PicksFromMask, MatchesRowOracleOnRandomMasks) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::bernoulli_distribution bit(trial % 2 ? 0.85 : 0.4);
        std::vector<std::vector<std::uint8_t>> rows(6, std::vector<std::uint8_t>(64));
        for (auto& row : rows)
            for (auto& v : row) v = bit(rng) ? 1 : 0;
        const auto set = picks_from_mask(mask_from_rows(rows));
        std::vector<std::tuple<double, double, double, double>> got;
        for (const auto& p : set) got.emplace_back(p.depth, p.left_deg, p.width_deg, p.azimuth_deg);
        std::vector<std::tuple<double, double, double, double>> want;
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (auto [l, w, a] : oracle::row_picks(rows[r], 10.0)) want.emplace_back(50.0 + 0.1 * r, l, w, a);
        std::sort(want.begin(), want.end());
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_DOUBLE_EQ(std::get<0>(got[i]), std::get<0>(want[i]));
            EXPECT_DOUBLE_EQ(std::get<1>(got[i]), std::get<1>(want[i]));
            EXPECT_DOUBLE_EQ(std::get<2>(got[i]), std::get<2>(want[i]));
            EXPECT_NEAR(std::get<3>(got[i]), std::get<3>(want[i]), 1e-9);
        }
    }
}

TEST(PicksFromMask, RotationEquivariance) {
    std::mt19937 rng(4);
    std::bernoulli_distribution bit(0.6);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<std::uint8_t>> rows(5, std::vector<std::uint8_t>(128));
        for (auto& row : rows)
            for (auto& v : row) v = bit(rng) ? 1 : 0;
        const std::size_t k = rng() % 128;
        auto shifted = rows;
        for (auto& row : shifted) std::rotate(row.rbegin(), row.rbegin() + k, row.rend());

        const auto a = picks_from_mask(mask_from_rows(rows));
        const auto b = picks_from_mask(mask_from_rows(shifted));
        ASSERT_EQ(a.size(), b.size());
        const double step = 360.0 / 128;
        std::vector<std::pair<double, double>> expect;
        for (const auto& p : a) expect.emplace_back(p.depth, wrap360(p.left_deg + k * step));
        std::vector<std::pair<double, double>> have;
        for (const auto& p : b) have.emplace_back(p.depth, p.left_deg);
        std::sort(expect.begin(), expect.end());
        for (std::size_t i = 0; i < have.size(); ++i) {
            EXPECT_DOUBLE_EQ(have[i].first, expect[i].first);
            EXPECT_NEAR(have[i].second, expect[i].second, 1e-9);
        }
        std::multiset<double> wa, wb;
        for (const auto& p : a) wa.insert(p.width_deg);
        for (const auto& p : b) wb.insert(p.width_deg);
        EXPECT_EQ(wa, wb);
    }
}

TEST(Rasterize, Examples) {
    const auto g = GridGeometry::make(3, 360, 10.0, 0.5);
    EXPECT_EQ(rasterize_picks(PickSet(PickSource::manual), g).count(), 0u);

    const PickSet one({BreakoutPick::from_edges(10.5, 0.0, 90.0)}, PickSource::manual);
    const auto m = rasterize_picks(one, g);
    EXPECT_EQ(m.count(), 90u);
    for (std::size_t c = 0; c < 360; ++c) EXPECT_EQ(m.at(1, c), c < 90 ? 1 : 0);

    const PickSet abutting({BreakoutPick::from_edges(10.0, 0.0, 45.0), BreakoutPick::from_edges(10.0, 45.0, 45.0)},
                           PickSource::manual);
    const auto merged = picks_from_mask(rasterize_picks(abutting, g));
    ASSERT_EQ(merged.size(), 1u);
    EXPECT_DOUBLE_EQ(merged.picks()[0].width_deg, 90.0);

    const PickSet off({BreakoutPick::from_edges(99.0, 0.0, 45.0)}, PickSource::manual);
    EXPECT_THROW(rasterize_picks(off, g), RangeError);
}

TEST(Rasterize, SinglePickInverse) {
    const auto g = GridGeometry::make(2, 256, 0.0, 0.1);
    const PickSet s({BreakoutPick::from_edges(0.1, 140.625, 45.0)}, PickSource::segnet);
    EXPECT_EQ(picks_from_mask(rasterize_picks(s, g)), s);
}

TEST(RowOfDepth, Tolerance) {
    const auto g = GridGeometry::make(10, 8, 100.0, 0.05);
    EXPECT_EQ(row_of_depth(g, 100.0), 0u);
    EXPECT_EQ(row_of_depth(g, 100.0 + 3 * 0.05), 3u);
    EXPECT_FALSE(row_of_depth(g, 100.025).has_value());
    EXPECT_FALSE(row_of_depth(g, 99.95).has_value());
    EXPECT_FALSE(row_of_depth(g, 100.5).has_value());
}
