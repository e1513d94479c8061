#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "d3c/analytics.hpp"

using d3c::Rational;

namespace {

// Frozen from an independent fraction-arithmetic evaluation of
// c = r/K + (1 - r/K) g and L = (1 - r/K) / g at K = 10, r = 9/2.
struct Frozen {
    int g;
    Rational c, L;
};
const Frozen k10_r45[] = {{1, Rational(1), Rational(11, 20)},
                          {2, Rational(31, 20), Rational(11, 40)},
                          {3, Rational(21, 10), Rational(11, 60)},
                          {4, Rational(53, 20), Rational(11, 80)}};

double gr_double(int K, double r) {
    return std::floor(r) + (r - std::floor(r)) * (K - std::ceil(r)) / (K - r);
}

} // namespace

TEST(CornerLoad, Examples) {
    auto p = d3c::corner_load(10, Rational(9, 2), 1);
    EXPECT_EQ(p.c, Rational(1));
    EXPECT_EQ(p.L, Rational(11, 20));
    auto q = d3c::corner_load(3, Rational(2), 2);
    EXPECT_EQ(q.c, Rational(4, 3));
    EXPECT_EQ(q.L, Rational(1, 6));
    EXPECT_THROW(d3c::corner_load(10, Rational(9, 2), 5), d3c::InvalidParameter);
    EXPECT_THROW(d3c::corner_load(10, Rational(10), 1), d3c::InvalidParameter);
    for (const auto& f : k10_r45) {
        auto pt = d3c::corner_load(10, Rational(9, 2), f.g);
        EXPECT_EQ(pt.c, f.c);
        EXPECT_EQ(pt.L, f.L);
    }
}

TEST(CornerLoad, LoadVanishesAsStorageApproachesK) {
    Rational prev(1);
    for (std::int64_t d : {10, 100, 1000, 10000}) {
        Rational r = Rational(5) - Rational(1, d);
        Rational L = d3c::corner_load(5, r, 1).L;
        EXPECT_LT(L, prev);
        prev = L;
    }
    EXPECT_LT(prev, Rational(1, 1000));
}

TEST(CornerLoad, SatisfiesTradeoffIdentity) {
    for (int K = 2; K <= 12; ++K)
        for (std::int64_t num = 2; num < 2 * K; ++num) {
            Rational r(num, 2);
            for (int g = 1; g <= r.floor(); ++g) {
                auto p = d3c::corner_load(K, r, g);
                const Rational frac = r / Rational(K);
                ASSERT_EQ(p.L * (p.c - frac), (Rational(1) - frac) * (Rational(1) - frac));
                ASSERT_GE(p.L, d3c::lstar_formula(K, r));
            }
        }
}

TEST(OptimalLoadCdc, Examples) {
    EXPECT_EQ(d3c::optimal_load_cdc(10, Rational(3)), Rational(7, 30));
    EXPECT_EQ(d3c::optimal_load_cdc(7, Rational(7)), Rational(0));
    EXPECT_EQ(d3c::optimal_load_cdc(10, Rational(9, 2)), Rational(1, 8));
    EXPECT_THROW(d3c::optimal_load_cdc(10, Rational(11)), d3c::InvalidParameter);
    EXPECT_THROW(d3c::optimal_load_cdc(10, Rational(1, 2)), d3c::InvalidParameter);
}

// The direct formula at fractional r never exceeds the integer-point chord.
TEST(OptimalLoadCdc, FormulaIsBelowChordAtFractionalStorage) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const int K = 2 + static_cast<int>(rng() % 20);
        const std::int64_t den = 2 + static_cast<std::int64_t>(rng() % 50);
        const std::int64_t num = den + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>((K - 1) * den));
        const Rational r(num, den);
        if (r.is_integer()) {
            ASSERT_EQ(d3c::lstar_formula(K, r), d3c::optimal_load_cdc(K, r));
        } else {
            ASSERT_LT(d3c::lstar_formula(K, r), d3c::optimal_load_cdc(K, r)) << "K=" << K << " r=" << r;
        }
    }
}

TEST(GR, Examples) {
    EXPECT_EQ(d3c::g_r(10, Rational(9, 2)), Rational(49, 11));
    EXPECT_EQ(d3c::g_r(10, Rational(4)), Rational(4));
    EXPECT_EQ(d3c::g_r(5, Rational(9, 2)), Rational(4));
    EXPECT_THROW(d3c::g_r(5, Rational(5)), d3c::InvalidParameter);
}

TEST(CStar, Examples) {
    EXPECT_EQ(d3c::c_star(10, Rational(9, 2)), Rational(29, 10));
    EXPECT_EQ(d3c::c_star(3, Rational(2)), Rational(4, 3));
    for (int K = 2; K <= 9; ++K) EXPECT_EQ(d3c::c_star(K, Rational(1)), Rational(1));
}

TEST(CStar, MatchesFloatingEvaluation) {
    for (int K = 2; K <= 15; ++K)
        for (std::int64_t num = 20; num < 20 * K; ++num) {
            Rational r(num, 20);
            const double rd = r.to_double();
            const double want = rd / K + (1 - rd / K) * gr_double(K, rd);
            ASSERT_NEAR(d3c::c_star(K, r).to_double(), want, 1e-12);
        }
}

TEST(BuildCurve, TenNodesHalfIntegerStorage) {
    auto curve = d3c::build_curve(10, Rational(9, 2));
    ASSERT_EQ(curve.points.size(), 5U);
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(curve.points[i].c, k10_r45[i].c);
        EXPECT_EQ(curve.points[i].L, k10_r45[i].L);
    }
    EXPECT_EQ(curve.points[4].c, Rational(29, 10));
    EXPECT_EQ(curve.points[4].L, Rational(11, 90));
    EXPECT_EQ(curve.flat_tail_end, Rational(9, 2));
    EXPECT_TRUE(d3c::is_convex(curve.points));
}

TEST(BuildCurve, SmallCases) {
    auto c32 = d3c::build_curve(3, Rational(2));
    ASSERT_EQ(c32.points.size(), 2U);
    EXPECT_EQ(c32.points[0].c, Rational(1));
    EXPECT_EQ(c32.points[0].L, Rational(1, 3));
    EXPECT_EQ(c32.points[1].c, Rational(4, 3));
    EXPECT_EQ(c32.points[1].L, Rational(1, 6));

    auto c1 = d3c::build_curve(6, Rational(1));
    ASSERT_EQ(c1.points.size(), 1U);
    EXPECT_EQ(c1.points[0].L, Rational(5, 6));
    for (const auto& row : d3c::sample_curve(c1)) EXPECT_NE(row.kind, "flat");
}

TEST(QueryLoad, Examples) {
    auto curve = d3c::build_curve(10, Rational(9, 2));
    EXPECT_EQ(d3c::query_load(curve, Rational(7, 2)), Rational(11, 90));
    EXPECT_EQ(d3c::query_load(curve, Rational(1)), Rational(11, 20));
    EXPECT_EQ(d3c::query_load(curve, Rational(9, 5)), Rational(7, 30));
    EXPECT_EQ(d3c::query_load(d3c::build_curve(3, Rational(2)), Rational(7, 6)), Rational(1, 4));
    EXPECT_THROW(d3c::query_load(curve, Rational(5)), d3c::InvalidParameter);
    EXPECT_THROW(d3c::query_load(curve, Rational(1, 2)), d3c::InvalidParameter);
}

TEST(Curve, MonotoneConvexAndFlat) {
    for (int K = 2; K <= 10; ++K)
        for (std::int64_t num = 4; num < 4 * K; ++num) {
            const Rational r(num, 4);
            auto curve = d3c::build_curve(K, r);
            ASSERT_TRUE(d3c::is_convex(curve.points));
            for (std::size_t i = 1; i < curve.points.size(); ++i) {
                ASSERT_LT(curve.points[i - 1].c, curve.points[i].c);
                ASSERT_GE(curve.points[i - 1].L, curve.points[i].L);
            }
            Rational prev = d3c::query_load(curve, Rational(1));
            for (int s = 1; s <= 40; ++s) {
                const Rational c = Rational(1) + (r - Rational(1)) * Rational(s, 40);
                const Rational L = d3c::query_load(curve, c);
                ASSERT_LE(L, prev);
                prev = L;
                if (c >= d3c::c_star(K, r)) {
                    ASSERT_EQ(L, d3c::lstar_formula(K, r));
                }
                // Flat level equals the baseline optimum wherever r is integral.
                if (c >= d3c::c_star(K, r) && r.is_integer()) {
                    ASSERT_EQ(L, d3c::optimal_load_cdc(K, r));
                }
            }
        }
}

TEST(Curve, CodingAtFullParameterMatchesBaselineOptimum) {
    for (int K = 2; K <= 10; ++K)
        for (int r = 1; r < K; ++r) EXPECT_EQ(d3c::corner_load(K, Rational(r), r).L, d3c::optimal_load_cdc(K, Rational(r)));
}

TEST(CurveCsv, HeaderAndKinds) {
    auto curve = d3c::build_curve(10, Rational(9, 2), 4);
    const std::string csv = d3c::curve_csv(curve);
    EXPECT_EQ(csv.rfind("c,L,segment_kind\n", 0), 0U);
    EXPECT_NE(csv.find("2.9,0.122222222222,corner"), std::string::npos) << csv;
    EXPECT_NE(csv.find("4.5,0.122222222222,flat"), std::string::npos) << csv;
    EXPECT_NE(csv.find(",chord\n"), std::string::npos);
    EXPECT_EQ(d3c::format_decimal(1.0 / 3.0), "0.333333333333");
}

TEST(CStarSweep, GridAndBounds) {
    auto rows = d3c::cstar_sweep(10, Rational(1, 20));
    ASSERT_EQ(rows.size(), 180U);
    EXPECT_EQ(rows.front().r, Rational(1));
    EXPECT_EQ(rows.back().r, Rational(199, 20));
    for (const auto& row : rows) EXPECT_LE(row.c_star, row.r);
}
