#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include "d3c/error.hpp"
#include "d3c/rational.hpp"
#include "json.hpp"

namespace d3c {

/// Decimal text with 12 significant digits, locale independent.
inline std::string format_decimal(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

inline std::string format_decimal(const Rational& q) { return format_decimal(q.to_double()); }

namespace detail {

inline void check_storage_below_K(int K, const Rational& r) {
    if (K < 2) throw InvalidParameter("requires K >= 2");
    if (r < 1 || r >= K)
        throw InvalidParameter("requires 1 <= r < K (got r=" + r.str() + ", K=" + std::to_string(K) + ")");
}

} // namespace detail

struct CornerPoint {
    Rational g;
    Rational c;
    Rational L;

    friend bool operator==(const CornerPoint&, const CornerPoint&) = default;
};

/// The achievable point at integer coding parameter g:
/// c = r/K + (1 - r/K) g and L = (1/g)(1 - r/K).
inline CornerPoint corner_load(int K, const Rational& r, int g) {
    detail::check_storage_below_K(K, r);
    if (g < 1 || g > r.floor())
        throw InvalidParameter("requires 1 <= g <= floor(r) (got g=" + std::to_string(g) + ", r=" + r.str() + ")");
    const Rational rest = Rational(1) - r / Rational(K);
    return {Rational(g), r / Rational(K) + rest * Rational(g), rest / Rational(g)};
}

/// (1/r)(1 - r/K) evaluated directly, also at fractional r.
inline Rational lstar_formula(int K, const Rational& r) {
    if (r < 1 || r > K) throw InvalidParameter("requires 1 <= r <= K (got r=" + r.str() + ")");
    return (Rational(1) - r / Rational(K)) / r;
}

/// Minimum load when every node maps everything it stores: the lower convex
/// envelope of the integer points (r, (1/r)(1 - r/K)).
inline Rational optimal_load_cdc(int K, const Rational& r) {
    if (K < 1 || r < 1 || r > K) throw InvalidParameter("requires 1 <= r <= K (got r=" + r.str() + ")");
    if (r.is_integer()) return lstar_formula(K, r);
    const Rational lo(r.floor());
    const Rational hi(r.ceil());
    const Rational alpha = r - lo;
    return (Rational(1) - alpha) * lstar_formula(K, lo) + alpha * lstar_formula(K, hi);
}

/// floor(r) + (r - floor(r))(K - ceil(r)) / (K - r).
inline Rational g_r(int K, const Rational& r) {
    detail::check_storage_below_K(K, r);
    const Rational lo(r.floor());
    return lo + (r - lo) * Rational(K - r.ceil()) / (Rational(K) - r);
}

/// Computation load beyond which the flat level is reached.
inline Rational c_star(int K, const Rational& r) {
    const Rational gr = g_r(K, r);
    return r / Rational(K) + (Rational(1) - r / Rational(K)) * gr;
}

struct TradeoffCurve {
    int K = 0;
    Rational r;
    std::vector<CornerPoint> points; ///< envelope vertices, increasing in c
    Rational flat_tail_end;          ///< = r
    int resolution = 0;              ///< chord samples between vertices when emitted
};

/// True when every interior point lies on or below the chord of its neighbours.
inline bool is_convex(const std::vector<CornerPoint>& pts) {
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const auto& a = pts[i - 1];
        const auto& b = pts[i];
        const auto& c = pts[i + 1];
        // (b.L - a.L)(c.c - a.c) <= (c.L - a.L)(b.c - a.c)
        if ((b.L - a.L) * (c.c - a.c) > (c.L - a.L) * (b.c - a.c)) return false;
    }
    return true;
}

/// Lower convex envelope of the corner points g = 1..floor(r) and the point
/// (c*(r), L*(r)), followed by a flat tail up to c = r.
inline TradeoffCurve build_curve(int K, const Rational& r, int resolution = 0) {
    detail::check_storage_below_K(K, r);
    if (resolution < 0) throw InvalidParameter("resolution must be non-negative");

    std::vector<CornerPoint> cand;
    for (int g = 1; g <= r.floor(); ++g) cand.push_back(corner_load(K, r, g));
    cand.push_back({g_r(K, r), c_star(K, r), lstar_formula(K, r)});
    std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
        return a.c != b.c ? a.c < b.c : a.L < b.L;
    });

    std::vector<CornerPoint> hull;
    for (const auto& p : cand) {
        if (!hull.empty() && hull.back().c == p.c) continue; // keep the lower L at equal c
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            if ((a.c - o.c) * (p.L - o.L) - (a.L - o.L) * (p.c - o.c) > 0) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }
    return {K, r, std::move(hull), r, resolution};
}

/// Envelope value at computation load c.
inline Rational query_load(const TradeoffCurve& curve, const Rational& c) {
    if (c < 1 || c > curve.r)
        throw InvalidParameter("requires 1 <= c <= r (got c=" + c.str() + ", r=" + curve.r.str() + ")");
    const auto& pts = curve.points;
    if (c >= pts.back().c) return pts.back().L;
    if (c <= pts.front().c) return pts.front().L;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (c <= pts[i].c) {
            const auto& a = pts[i - 1];
            const auto& b = pts[i];
            return a.L + (b.L - a.L) * (c - a.c) / (b.c - a.c);
        }
    }
    return pts.back().L;
}

struct CurveRow {
    Rational c;
    Rational L;
    std::string kind; ///< corner | chord | flat
};

inline std::vector<CurveRow> sample_curve(const TradeoffCurve& curve) {
    std::vector<CurveRow> rows;
    const auto& pts = curve.points;
    const int steps = std::max(curve.resolution, 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        rows.push_back({pts[i].c, pts[i].L, "corner"});
        if (i + 1 == pts.size()) break;
        for (int s = 1; s < steps; ++s) {
            Rational t(s, steps);
            rows.push_back({pts[i].c + (pts[i + 1].c - pts[i].c) * t, pts[i].L + (pts[i + 1].L - pts[i].L) * t, "chord"});
        }
    }
    const CornerPoint& last = pts.back();
    if (last.c < curve.flat_tail_end) {
        for (int s = 1; s <= steps; ++s) {
            Rational t(s, steps);
            rows.push_back({last.c + (curve.flat_tail_end - last.c) * t, last.L, "flat"});
        }
    }
    return rows;
}

inline std::string curve_csv(const TradeoffCurve& curve) {
    std::string out = "c,L,segment_kind\n";
    for (const auto& row : sample_curve(curve))
        out += format_decimal(row.c) + "," + format_decimal(row.L) + "," + row.kind + "\n";
    return out;
}

inline nlohmann::json curve_json(const TradeoffCurve& curve) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : curve.points)
        pts.push_back({{"g", p.g.str()}, {"c", p.c.str()}, {"L", p.L.str()}, {"c_value", p.c.to_double()},
                       {"L_value", p.L.to_double()}});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : sample_curve(curve))
        rows.push_back({{"c", row.c.to_double()}, {"L", row.L.to_double()}, {"segment_kind", row.kind}});
    return {{"K", curve.K},
            {"r", curve.r.str()},
            {"c_star", c_star(curve.K, curve.r).str()},
            {"g_r", g_r(curve.K, curve.r).str()},
            {"flat_tail_end", curve.flat_tail_end.str()},
            {"points", pts},
            {"rows", rows}};
}

struct CStarRow {
    Rational r;
    Rational c_star;
};

/// c*(r) over the grid r = 1, 1 + step, ... < K.
inline std::vector<CStarRow> cstar_sweep(int K, const Rational& step) {
    if (K < 2) throw InvalidParameter("requires K >= 2");
    if (step <= 0) throw InvalidParameter("step must be positive");
    std::vector<CStarRow> rows;
    for (Rational r(1); r < K; r += step) rows.push_back({r, c_star(K, r)});
    return rows;
}

inline std::string cstar_csv(const std::vector<CStarRow>& rows) {
    std::string out = "r,c_star,c_equals_r\n";
    for (const auto& row : rows)
        out += format_decimal(row.r) + "," + format_decimal(row.c_star) + "," + format_decimal(row.r) + "\n";
    return out;
}

} // namespace d3c
