#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "d3c/analytics.hpp"
#include "d3c/combinatorics.hpp"
#include "d3c/error.hpp"
#include "d3c/rational.hpp"
#include "d3c/scheme.hpp"
#include "json.hpp"

namespace d3c {

/// One file group of a composite plan, run as a basic scheme (r, g).
struct GroupSpec {
    Rational fraction;
    int r = 1;
    int g = 1;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

enum class Route { corner, e1, e2, e3, clamp };

inline const char* to_string(Route r) {
    switch (r) {
    case Route::corner: return "corner";
    case Route::e1: return "e1";
    case Route::e2: return "e2";
    case Route::e3: return "e3";
    case Route::clamp: return "clamp";
    }
    return "?";
}

/// Load of the basic scheme (r_i, g_i) at K nodes: (1/g)(1 - r/K).
inline Rational basic_load(int K, int r, int g) { return (Rational(1) - Rational(r, K)) / Rational(g); }

inline Rational basic_computation(int K, int r, int g) { return predicted_computation(K, Rational(r), Rational(g)); }

namespace detail {

/// Drops empty groups and merges equal (r, g) pairs, keeping first-seen order.
inline std::vector<GroupSpec> merge_groups(const std::vector<GroupSpec>& in) {
    std::vector<GroupSpec> out;
    for (const auto& gs : in) {
        if (gs.fraction == 0) continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& o) { return o.r == gs.r && o.g == gs.g; });
        if (it == out.end())
            out.push_back(gs);
        else
            it->fraction += gs.fraction;
    }
    return out;
}

inline std::vector<GroupSpec> scaled(const std::vector<GroupSpec>& in, const Rational& w) {
    std::vector<GroupSpec> out = in;
    for (auto& gs : out) gs.fraction *= w;
    return out;
}

inline Rational coding_parameter(int K, const Rational& r, const Rational& c) {
    const Rational frac = r / Rational(K);
    return (c - frac) / (Rational(1) - frac);
}

} // namespace detail

struct E1Split {
    Rational alpha;
    std::vector<GroupSpec> groups;
};

/// Fractional storage r = (1 - alpha) floor(r) + alpha ceil(r) at integer g.
inline E1Split split_e1(int K, const Rational& r, int g) {
    detail::check_storage_below_K(K, r);
    if (g < 1 || g > r.floor())
        throw InvalidParameter("E1 requires 1 <= g <= floor(r) (got g=" + std::to_string(g) + ", r=" + r.str() + ")");
    if (r.is_integer()) return {Rational(0), {{Rational(1), static_cast<int>(r.floor()), g}}};
    const Rational alpha = r - Rational(r.floor());
    return {alpha,
            {{Rational(1) - alpha, static_cast<int>(r.floor()), g}, {alpha, static_cast<int>(r.ceil()), g}}};
}

struct E2Split {
    Rational beta;
    std::vector<E1Split> parts;    ///< at floor(g) then ceil(g)
    std::vector<GroupSpec> groups; ///< flattened, weighted
};

/// Fractional g = (1 - beta) floor(g) + beta ceil(g), each side an E1 split.
inline E2Split split_e2(int K, const Rational& r, const Rational& g) {
    detail::check_storage_below_K(K, r);
    if (g < 1) throw InvalidParameter("E2 requires g >= 1 (got g=" + g.str() + ")");
    if (g.is_integer() && g <= r.floor()) {
        E1Split only = split_e1(K, r, static_cast<int>(g.floor()));
        return {Rational(0), {only}, only.groups};
    }
    if (g >= r.floor())
        throw InvalidParameter("E2 requires g < floor(r) (got g=" + g.str() + ", r=" + r.str() +
                               "); coding parameters above floor(r) route through E3");
    const Rational beta = g - Rational(g.floor());
    E1Split lo = split_e1(K, r, static_cast<int>(g.floor()));
    E1Split hi = split_e1(K, r, static_cast<int>(g.ceil()));
    std::vector<GroupSpec> flat = detail::scaled(lo.groups, Rational(1) - beta);
    for (const auto& gs : detail::scaled(hi.groups, beta)) flat.push_back(gs);
    return {beta, {lo, hi}, detail::merge_groups(flat)};
}

struct E3Split {
    Rational theta;
    Rational r_prime;
    std::vector<GroupSpec> groups;
};

/// floor(r) < g <= g_r: fraction (1 - theta) runs E1 at storage r'(theta)
/// with g = floor(r); fraction theta runs the basic scheme (ceil(r), ceil(r)).
inline E3Split split_e3(int K, const Rational& r, const Rational& c) {
    detail::check_storage_below_K(K, r);
    const Rational g = detail::coding_parameter(K, r, c);
    if (r.is_integer()) {
        if (!g.is_integer() || g < 1 || g > r)
            throw InvalidParameter("integer r=" + r.str() + " admits no E3 split at c=" + c.str());
        const int ri = static_cast<int>(r.floor());
        return {Rational(0), r, {{Rational(1), ri, static_cast<int>(g.floor())}}};
    }
    const std::int64_t lo = r.floor();
    const std::int64_t hi = r.ceil();
    const Rational gr = g_r(K, r);
    if (g <= lo || g > gr) {
        const Rational c_lo = predicted_computation(K, r, Rational(lo));
        throw InvalidParameter("E3 requires c in (" + c_lo.str() + ", " + c_star(K, r).str() + "] (got c=" + c.str() + ")");
    }
    // g > floor(r) with g <= g_r forces K > ceil(r).
    const Rational theta = (g - Rational(lo)) * (Rational(K) - r) / Rational(K - hi);
    const Rational r_prime = r - theta * (Rational(hi) - r) / (Rational(1) - theta);
    std::vector<GroupSpec> groups = detail::scaled(split_e1(K, r_prime, static_cast<int>(lo)).groups, Rational(1) - theta);
    groups.push_back({theta, static_cast<int>(hi), static_cast<int>(hi)});
    return {theta, r_prime, detail::merge_groups(groups)};
}

/// Which construction serves (r, c); exactly one applies for 1 <= c <= r < K.
inline Route route_for(int K, const Rational& r, const Rational& c) {
    detail::check_storage_below_K(K, r);
    if (c < 1 || c > r)
        throw InvalidParameter("requires 1 <= c <= r (got c=" + c.str() + ", r=" + r.str() + ")");
    const Rational g = detail::coding_parameter(K, r, c);
    if (g > g_r(K, r)) return Route::clamp;
    if (g <= r.floor()) {
        if (!g.is_integer()) return Route::e2;
        return r.is_integer() ? Route::corner : Route::e1;
    }
    return Route::e3;
}

struct CompositePlan {
    int K = 0;
    std::uint64_t N = 0;
    Rational target_r;
    Rational target_c;
    Route route = Route::corner;
    std::vector<std::pair<std::string, Rational>> split; ///< alpha / beta / theta / r_prime as used
    std::vector<GroupSpec> groups;
    Rational planned_c;   ///< sum f_i c_i; equals target_c except on the clamp route
    Rational predicted_L; ///< sum f_i (1/g_i)(1 - r_i/K)
    std::uint64_t minimal_n = 0;

    /// File counts per group, in group order.
    std::vector<std::uint64_t> group_sizes() const {
        std::vector<std::uint64_t> out;
        for (const auto& gs : groups)
            out.push_back(static_cast<std::uint64_t>((gs.fraction * Rational(static_cast<std::int64_t>(N))).num()));
        return out;
    }

    /// Contiguous ascending file-id ranges, one per group.
    std::vector<std::vector<std::uint64_t>> group_files() const {
        std::vector<std::vector<std::uint64_t>> out;
        std::uint64_t next = 1;
        for (auto size : group_sizes()) {
            std::vector<std::uint64_t> ids(size);
            std::iota(ids.begin(), ids.end(), next);
            next += size;
            out.push_back(std::move(ids));
        }
        return out;
    }
};

/// Smallest N for which every group gets an integer number of files that
/// its basic scheme can batch.
inline std::uint64_t minimal_admissible_n(int K, const std::vector<GroupSpec>& groups) {
    std::uint64_t n = 1;
    for (const auto& gs : groups) {
        const std::uint64_t batches = batch_count(K, gs.r, gs.g);
        const auto p = static_cast<std::uint64_t>(gs.fraction.num());
        const auto q = static_cast<std::uint64_t>(gs.fraction.den());
        n = lcm_checked(n, checked_mul(q, batches) / std::gcd(p, batches));
    }
    return n;
}

/// Weighted predictions of a group list: (storage, computation, communication).
inline LoadReport predict_loads(int K, const std::vector<GroupSpec>& groups) {
    LoadReport out{Rational(0), Rational(0), Rational(0)};
    for (const auto& gs : groups) {
        out.storage_space += gs.fraction * Rational(gs.r);
        out.computation_load += gs.fraction * basic_computation(K, gs.r, gs.g);
        out.communication_load += gs.fraction * basic_load(K, gs.r, gs.g);
    }
    return out;
}

/// Plans (r, c) with 1 <= c <= r < K. N = 0 selects the minimal admissible N.
inline CompositePlan plan_for_target(int K, std::uint64_t N, const Rational& r, const Rational& c) {
    CompositePlan plan;
    plan.K = K;
    plan.target_r = r;
    plan.target_c = c;
    plan.route = route_for(K, r, c);
    const Rational g = detail::coding_parameter(K, r, c);

    switch (plan.route) {
    case Route::corner:
        plan.groups = {{Rational(1), static_cast<int>(r.floor()), static_cast<int>(g.floor())}};
        break;
    case Route::e1: {
        auto s = split_e1(K, r, static_cast<int>(g.floor()));
        plan.split = {{"alpha", s.alpha}};
        plan.groups = s.groups;
        break;
    }
    case Route::e2: {
        auto s = split_e2(K, r, g);
        plan.split = {{"beta", s.beta}};
        if (!r.is_integer()) plan.split.emplace_back("alpha", r - Rational(r.floor()));
        plan.groups = s.groups;
        break;
    }
    case Route::clamp:
        if (!r.is_integer() && g_r(K, r) == Rational(r.floor())) {
            // ceil(r) = K: the flat region starts at the E1 corner g = floor(r).
            auto s = split_e1(K, r, static_cast<int>(r.floor()));
            plan.split = {{"alpha", s.alpha}};
            plan.groups = s.groups;
            break;
        }
        [[fallthrough]];
    case Route::e3: {
        auto s = split_e3(K, r, plan.route == Route::e3 ? c : c_star(K, r));
        plan.split = {{"theta", s.theta}, {"r_prime", s.r_prime}};
        plan.groups = s.groups;
        break;
    }
    }

    const LoadReport pred = predict_loads(K, plan.groups);
    plan.planned_c = pred.computation_load;
    plan.predicted_L = pred.communication_load;
    if (pred.storage_space != r) throw ConsistencyError("plan storage " + pred.storage_space.str() + " != target " + r.str());
    const Rational expect_c = plan.route == Route::clamp ? c_star(K, r) : c;
    if (plan.planned_c != expect_c)
        throw ConsistencyError("plan computation " + plan.planned_c.str() + " != " + expect_c.str());

    plan.minimal_n = minimal_admissible_n(K, plan.groups);
    plan.N = N == 0 ? plan.minimal_n : N;
    if (plan.N % plan.minimal_n != 0)
        throw DivisibilityError("N=" + std::to_string(N) + " cannot be split for this plan; admissible N are multiples of " +
                                    std::to_string(plan.minimal_n),
                                plan.minimal_n);
    return plan;
}

/// One basic scheme per group, over that group's file ids. CDC groups are
/// never produced here.
inline std::vector<BasicScheme> group_schemes(const CompositePlan& plan, std::uint64_t F, std::uint64_t T) {
    std::vector<BasicScheme> out;
    auto files = plan.group_files();
    for (std::size_t i = 0; i < plan.groups.size(); ++i) {
        const auto& gs = plan.groups[i];
        SchemeParams p{plan.K, files[i].size(), F, T, gs.r, gs.g};
        out.push_back(build_basic_scheme(p, std::move(files[i])));
    }
    return out;
}

/// IVA size that keeps every group's segment split even.
inline std::uint64_t default_iva_bits(const CompositePlan& plan) {
    int max_g = 1;
    for (const auto& gs : plan.groups) max_g = std::max(max_g, gs.g);
    return default_iva_bits(max_g);
}

inline nlohmann::json plan_json(const CompositePlan& plan, bool with_file_ids = true) {
    nlohmann::json groups = nlohmann::json::array();
    auto files = plan.group_files();
    for (std::size_t i = 0; i < plan.groups.size(); ++i) {
        nlohmann::json g{{"fraction", plan.groups[i].fraction.str()}, {"r", plan.groups[i].r}, {"g", plan.groups[i].g}};
        if (with_file_ids)
            g["file_ids"] = files[i];
        else
            g["file_count"] = files[i].size();
        groups.push_back(std::move(g));
    }
    nlohmann::json split = nlohmann::json::object();
    for (const auto& [name, value] : plan.split) split[name] = value.str();
    return {{"K", plan.K},
            {"N", plan.N},
            {"target_r", plan.target_r.str()},
            {"target_c", plan.target_c.str()},
            {"route", to_string(plan.route)},
            {"split", split},
            {"groups", groups},
            {"planned_c", plan.planned_c.str()},
            {"predicted_L", plan.predicted_L.str()},
            {"minimal_N", plan.minimal_n}};
}

} // namespace d3c
