#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "d3c/combinatorics.hpp"
#include "d3c/error.hpp"
#include "d3c/rational.hpp"
#include "json.hpp"

namespace d3c {

/// Smallest IVA size that keeps every segment split even for coding
/// parameters up to max_g: 8 * lcm(1..max_g).
inline std::uint64_t default_iva_bits(int max_g) {
    std::uint64_t l = 1;
    for (int i = 2; i <= max_g; ++i) l = lcm_checked(l, static_cast<std::uint64_t>(i));
    return checked_mul(8, l);
}

/// Parameters of one basic instance.
struct SchemeParams {
    int K = 0;
    std::uint64_t N = 0;
    std::uint64_t F = 64; ///< file size in bits
    std::uint64_t T = 8;  ///< IVA size in bits
    int r = 1;
    int g = 1;

    std::uint64_t batch_count() const { return d3c::batch_count(K, r, g); }
    std::uint64_t eta() const { return batch_size(N, K, r, g); }

    /// Throws InvalidParameter / DivisibilityError / SegmentationError.
    void validate() const {
        detail::require(K >= 2, "requires K >= 2 (got K=" + std::to_string(K) + ")");
        detail::check_batch_params(K, r, g);
        detail::require(F > 0, "requires F > 0");
        detail::require(T > 0, "requires T > 0");
        const std::uint64_t block_bits = checked_mul(eta(), T);
        if (block_bits % static_cast<std::uint64_t>(g) != 0) {
            const auto g64 = static_cast<std::uint64_t>(g);
            throw SegmentationError("segment split needs g | eta*T (eta*T=" + std::to_string(block_bits) +
                                        ", g=" + std::to_string(g) + ")",
                                    g64 - block_bits % g64);
        }
    }

    friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// The intermediate value v_{target,file}.
struct IvaId {
    int target = 0;
    std::uint64_t file = 0;

    friend auto operator<=>(const IvaId&, const IvaId&) = default;
};

enum class SchemeKind { d3c, cdc };

inline const char* to_string(SchemeKind k) { return k == SchemeKind::d3c ? "d3c" : "cdc"; }

/// Placement plus compute plan for one basic instance. Node k's data lives
/// at index k - 1 of the per-node vectors. All id lists are sorted.
struct BasicScheme {
    SchemeParams params;
    SchemeKind kind = SchemeKind::d3c;
    std::vector<BatchIndex> omega;                       ///< enum_omega order
    std::vector<std::vector<std::uint64_t>> batch_files; ///< parallel to omega
    std::vector<std::uint64_t> files;                    ///< all file ids handled by this scheme
    std::vector<std::vector<std::uint64_t>> storage;     ///< M_k
    std::vector<std::vector<IvaId>> compute_own;         ///< C_k^1
    std::vector<std::vector<IvaId>> compute_coded;       ///< C_k^2 (for CDC: every other computed IVA)

    int K() const noexcept { return params.K; }

    std::size_t batch_position(const BatchIndex& b) const {
        auto it = std::lower_bound(omega.begin(), omega.end(), b);
        if (it == omega.end() || *it != b)
            throw ConsistencyError("unknown batch (" + b.s.str() + "," + b.t.str() + ")");
        return static_cast<std::size_t>(it - omega.begin());
    }

    const std::vector<std::uint64_t>& files_of(const BatchIndex& b) const { return batch_files[batch_position(b)]; }

    std::uint64_t computed_count(int k) const {
        auto i = static_cast<std::size_t>(k - 1);
        return compute_own[i].size() + compute_coded[i].size();
    }
};

namespace detail {

inline std::vector<std::uint64_t> default_file_ids(std::uint64_t N) {
    std::vector<std::uint64_t> ids(N);
    std::iota(ids.begin(), ids.end(), std::uint64_t{1});
    return ids;
}

inline BasicScheme place(const SchemeParams& p, std::vector<std::uint64_t> file_ids) {
    p.validate();
    if (file_ids.size() != p.N)
        throw InvalidParameter("file id list has " + std::to_string(file_ids.size()) + " entries, expected N=" +
                               std::to_string(p.N));
    std::sort(file_ids.begin(), file_ids.end());
    if (std::adjacent_find(file_ids.begin(), file_ids.end()) != file_ids.end() || file_ids.front() == 0)
        throw InvalidParameter("file ids must be distinct and 1-based");

    BasicScheme s;
    s.params = p;
    s.omega = enum_omega(p.K, p.r, p.g);
    s.files = std::move(file_ids);
    const std::uint64_t eta = p.eta();
    const auto K = static_cast<std::size_t>(p.K);
    s.storage.resize(K);
    s.compute_own.resize(K);
    s.compute_coded.resize(K);

    // Batches take consecutive runs of ascending file ids in omega order.
    s.batch_files.reserve(s.omega.size());
    for (std::size_t b = 0; b < s.omega.size(); ++b) {
        auto first = s.files.begin() + static_cast<std::ptrdiff_t>(b * eta);
        s.batch_files.emplace_back(first, first + static_cast<std::ptrdiff_t>(eta));
        for (int k : s.omega[b].s)
            s.storage[static_cast<std::size_t>(k - 1)].insert(s.storage[static_cast<std::size_t>(k - 1)].end(),
                                                              first, first + static_cast<std::ptrdiff_t>(eta));
    }
    for (auto& m : s.storage) std::sort(m.begin(), m.end());
    return s;
}

} // namespace detail

/// Builds the basic coded scheme for integer (r, g): node k stores W_{S,T}
/// iff k ∈ S, computes its own IVAs of every stored file (C_k^1) and, for
/// each batch with k ∈ T, the IVAs of every node outside S (C_k^2).
inline BasicScheme build_basic_scheme(const SchemeParams& p, std::vector<std::uint64_t> file_ids) {
    BasicScheme s = detail::place(p, std::move(file_ids));
    for (std::size_t b = 0; b < s.omega.size(); ++b) {
        const auto& [S, T] = s.omega[b];
        for (int k : S) {
            auto& own = s.compute_own[static_cast<std::size_t>(k - 1)];
            for (auto n : s.batch_files[b]) own.push_back({k, n});
        }
        for (int k : T) {
            auto& coded = s.compute_coded[static_cast<std::size_t>(k - 1)];
            for (int q = 1; q <= p.K; ++q) {
                if (S.contains(q)) continue;
                for (auto n : s.batch_files[b]) coded.push_back({q, n});
            }
        }
    }
    for (auto& v : s.compute_own) std::sort(v.begin(), v.end());
    for (auto& v : s.compute_coded) std::sort(v.begin(), v.end());
    return s;
}

inline BasicScheme build_basic_scheme(const SchemeParams& p) {
    return build_basic_scheme(p, detail::default_file_ids(p.N));
}

/// The uncoded-map baseline: same placement as g = r, but every node maps
/// every stored file for every output function.
inline BasicScheme build_cdc_scheme(int K, std::uint64_t N, int r, std::uint64_t F, std::uint64_t T,
                                    std::vector<std::uint64_t> file_ids) {
    SchemeParams p{K, N, F, T, r, r};
    BasicScheme s = detail::place(p, std::move(file_ids));
    s.kind = SchemeKind::cdc;
    for (int k = 1; k <= K; ++k) {
        auto i = static_cast<std::size_t>(k - 1);
        for (auto n : s.storage[i]) {
            for (int q = 1; q <= K; ++q) (q == k ? s.compute_own[i] : s.compute_coded[i]).push_back({q, n});
        }
        std::sort(s.compute_own[i].begin(), s.compute_own[i].end());
        std::sort(s.compute_coded[i].begin(), s.compute_coded[i].end());
    }
    return s;
}

inline BasicScheme build_cdc_scheme(int K, std::uint64_t N, int r, std::uint64_t F = 64, std::uint64_t T = 0) {
    return build_cdc_scheme(K, N, r, F, T == 0 ? default_iva_bits(r) : T, detail::default_file_ids(N));
}

/// Normalized loads: storage / N, computation / NK, communication / NKT.
struct LoadReport {
    Rational storage_space;
    Rational computation_load;
    Rational communication_load;

    friend bool operator==(const LoadReport&, const LoadReport&) = default;
};

inline Rational measure_storage(const BasicScheme& s) {
    std::uint64_t stored = 0;
    for (const auto& m : s.storage) stored += m.size();
    return Rational(static_cast<std::int64_t>(stored), static_cast<std::int64_t>(s.params.N));
}

inline Rational measure_computation(const BasicScheme& s) {
    std::uint64_t computed = 0;
    for (int k = 1; k <= s.K(); ++k) computed += s.computed_count(k);
    return Rational(static_cast<std::int64_t>(computed),
                    static_cast<std::int64_t>(checked_mul(s.params.N, static_cast<std::uint64_t>(s.K()))));
}

/// r/K + (1 - r/K) g.
inline Rational predicted_computation(int K, const Rational& r, const Rational& g) {
    Rational frac = r / Rational(K);
    return frac + (Rational(1) - frac) * g;
}

/// Checks every structural invariant of a built scheme; throws
/// ConsistencyError naming the first violation.
inline void validate_scheme(const BasicScheme& s) {
    auto fail = [](const std::string& what) { throw ConsistencyError(what); };
    const auto& p = s.params;

    std::vector<std::uint64_t> all;
    for (const auto& b : s.batch_files) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    if (all != s.files) fail("batches do not partition the file set");

    for (int k = 1; k <= p.K; ++k) {
        auto i = static_cast<std::size_t>(k - 1);
        std::vector<std::uint64_t> expect;
        for (std::size_t b = 0; b < s.omega.size(); ++b)
            if (s.omega[b].s.contains(k)) expect.insert(expect.end(), s.batch_files[b].begin(), s.batch_files[b].end());
        std::sort(expect.begin(), expect.end());
        if (expect != s.storage[i]) fail("placement rule violated at node " + std::to_string(k));

        const auto& own = s.compute_own[i];
        const auto& coded = s.compute_coded[i];
        std::vector<IvaId> both;
        std::set_intersection(own.begin(), own.end(), coded.begin(), coded.end(), std::back_inserter(both));
        if (!both.empty()) fail("C_k^1 and C_k^2 overlap at node " + std::to_string(k));

        for (const auto* set : {&own, &coded})
            for (const auto& v : *set)
                if (!std::binary_search(s.storage[i].begin(), s.storage[i].end(), v.file))
                    fail("node " + std::to_string(k) + " computes an IVA of unstored file " + std::to_string(v.file));

        if (s.kind == SchemeKind::d3c) {
            // |C_k^1| = rN/K and |C_k^2| = (1 - r/K) g N.
            if (Rational(static_cast<std::int64_t>(own.size())) != Rational(p.r) * Rational(static_cast<std::int64_t>(p.N)) / Rational(p.K))
                fail("|C_k^1| != rN/K at node " + std::to_string(k));
            if (Rational(static_cast<std::int64_t>(coded.size())) !=
                (Rational(1) - Rational(p.r, p.K)) * Rational(p.g) * Rational(static_cast<std::int64_t>(p.N)))
                fail("|C_k^2| != (1 - r/K) g N at node " + std::to_string(k));
        }
    }
}

inline nlohmann::json scheme_json(const BasicScheme& s) {
    using nlohmann::json;
    const auto& p = s.params;
    json batches = json::array();
    for (std::size_t b = 0; b < s.omega.size(); ++b)
        batches.push_back({{"S", s.omega[b].s.members()}, {"T", s.omega[b].t.members()}, {"files", s.batch_files[b]}});
    auto ivas = [](const std::vector<IvaId>& v) {
        json a = json::array();
        for (const auto& id : v) a.push_back({id.target, id.file});
        return a;
    };
    json nodes = json::array();
    for (int k = 1; k <= p.K; ++k) {
        auto i = static_cast<std::size_t>(k - 1);
        nodes.push_back({{"node", k},
                         {"storage", s.storage[i]},
                         {"compute_own", ivas(s.compute_own[i])},
                         {"compute_coded", ivas(s.compute_coded[i])}});
    }
    return {{"kind", to_string(s.kind)},
            {"params", {{"K", p.K}, {"N", p.N}, {"F", p.F}, {"T", p.T}, {"r", p.r}, {"g", p.g}}},
            {"storage_space", measure_storage(s).str()},
            {"computation_load", measure_computation(s).str()},
            {"batches", batches},
            {"nodes", nodes}};
}

} // namespace d3c
