#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "d3c/error.hpp"

namespace d3c {

/// Binomial coefficient C(n, k) with checked 64-bit arithmetic; 0 when k > n.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        // acc * (n - i) / (i + 1) is exact at every step: acc == C(n, i).
        acc = acc * (n - i) / (i + 1);
        if (acc > std::numeric_limits<std::uint64_t>::max())
            throw OverflowError("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

/// Checked a * b.
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    if (p > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("count multiplication overflows 64 bits");
    return static_cast<std::uint64_t>(p);
}

inline std::uint64_t lcm_checked(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    std::uint64_t x = a, y = b;
    while (y != 0) {
        std::uint64_t t = x % y;
        x = y;
        y = t;
    }
    return checked_mul(a / x, b);
}

/// A strictly increasing set of 1-based node ids.
class NodeSet {
public:
    NodeSet() = default;

    NodeSet(std::initializer_list<int> ids) : NodeSet(std::vector<int>(ids)) {}

    explicit NodeSet(std::vector<int> ids) : members_(std::move(ids)) {
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (members_[i] < 1) throw InvalidParameter("NodeSet: node ids are 1-based");
            if (i > 0 && members_[i] <= members_[i - 1])
                throw InvalidParameter("NodeSet: members must be strictly increasing");
        }
    }

    const std::vector<int>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }
    int operator[](std::size_t i) const noexcept { return members_[i]; }

    bool contains(int id) const noexcept { return std::binary_search(members_.begin(), members_.end(), id); }

    bool is_subset_of(const NodeSet& other) const noexcept {
        return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
    }

    NodeSet with(int id) const {
        if (contains(id)) return *this;
        NodeSet out = *this;
        out.members_.insert(std::upper_bound(out.members_.begin(), out.members_.end(), id), id);
        return out;
    }

    NodeSet without(int id) const {
        NodeSet out = *this;
        auto it = std::lower_bound(out.members_.begin(), out.members_.end(), id);
        if (it != out.members_.end() && *it == id) out.members_.erase(it);
        return out;
    }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(members_[i]);
        }
        return s + "}";
    }

    // Lexicographic over member lists.
    friend auto operator<=>(const NodeSet&, const NodeSet&) = default;

private:
    std::vector<int> members_;
};

/// A file batch (S, T): stored by every node in S, coded for by every node in T.
struct BatchIndex {
    NodeSet s;
    NodeSet t;

    friend auto operator<=>(const BatchIndex&, const BatchIndex&) = default;
};

/// A multicast group (I, J): members of J exchange signals serving nodes in I.
struct GroupIndex {
    NodeSet i;
    NodeSet j;

    friend auto operator<=>(const GroupIndex&, const GroupIndex&) = default;
};

/// All m-subsets of the given ground set, in lexicographic order.
inline std::vector<NodeSet> enum_subsets_of(const NodeSet& ground, std::size_t m) {
    std::vector<NodeSet> out;
    const std::size_t n = ground.size();
    if (m > n) return out;
    out.reserve(binomial(n, m));
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    std::vector<int> ids(m);
    while (true) {
        for (std::size_t i = 0; i < m; ++i) ids[i] = ground[idx[i]];
        out.emplace_back(ids);
        // Advance the rightmost index that still has room.
        std::size_t pos = m;
        while (pos > 0 && idx[pos - 1] == n - m + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < m; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

inline NodeSet full_set(int k) {
    std::vector<int> ids(static_cast<std::size_t>(std::max(k, 0)));
    for (int i = 0; i < k; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
    return NodeSet(std::move(ids));
}

/// All m-subsets of [K] in lexicographic order; empty when m > K.
inline std::vector<NodeSet> enum_subsets(int K, int m) {
    if (K < 0 || m < 0) throw InvalidParameter("enum_subsets: negative argument");
    return enum_subsets_of(full_set(K), static_cast<std::size_t>(m));
}

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidParameter(what);
}

inline void check_batch_params(int K, int r, int g) {
    require(g >= 1, "requires g >= 1 (got g=" + std::to_string(g) + ")");
    require(g <= r, "requires g <= r (got g=" + std::to_string(g) + ", r=" + std::to_string(r) + ")");
    require(r <= K, "requires r <= K (got r=" + std::to_string(r) + ", K=" + std::to_string(K) + ")");
}

} // namespace detail

/// The batch index set: every (S, T) with T ⊂ S ⊂ [K], |S| = r, |T| = g.
/// Ordered lexicographically by S, then by T.
inline std::vector<BatchIndex> enum_omega(int K, int r, int g) {
    detail::check_batch_params(K, r, g);
    std::vector<BatchIndex> out;
    out.reserve(checked_mul(binomial(K, r), binomial(r, g)));
    for (auto& s : enum_subsets(K, r))
        for (auto& t : enum_subsets_of(s, static_cast<std::size_t>(g))) out.push_back({s, t});
    return out;
}

/// The multicast group set: every (I, J) with J ⊂ I ⊂ [K], |I| = r + 1,
/// |J| = g + 1. Same ordering convention as enum_omega.
inline std::vector<GroupIndex> enum_pi(int K, int r, int g) {
    detail::check_batch_params(K, r, g);
    detail::require(r < K, "multicast groups require r < K (got r=" + std::to_string(r) + ", K=" + std::to_string(K) + ")");
    std::vector<GroupIndex> out;
    out.reserve(checked_mul(binomial(K, r + 1), binomial(r + 1, g + 1)));
    for (auto& i : enum_subsets(K, r + 1))
        for (auto& j : enum_subsets_of(i, static_cast<std::size_t>(g + 1))) out.push_back({i, j});
    return out;
}

/// Number of batches C(K,r)·C(r,g); also the smallest admissible N.
inline std::uint64_t batch_count(int K, int r, int g) {
    detail::check_batch_params(K, r, g);
    return checked_mul(binomial(K, r), binomial(r, g));
}

/// Files per batch, eta_g = N / (C(K,r)·C(r,g)).
inline std::uint64_t batch_size(std::uint64_t N, int K, int r, int g) {
    const std::uint64_t batches = batch_count(K, r, g);
    if (N == 0 || N % batches != 0)
        throw DivisibilityError("N=" + std::to_string(N) + " is not a positive multiple of C(K,r)*C(r,g)=" +
                                    std::to_string(batches) + "; smallest admissible N is " + std::to_string(batches),
                                batches);
    return N / batches;
}

} // namespace d3c
