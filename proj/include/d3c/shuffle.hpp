#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "d3c/audit.hpp"
#include "d3c/bits.hpp"
#include "d3c/combinatorics.hpp"
#include "d3c/error.hpp"
#include "d3c/scheme.hpp"
#include "json.hpp"

namespace d3c {

/// IVAs held by one node, keyed by (target, file).
class IvaStore {
public:
    void put(const IvaId& id, Bits value) { values_[key(id)] = std::move(value); }

    const Bits* find(const IvaId& id) const {
        auto it = values_.find(key(id));
        return it == values_.end() ? nullptr : &it->second;
    }

    const Bits& at(const IvaId& id) const {
        if (const Bits* v = find(id)) return *v;
        throw ConsistencyError("IVA v(" + std::to_string(id.target) + "," + std::to_string(id.file) + ") not in store");
    }

    std::size_t size() const noexcept { return values_.size(); }

private:
    static std::uint64_t key(const IvaId& id) noexcept {
        return (static_cast<std::uint64_t>(id.target) << 48) ^ id.file;
    }

    std::unordered_map<std::uint64_t, Bits> values_;
};

/// U_{target,S,T}: the concatenated IVAs of one batch for one target node,
/// in ascending file order.
struct IvaBlock {
    BatchIndex batch;
    int target = 0;
    Bits payload;
};

/// The piece of a block that node `owner` (a member of batch.t) transmits.
struct Segment {
    BatchIndex batch;
    int target = 0;
    int owner = 0;
    Bits payload;
};

struct MulticastSignal {
    int sender = 0;
    GroupIndex group;
    Bits payload;

    std::uint64_t bit_length() const noexcept { return payload.bit_length(); }
};

/// Splits a block into g equal bit runs, one per member of batch.t in
/// ascending id order.
inline std::vector<Segment> segment_block(const IvaBlock& block, int g) {
    if (g < 1) throw InvalidParameter("segment_block: g must be positive");
    if (block.batch.t.size() != static_cast<std::size_t>(g))
        throw InvalidParameter("segment_block: |T| must equal g");
    const std::uint64_t total = block.payload.bit_length();
    const auto g64 = static_cast<std::uint64_t>(g);
    if (total % g64 != 0)
        throw SegmentationError("block of " + std::to_string(total) + " bits does not split into " +
                                    std::to_string(g) + " equal segments; needs " +
                                    std::to_string(g64 - total % g64) + " padding bits",
                                g64 - total % g64);
    const std::uint64_t len = total / g64;
    std::vector<Segment> out;
    out.reserve(static_cast<std::size_t>(g));
    for (std::size_t idx = 0; idx < block.batch.t.size(); ++idx)
        out.push_back({block.batch, block.target, block.batch.t[idx], block.payload.slice(idx * len, len)});
    return out;
}

namespace detail {

inline std::string batch_label(const BatchIndex& b) { return "(" + b.s.str() + "," + b.t.str() + ")"; }
inline std::string group_label(const GroupIndex& g) { return "(" + g.i.str() + "," + g.j.str() + ")"; }

/// Rebuilds U_{target,batch} from a node's store.
inline IvaBlock assemble_block(const BasicScheme& scheme, const BatchIndex& batch, int target, const IvaStore& store) {
    IvaBlock block{batch, target, {}};
    for (auto n : scheme.files_of(batch)) block.payload.append(store.at({target, n}));
    return block;
}

/// The segment of U_{target,batch} owned by `owner`, taken from a node's store.
inline Bits owned_segment(const BasicScheme& scheme, const BatchIndex& batch, int target, int owner,
                          const IvaStore& store) {
    IvaBlock block = assemble_block(scheme, batch, target, store);
    const auto& t = batch.t.members();
    auto pos = static_cast<std::uint64_t>(std::lower_bound(t.begin(), t.end(), owner) - t.begin());
    if (pos == t.size() || t[pos] != owner) throw ConsistencyError("segment owner not in T");
    const std::uint64_t len = block.payload.bit_length() / t.size();
    return block.payload.slice(pos * len, len);
}

inline bool has_shuffle(const BasicScheme& s) { return s.params.r < s.params.K; }

} // namespace detail

/// X^k_{I,J} for every (I,J) ∈ Π and k ∈ J, ordered by group then sender.
/// stores[k-1] must hold what node k computed in the map phase.
inline std::vector<MulticastSignal> build_signals(const BasicScheme& scheme, const std::vector<IvaStore>& stores) {
    std::vector<MulticastSignal> out;
    if (!detail::has_shuffle(scheme)) return out;
    if (stores.size() != static_cast<std::size_t>(scheme.K()))
        throw InvalidParameter("build_signals: need one store per node");
    for (const auto& group : enum_pi(scheme.K(), scheme.params.r, scheme.params.g)) {
        for (int k : group.j) {
            const IvaStore& local = stores[static_cast<std::size_t>(k - 1)];
            Bits payload;
            bool first = true;
            for (int i : group.j) {
                if (i == k) continue;
                BatchIndex batch{group.i.without(i), group.j.without(i)};
                Bits seg;
                try {
                    seg = detail::owned_segment(scheme, batch, i, k, local);
                } catch (const ConsistencyError& e) {
                    throw ConsistencyError("node " + std::to_string(k) + " lacks an operand for signal " +
                                           detail::group_label(group) + ": " + e.what());
                }
                if (first) {
                    payload = std::move(seg);
                    first = false;
                } else {
                    payload ^= seg;
                }
            }
            out.push_back({k, group, std::move(payload)});
        }
    }
    return out;
}

/// The broadcast medium after one synchronous round. Every signal is
/// delivered to every node other than its sender unless withheld.
class SignalBoard {
public:
    SignalBoard() = default;

    SignalBoard(std::vector<MulticastSignal> signals, int K) : signals_(std::move(signals)), K_(K) {
        delivered_.assign(signals_.size(), std::vector<bool>(static_cast<std::size_t>(K), true));
        for (std::size_t s = 0; s < signals_.size(); ++s) {
            index_.emplace(std::make_pair(signals_[s].sender, signals_[s].group), s);
            delivered_[s][static_cast<std::size_t>(signals_[s].sender - 1)] = false;
        }
    }

    const std::vector<MulticastSignal>& signals() const noexcept { return signals_; }

    /// Drops one delivery (failure injection for tests).
    void withhold(int sender, const GroupIndex& group, int node) {
        auto it = index_.find({sender, group});
        if (it != index_.end()) delivered_[it->second][static_cast<std::size_t>(node - 1)] = false;
    }

    const MulticastSignal* lookup(int sender, const GroupIndex& group, int node) const {
        auto it = index_.find({sender, group});
        if (it == index_.end()) return nullptr;
        if (!delivered_[it->second][static_cast<std::size_t>(node - 1)]) return nullptr;
        return &signals_[it->second];
    }

    std::uint64_t received_count(int node) const {
        std::uint64_t n = 0;
        for (const auto& d : delivered_) n += d[static_cast<std::size_t>(node - 1)];
        return n;
    }

    std::uint64_t sent_count(int node) const {
        return static_cast<std::uint64_t>(
            std::count_if(signals_.begin(), signals_.end(), [&](const auto& s) { return s.sender == node; }));
    }

    int K() const noexcept { return K_; }

private:
    std::vector<MulticastSignal> signals_;
    int K_ = 0;
    std::map<std::pair<int, GroupIndex>, std::size_t> index_;
    std::vector<std::vector<bool>> delivered_;
};

/// A node's read-only view of the signals delivered to it.
class Inbox {
public:
    Inbox(const SignalBoard& board, int node, AccessLog* log = nullptr) : board_(&board), node_(node), log_(log) {}

    const MulticastSignal* receive(int sender, const GroupIndex& group) const {
        const MulticastSignal* sig = board_->lookup(sender, group, node_);
        if (log_) log_->note(node_, AccessLog::Kind::signal, "X" + std::to_string(sender) + detail::group_label(group), sig != nullptr);
        return sig;
    }

    int node() const noexcept { return node_; }

private:
    const SignalBoard* board_;
    int node_;
    AccessLog* log_;
};

struct ShuffleResult {
    SignalBoard board;
    std::uint64_t total_bits = 0;    ///< payload bits only
    std::uint64_t overhead_bits = 0; ///< sender id + group index per signal, excluded from L
};

namespace detail {

inline std::uint64_t bits_for(std::uint64_t count) {
    std::uint64_t b = 0;
    while ((std::uint64_t{1} << b) < count) ++b;
    return b;
}

} // namespace detail

inline ShuffleResult run_shuffle(const BasicScheme& scheme, const std::vector<IvaStore>& stores) {
    auto signals = build_signals(scheme, stores);
    ShuffleResult res;
    for (const auto& s : signals) res.total_bits += s.bit_length();
    if (!signals.empty()) {
        const std::uint64_t groups = checked_mul(binomial(scheme.K(), scheme.params.r + 1),
                                                 binomial(scheme.params.r + 1, scheme.params.g + 1));
        res.overhead_bits = signals.size() * (detail::bits_for(static_cast<std::uint64_t>(scheme.K())) + detail::bits_for(groups));
    }
    res.board = SignalBoard(std::move(signals), scheme.K());
    return res;
}

/// Recovers v_{k,n} for every file of the scheme, in scheme.files order:
/// own IVAs come from the local store, missing ones from
/// X^j_{S∪{k},T∪{k}} XOR the locally computable segments.
inline std::vector<Bits> decode_node(int k, const BasicScheme& scheme, const IvaStore& computed, const Inbox& inbox) {
    const auto& p = scheme.params;
    std::map<std::uint64_t, Bits> values;
    for (auto n : scheme.storage[static_cast<std::size_t>(k - 1)]) {
        const Bits* v = computed.find({k, n});
        if (!v) throw DecodeError("node " + std::to_string(k) + " did not compute its own IVA of file " + std::to_string(n));
        values.emplace(n, *v);
    }

    for (std::size_t b = 0; b < scheme.omega.size(); ++b) {
        const auto& batch = scheme.omega[b];
        if (batch.s.contains(k)) continue;
        const GroupIndex group{batch.s.with(k), batch.t.with(k)};
        Bits block;
        for (int j : batch.t) {
            const MulticastSignal* sig = inbox.receive(j, group);
            if (!sig)
                throw DecodeError("node " + std::to_string(k) + ": signal from node " + std::to_string(j) +
                                  " for batch " + detail::batch_label(batch) + " not delivered");
            Bits seg = sig->payload;
            for (int i : batch.t) {
                if (i == j) continue;
                BatchIndex side{group.i.without(i), group.j.without(i)};
                try {
                    seg ^= detail::owned_segment(scheme, side, i, j, computed);
                } catch (const ConsistencyError&) {
                    throw DecodeError("node " + std::to_string(k) + ": missing side information for batch " +
                                      detail::batch_label(batch) + ", j=" + std::to_string(j));
                }
            }
            block.append(seg);
        }
        const auto& files = scheme.batch_files[b];
        for (std::size_t f = 0; f < files.size(); ++f) values.emplace(files[f], block.slice(f * p.T, p.T));
    }

    std::vector<Bits> out;
    out.reserve(scheme.files.size());
    for (auto n : scheme.files) {
        auto it = values.find(n);
        if (it == values.end()) throw DecodeError("node " + std::to_string(k) + " has no value for file " + std::to_string(n));
        out.push_back(std::move(it->second));
    }
    return out;
}

/// One JSON object per signal, one per line.
inline void write_trace(const SignalBoard& board, std::ostream& os) {
    for (const auto& s : board.signals()) {
        nlohmann::json rec{{"sender", s.sender},
                           {"group_i", s.group.i.members()},
                           {"group_j", s.group.j.members()},
                           {"bit_length", s.bit_length()},
                           {"payload_digest", hashing::digest_hex(s.payload)}};
        os << rec.dump() << '\n';
    }
}

} // namespace d3c
