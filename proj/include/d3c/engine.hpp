#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "d3c/analytics.hpp"
#include "d3c/audit.hpp"
#include "d3c/bits.hpp"
#include "d3c/composer.hpp"
#include "d3c/error.hpp"
#include "d3c/rational.hpp"
#include "d3c/scheme.hpp"
#include "d3c/shuffle.hpp"
#include "json.hpp"

namespace d3c {

struct Corpus {
    std::vector<std::vector<std::uint8_t>> files; ///< file n at index n - 1
    std::uint64_t F = 0;
    std::uint64_t seed = 0;

    std::uint64_t N() const noexcept { return files.size(); }
    std::span<const std::uint8_t> file(std::uint64_t n) const { return files.at(n - 1); }
};

/// Pseudorandom byte-aligned files; identical arguments give identical corpora.
inline Corpus generate_corpus(std::uint64_t N, std::uint64_t F, std::uint64_t seed) {
    if (F == 0 || F % 8 != 0) throw InvalidParameter("file size F must be a positive multiple of 8 bits (got " + std::to_string(F) + ")");
    Corpus c{{}, F, seed};
    std::mt19937_64 rng(seed);
    c.files.resize(N);
    for (auto& f : c.files) {
        f.resize(F / 8);
        for (std::size_t i = 0; i < f.size(); i += 8) {
            std::uint64_t w = rng();
            for (std::size_t b = 0; b < 8 && i + b < f.size(); ++b) f[i + b] = static_cast<std::uint8_t>(w >> (8 * b));
        }
    }
    return c;
}

/// Map and reduce functions. map_fn(k, n, w_n) yields v_{k,n} (T bits);
/// reduce_fn(k, [v_{k,1}..v_{k,N}]) yields u_k (B bits).
struct FunctionSuite {
    std::function<Bits(int, std::uint64_t, std::span<const std::uint8_t>)> map_fn;
    std::function<Bits(int, std::span<const Bits>)> reduce_fn;
    std::uint64_t T = 0;
    std::uint64_t B = 0;
};

inline FunctionSuite default_suite(std::uint64_t T, std::uint64_t B) {
    if (T == 0 || B == 0) throw InvalidParameter("T and B must be positive");
    FunctionSuite s;
    s.T = T;
    s.B = B;
    s.map_fn = [T](int k, std::uint64_t n, std::span<const std::uint8_t> bytes) {
        return hashing::Digest(0x6d6170).absorb(static_cast<std::uint64_t>(k)).absorb(n).absorb(bytes).expand(T);
    };
    s.reduce_fn = [B](int k, std::span<const Bits> ivas) {
        hashing::Digest d(0x726564);
        d.absorb(static_cast<std::uint64_t>(k));
        for (const auto& v : ivas) d.absorb(v);
        return d.expand(B);
    };
    return s;
}

/// Centralized ground truth: all NK IVAs, then every u_k.
inline std::vector<Bits> oracle(const Corpus& corpus, const FunctionSuite& suite, int K) {
    std::vector<Bits> out;
    out.reserve(static_cast<std::size_t>(K));
    std::vector<Bits> ivas(corpus.N());
    for (int k = 1; k <= K; ++k) {
        for (std::uint64_t n = 1; n <= corpus.N(); ++n) ivas[n - 1] = suite.map_fn(k, n, corpus.file(n));
        out.push_back(suite.reduce_fn(k, ivas));
    }
    return out;
}

/// A simulated node's access to the corpus: only files in its storage set.
class NodeContext {
public:
    NodeContext(int id, const Corpus& corpus, std::span<const std::uint64_t> stored, AccessLog& log)
        : id_(id), corpus_(&corpus), stored_(stored), log_(&log) {}

    std::span<const std::uint8_t> read_file(std::uint64_t n) const {
        const bool ok = std::binary_search(stored_.begin(), stored_.end(), n);
        log_->note(id_, AccessLog::Kind::file, "w" + std::to_string(n), ok);
        if (!ok) throw AccessViolation("node " + std::to_string(id_) + " read file " + std::to_string(n) + " outside its storage");
        return corpus_->file(n);
    }

    int id() const noexcept { return id_; }

private:
    int id_;
    const Corpus* corpus_;
    std::span<const std::uint64_t> stored_;
    AccessLog* log_;
};

struct NodeStats {
    std::uint64_t stored_files = 0;
    std::uint64_t map_evaluations = 0;
    std::uint64_t signals_sent = 0;
    std::uint64_t signals_received = 0;
    std::uint64_t bits_sent = 0;
};

struct ExecutionReport {
    std::string label;
    int K = 0;
    std::uint64_t N = 0;
    std::uint64_t T = 0;
    LoadReport measured;
    LoadReport predicted;
    std::vector<NodeStats> per_node;
    std::vector<Bits> outputs;
    bool verified = false;
    std::string first_mismatch;
    std::uint64_t total_bits = 0;
    std::uint64_t overhead_bits = 0;
    std::uint64_t map_evaluations = 0;
    std::uint64_t signal_count = 0;
    bool audit_enabled = false;
    std::uint64_t audited_file_reads = 0;
    std::uint64_t audited_signal_reads = 0;
    std::uint64_t access_violations = 0;
};

struct ExecuteOptions {
    bool audit = false;
    std::ostream* trace = nullptr; ///< JSON-lines signal trace
};

namespace detail {

inline LoadReport predicted_for(const BasicScheme& s) {
    const auto& p = s.params;
    if (s.kind == SchemeKind::cdc)
        return {Rational(p.r), Rational(p.r), p.r == p.K ? Rational(0) : basic_load(p.K, p.r, p.r)};
    return {Rational(p.r), basic_computation(p.K, p.r, p.g), basic_load(p.K, p.r, p.g)};
}

inline ExecutionReport run_groups(const std::vector<BasicScheme>& schemes, const LoadReport& predicted, const Corpus& corpus,
                                  const FunctionSuite& suite, const ExecuteOptions& opts, std::string label) {
    if (schemes.empty()) throw InvalidParameter("nothing to execute");
    const int K = schemes.front().K();
    const std::uint64_t N = corpus.N();

    std::uint64_t covered = 0;
    for (const auto& s : schemes) {
        if (s.K() != K) throw InvalidParameter("all groups must share K");
        if (s.params.T != suite.T) throw InvalidParameter("scheme T=" + std::to_string(s.params.T) + " differs from suite T=" + std::to_string(suite.T));
        if (s.params.F != corpus.F) throw InvalidParameter("scheme F differs from corpus F");
        covered += s.files.size();
        for (auto n : s.files)
            if (n > N) throw InvalidParameter("scheme references file " + std::to_string(n) + " beyond corpus size");
    }
    if (covered != N) throw InvalidParameter("plan covers " + std::to_string(covered) + " files, corpus has " + std::to_string(N));

    ExecutionReport rep;
    rep.label = std::move(label);
    rep.K = K;
    rep.N = N;
    rep.T = suite.T;
    rep.predicted = predicted;
    rep.per_node.resize(static_cast<std::size_t>(K));
    rep.audit_enabled = opts.audit;
    AccessLog log(opts.audit);

    // Each node's collected V_k, indexed by file id - 1.
    std::vector<std::vector<Bits>> collected(static_cast<std::size_t>(K), std::vector<Bits>(N));

    for (const auto& scheme : schemes) {
        // Map phase: exactly C_k^1 ∪ C_k^2, reading only M_k.
        std::vector<IvaStore> stores(static_cast<std::size_t>(K));
        for (int k = 1; k <= K; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            NodeContext node(k, corpus, scheme.storage[i], log);
            std::uint64_t evaluations = 0;
            for (const auto* plan : {&scheme.compute_own[i], &scheme.compute_coded[i]}) {
                for (const auto& iva : *plan) {
                    Bits v = suite.map_fn(iva.target, iva.file, node.read_file(iva.file));
                    ++evaluations;
                    if (v.bit_length() != suite.T) throw ConsistencyError("map_fn returned a value that is not T bits");
                    stores[i].put(iva, std::move(v));
                }
            }
            if (evaluations != scheme.computed_count(k))
                throw ConsistencyError("node " + std::to_string(k) + " map evaluations differ from its compute plan");
            rep.per_node[i].stored_files += scheme.storage[i].size();
            rep.per_node[i].map_evaluations += evaluations;
            rep.map_evaluations += evaluations;
        }

        // Shuffle phase: one synchronous lossless broadcast round.
        ShuffleResult shuffled = run_shuffle(scheme, stores);
        rep.total_bits += shuffled.total_bits;
        rep.overhead_bits += shuffled.overhead_bits;
        rep.signal_count += shuffled.board.signals().size();
        if (opts.trace) write_trace(shuffled.board, *opts.trace);
        for (const auto& sig : shuffled.board.signals()) rep.per_node[static_cast<std::size_t>(sig.sender - 1)].bits_sent += sig.bit_length();

        // Reduce phase, part one: decode the missing IVAs.
        for (int k = 1; k <= K; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            rep.per_node[i].signals_sent += shuffled.board.sent_count(k);
            rep.per_node[i].signals_received += shuffled.board.received_count(k);
            Inbox inbox(shuffled.board, k, &log);
            auto values = decode_node(k, scheme, stores[i], inbox);
            for (std::size_t f = 0; f < scheme.files.size(); ++f) collected[i][scheme.files[f] - 1] = std::move(values[f]);
        }
    }

    // Reduce phase, part two: u_k = h_k(v_{k,1}, ..., v_{k,N}).
    for (int k = 1; k <= K; ++k) {
        const auto& vk = collected[static_cast<std::size_t>(k - 1)];
        for (std::uint64_t n = 1; n <= N; ++n)
            if (vk[n - 1].bit_length() != suite.T)
                throw DecodeError("node " + std::to_string(k) + " ended without v(" + std::to_string(k) + "," + std::to_string(n) + ")");
        rep.outputs.push_back(suite.reduce_fn(k, vk));
    }

    std::uint64_t stored = 0;
    for (const auto& ns : rep.per_node) stored += ns.stored_files;
    const auto n64 = static_cast<std::int64_t>(N);
    rep.measured.storage_space = Rational(static_cast<std::int64_t>(stored), n64);
    rep.measured.computation_load = Rational(static_cast<std::int64_t>(rep.map_evaluations), n64 * K);
    rep.measured.communication_load =
        Rational(static_cast<std::int64_t>(rep.total_bits), static_cast<std::int64_t>(checked_mul(checked_mul(N, static_cast<std::uint64_t>(K)), suite.T)));
    if (rep.measured != predicted)
        throw ConsistencyError("measured loads (" + rep.measured.storage_space.str() + ", " + rep.measured.computation_load.str() + ", " +
                               rep.measured.communication_load.str() + ") differ from plan prediction (" + predicted.storage_space.str() +
                               ", " + predicted.computation_load.str() + ", " + predicted.communication_load.str() + ")");

    const auto truth = oracle(corpus, suite, K);
    rep.verified = true;
    for (int k = 1; k <= K; ++k) {
        if (rep.outputs[static_cast<std::size_t>(k - 1)] != truth[static_cast<std::size_t>(k - 1)]) {
            rep.verified = false;
            rep.first_mismatch = "u_" + std::to_string(k);
            break;
        }
    }

    rep.access_violations = log.violations();
    rep.audited_file_reads = log.count(AccessLog::Kind::file);
    rep.audited_signal_reads = log.count(AccessLog::Kind::signal);
    return rep;
}

} // namespace detail

inline ExecutionReport execute(const BasicScheme& scheme, const Corpus& corpus, const FunctionSuite& suite,
                               const ExecuteOptions& opts = {}) {
    const auto& p = scheme.params;
    std::string label = std::string(to_string(scheme.kind)) + "(K=" + std::to_string(p.K) + ",r=" + std::to_string(p.r) +
                        (scheme.kind == SchemeKind::d3c ? ",g=" + std::to_string(p.g) : "") + ")";
    return detail::run_groups({scheme}, detail::predicted_for(scheme), corpus, suite, opts, std::move(label));
}

inline ExecutionReport execute(const CompositePlan& plan, const Corpus& corpus, const FunctionSuite& suite,
                               const ExecuteOptions& opts = {}) {
    if (corpus.N() != plan.N) throw InvalidParameter("corpus size " + std::to_string(corpus.N()) + " differs from plan N=" + std::to_string(plan.N));
    auto schemes = group_schemes(plan, corpus.F, suite.T);
    const LoadReport pred = predict_loads(plan.K, plan.groups);
    return detail::run_groups(schemes, pred, corpus, suite, opts,
                              std::string("plan(K=") + std::to_string(plan.K) + ",r=" + plan.target_r.str() + ",c=" + plan.target_c.str() +
                                  "," + to_string(plan.route) + ")");
}

inline nlohmann::json loads_json(const LoadReport& l) {
    return {{"storage_space", l.storage_space.str()},
            {"computation_load", l.computation_load.str()},
            {"communication_load", l.communication_load.str()},
            {"storage_space_value", l.storage_space.to_double()},
            {"computation_load_value", l.computation_load.to_double()},
            {"communication_load_value", l.communication_load.to_double()}};
}

inline nlohmann::json report_json(const ExecutionReport& rep) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.per_node.size(); ++i) {
        const auto& n = rep.per_node[i];
        nodes.push_back({{"node", i + 1},
                         {"stored_files", n.stored_files},
                         {"map_evaluations", n.map_evaluations},
                         {"signals_sent", n.signals_sent},
                         {"signals_received", n.signals_received},
                         {"bits_sent", n.bits_sent}});
    }
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& u : rep.outputs) outputs.push_back(u.hex());
    nlohmann::json j{{"label", rep.label},
                     {"K", rep.K},
                     {"N", rep.N},
                     {"T", rep.T},
                     {"measured", loads_json(rep.measured)},
                     {"predicted", loads_json(rep.predicted)},
                     {"per_node", nodes},
                     {"outputs", outputs},
                     {"verification", {{"passed", rep.verified}, {"first_mismatch", rep.first_mismatch}}},
                     {"total_bits", rep.total_bits},
                     {"overhead_bits", rep.overhead_bits},
                     {"signal_count", rep.signal_count},
                     {"map_evaluations", rep.map_evaluations}};
    if (rep.audit_enabled)
        j["audit"] = {{"file_reads", rep.audited_file_reads},
                      {"signal_reads", rep.audited_signal_reads},
                      {"violations", rep.access_violations}};
    return j;
}

struct SchemeConfig {
    std::string name;
    SchemeKind kind = SchemeKind::d3c;
    int r = 1;
    int g = 1; ///< ignored for CDC
};

struct ComparisonRow {
    std::string name;
    Rational r;
    Rational c;
    Rational L;
    Rational predicted_c;
    Rational predicted_L;
    bool verified = false;
};

/// Executes every config on one shared corpus. T = 0 picks a T that suits
/// every config.
inline std::vector<ComparisonRow> compare_schemes(const std::vector<SchemeConfig>& configs, int K, std::uint64_t N,
                                                  std::uint64_t F, std::uint64_t T, std::uint64_t B, std::uint64_t seed) {
    if (T == 0) {
        int max_g = 1;
        for (const auto& cfg : configs) max_g = std::max(max_g, cfg.kind == SchemeKind::cdc ? cfg.r : cfg.g);
        T = default_iva_bits(max_g);
    }
    const Corpus corpus = generate_corpus(N, F, seed);
    const FunctionSuite suite = default_suite(T, B == 0 ? T : B);
    std::vector<ComparisonRow> rows;
    for (const auto& cfg : configs) {
        BasicScheme s = cfg.kind == SchemeKind::cdc ? build_cdc_scheme(K, N, cfg.r, F, T)
                                                    : build_basic_scheme(SchemeParams{K, N, F, T, cfg.r, cfg.g});
        auto rep = execute(s, corpus, suite);
        rows.push_back({cfg.name, rep.measured.storage_space, rep.measured.computation_load, rep.measured.communication_load,
                        rep.predicted.computation_load, rep.predicted.communication_load, rep.verified});
    }
    return rows;
}

inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string out = "name,r,c,L,predicted_c,predicted_L,c_exact,L_exact,verified\n";
    for (const auto& row : rows)
        out += row.name + "," + format_decimal(row.r) + "," + format_decimal(row.c) + "," + format_decimal(row.L) + "," +
               format_decimal(row.predicted_c) + "," + format_decimal(row.predicted_L) + "," + row.c.str() + "," + row.L.str() + "," +
               (row.verified ? "pass" : "fail") + "\n";
    return out;
}

inline nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows)
        out.push_back({{"name", row.name},
                       {"r", row.r.str()},
                       {"c", row.c.str()},
                       {"L", row.L.str()},
                       {"predicted_c", row.predicted_c.str()},
                       {"predicted_L", row.predicted_L.str()},
                       {"verified", row.verified}});
    return out;
}

} // namespace d3c
