#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "d3c/d3c.hpp"
#include "json.hpp"

namespace d3c::cli {

enum ExitCode : int { ok = 0, usage = 1, infeasible = 2, verification_failed = 3 };

struct RunConfig {
    std::string command;
    int K = 0;
    std::uint64_t N = 0; ///< 0 = minimal admissible
    std::optional<std::string> r;
    std::vector<std::string> r_grid;
    std::optional<std::string> c;
    std::optional<std::string> g;
    std::uint64_t F = 64;
    std::uint64_t T = 0; ///< 0 = 8 * lcm(1..max g)
    std::uint64_t B = 0; ///< 0 = T
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string format = "csv";
    bool execute = false;
    bool cdc = false;
    bool cstar_sweep = false;
    bool audit = false;
    std::string trace;
    int resolution = 0;
    std::string step = "0.05";
    std::uint64_t max_n = 100000;
};

/// Raised for bad flag combinations (exit code 1).
class UsageError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty() || cfg.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + cfg.out + "'");
    f << text;
}

inline Rational require_r(const RunConfig& cfg) {
    if (!cfg.r) throw UsageError("--r is required");
    return parse_rational(*cfg.r);
}

inline int require_integer(const Rational& q, const char* name) {
    if (!q.is_integer()) throw UsageError(std::string(name) + " must be an integer here (got " + q.str() + ")");
    return static_cast<int>(q.floor());
}

inline void check_format(const RunConfig& cfg) {
    if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
}

inline std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

} // namespace detail

inline int cmd_tradeoff(const RunConfig& cfg) {
    detail::check_format(cfg);
    if (cfg.cstar_sweep) {
        auto rows = cstar_sweep(cfg.K, parse_rational(cfg.step));
        if (cfg.format == "json") {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& row : rows)
                j.push_back({{"r", row.r.str()}, {"c_star", row.c_star.str()}, {"r_value", row.r.to_double()},
                             {"c_star_value", row.c_star.to_double()}});
            detail::emit(cfg, detail::json_text(j));
        } else {
            detail::emit(cfg, cstar_csv(rows));
        }
        return ok;
    }
    const TradeoffCurve curve = build_curve(cfg.K, detail::require_r(cfg), cfg.resolution);
    detail::emit(cfg, cfg.format == "json" ? detail::json_text(curve_json(curve)) : curve_csv(curve));
    return ok;
}

inline std::string report_csv(const ExecutionReport& rep) {
    const auto& m = rep.measured;
    return "label,K,N,T,r,c,L,r_exact,c_exact,L_exact,total_bits,overhead_bits,verified\n" + rep.label + "," +
           std::to_string(rep.K) + "," + std::to_string(rep.N) + "," + std::to_string(rep.T) + "," +
           format_decimal(m.storage_space) + "," + format_decimal(m.computation_load) + "," +
           format_decimal(m.communication_load) + "," + m.storage_space.str() + "," + m.computation_load.str() + "," +
           m.communication_load.str() + "," + std::to_string(rep.total_bits) + "," + std::to_string(rep.overhead_bits) +
           "," + (rep.verified ? "pass" : "fail") + "\n";
}

inline int cmd_simulate(const RunConfig& cfg) {
    detail::check_format(cfg);
    const Rational r = detail::require_r(cfg);
    if (cfg.c && cfg.g) throw UsageError("give exactly one of --c or --g");

    ExecuteOptions opts;
    opts.audit = cfg.audit;
    std::ofstream trace;
    if (!cfg.trace.empty()) {
        trace.open(cfg.trace, std::ios::binary);
        if (!trace) throw UsageError("cannot open trace file '" + cfg.trace + "'");
        opts.trace = &trace;
    }

    ExecutionReport rep;
    nlohmann::json plan_info;
    if (cfg.cdc || cfg.g) {
        const int ri = detail::require_integer(r, "--r");
        int gi = ri;
        if (cfg.cdc) {
            if (cfg.g) throw UsageError("--cdc takes no --g");
            if (cfg.c && parse_rational(*cfg.c) != r) throw UsageError("the CDC baseline has c = r");
        } else {
            gi = detail::require_integer(parse_rational(*cfg.g), "--g");
        }
        const std::uint64_t T = cfg.T ? cfg.T : default_iva_bits(gi);
        const std::uint64_t N = cfg.N ? cfg.N : batch_count(cfg.K, ri, gi);
        BasicScheme s = cfg.cdc ? build_cdc_scheme(cfg.K, N, ri, cfg.F, T) : build_basic_scheme({cfg.K, N, cfg.F, T, ri, gi});
        rep = execute(s, generate_corpus(N, cfg.F, cfg.seed), default_suite(T, cfg.B ? cfg.B : T), opts);
    } else {
        if (!cfg.c) throw UsageError("give exactly one of --c or --g (or --cdc)");
        const CompositePlan plan = plan_for_target(cfg.K, cfg.N, r, parse_rational(*cfg.c));
        const std::uint64_t T = cfg.T ? cfg.T : default_iva_bits(plan);
        rep = execute(plan, generate_corpus(plan.N, cfg.F, cfg.seed), default_suite(T, cfg.B ? cfg.B : T), opts);
        plan_info = plan_json(plan, false);
    }

    if (cfg.format == "json") {
        auto j = report_json(rep);
        if (!plan_info.is_null()) j["plan"] = plan_info;
        detail::emit(cfg, detail::json_text(j));
    } else {
        detail::emit(cfg, report_csv(rep));
    }
    if (!rep.verified) {
        std::cerr << "verification failed: " << rep.first_mismatch << "\n";
        return verification_failed;
    }
    if (rep.access_violations != 0) {
        std::cerr << "audit recorded " << rep.access_violations << " access violations\n";
        return verification_failed;
    }
    return ok;
}

inline int cmd_compare(const RunConfig& cfg) {
    detail::check_format(cfg);
    const int r = detail::require_integer(detail::require_r(cfg), "--r");
    std::vector<SchemeConfig> configs;
    std::uint64_t N = 1;
    for (int g = 1; g <= r; ++g) {
        configs.push_back({"d3c_g" + std::to_string(g), SchemeKind::d3c, r, g});
        N = lcm_checked(N, batch_count(cfg.K, r, g));
    }
    configs.push_back({"cdc", SchemeKind::cdc, r, r});
    if (cfg.N) {
        if (cfg.N % N != 0)
            throw DivisibilityError("compare needs N to be a multiple of " + std::to_string(N), N);
        N = cfg.N;
    }
    auto rows = compare_schemes(configs, cfg.K, N, cfg.F, cfg.T, cfg.B, cfg.seed);
    detail::emit(cfg, cfg.format == "json" ? detail::json_text(comparison_json(rows)) : comparison_csv(rows));
    for (const auto& row : rows)
        if (!row.verified) return verification_failed;
    return ok;
}

struct VerifyRow {
    int K, r, g;
    std::uint64_t N;
    Rational c, L;
    bool decodable, exact_c, exact_L;
    bool passed() const { return decodable && exact_c && exact_L; }
};

/// Every integer (K, r, g) with 2 <= K <= max_K, 1 <= r < K, 1 <= g <= r at
/// minimal N: decodability and exact loads.
inline std::vector<VerifyRow> verify_sweep(int max_K, std::uint64_t seed, std::uint64_t F = 64) {
    if (max_K < 2) throw UsageError("verify needs --K >= 2");
    std::vector<VerifyRow> rows;
    for (int K = 2; K <= max_K; ++K) {
        for (int r = 1; r < K; ++r) {
            for (int g = 1; g <= r; ++g) {
                const std::uint64_t N = batch_count(K, r, g);
                const std::uint64_t T = default_iva_bits(g);
                VerifyRow row{K, r, g, N, {}, {}, false, false, false};
                try {
                    auto rep = execute(build_basic_scheme({K, N, F, T, r, g}), generate_corpus(N, F, seed), default_suite(T, T));
                    row.c = rep.measured.computation_load;
                    row.L = rep.measured.communication_load;
                    const Rational frac(r, K);
                    row.decodable = rep.verified;
                    row.exact_c = row.c == frac + (Rational(1) - frac) * Rational(g);
                    row.exact_L = row.L == (Rational(1) - frac) * (Rational(1) - frac) / (row.c - frac);
                } catch (const Error&) {
                    // leave the row failed
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

inline int cmd_verify(const RunConfig& cfg) {
    detail::check_format(cfg);
    auto rows = verify_sweep(cfg.K, cfg.seed, cfg.F);
    std::string csv = "K,r,g,N,c,L,decodable,exact_c,exact_L,status\n";
    nlohmann::json j = nlohmann::json::array();
    int failures = 0;
    for (const auto& row : rows) {
        csv += std::to_string(row.K) + "," + std::to_string(row.r) + "," + std::to_string(row.g) + "," + std::to_string(row.N) +
               "," + row.c.str() + "," + row.L.str() + "," + (row.decodable ? "1" : "0") + "," + (row.exact_c ? "1" : "0") +
               "," + (row.exact_L ? "1" : "0") + "," + (row.passed() ? "pass" : "fail") + "\n";
        j.push_back({{"K", row.K}, {"r", row.r}, {"g", row.g}, {"N", row.N}, {"c", row.c.str()}, {"L", row.L.str()},
                     {"passed", row.passed()}});
        if (!row.passed()) {
            ++failures;
            std::cerr << "FAILED (K=" << row.K << ", r=" << row.r << ", g=" << row.g << ")\n";
        }
    }
    detail::emit(cfg, cfg.format == "json" ? detail::json_text(j) : csv);
    return failures == 0 ? ok : verification_failed;
}

inline int cmd_sweep(const RunConfig& cfg) {
    detail::check_format(cfg);
    std::vector<std::string> grid = cfg.r_grid;
    if (grid.empty() && cfg.r) grid.push_back(*cfg.r);
    if (grid.empty()) throw UsageError("sweep needs at least one --r value");
    const int points = cfg.resolution > 0 ? cfg.resolution : 20;

    std::string csv = "r,c,route,envelope_L,plan_L,measured_L,N\n";
    nlohmann::json j = nlohmann::json::array();
    int mismatches = 0;
    for (const auto& rtext : grid) {
        const Rational r = parse_rational(rtext);
        const TradeoffCurve curve = build_curve(cfg.K, r);
        for (int i = 0; i < points; ++i) {
            const Rational c = points == 1 ? Rational(1) : Rational(1) + (r - Rational(1)) * Rational(i, points - 1);
            const CompositePlan plan = plan_for_target(cfg.K, 0, r, c);
            const Rational envelope_L = query_load(curve, c);
            std::string measured;
            std::string n_text;
            if (cfg.execute && plan.minimal_n <= cfg.max_n) {
                const std::uint64_t T = cfg.T ? cfg.T : default_iva_bits(plan);
                auto rep = execute(plan, generate_corpus(plan.N, cfg.F, cfg.seed), default_suite(T, cfg.B ? cfg.B : T));
                measured = format_decimal(rep.measured.communication_load);
                n_text = std::to_string(plan.N);
                if (!rep.verified || rep.measured.communication_load != plan.predicted_L) ++mismatches;
            }
            csv += format_decimal(r) + "," + format_decimal(c) + "," + to_string(plan.route) + "," + format_decimal(envelope_L) +
                   "," + format_decimal(plan.predicted_L) + "," + measured + "," + n_text + "\n";
            nlohmann::json row{{"r", r.str()}, {"c", c.str()}, {"route", to_string(plan.route)}, {"envelope_L", envelope_L.str()},
                               {"plan_L", plan.predicted_L.str()}, {"minimal_N", plan.minimal_n}};
            if (!measured.empty()) row["measured_L"] = measured;
            j.push_back(std::move(row));
        }
    }
    detail::emit(cfg, cfg.format == "json" ? detail::json_text(j) : csv);
    return mismatches == 0 ? ok : verification_failed;
}

inline int cmd_inspect(const RunConfig& cfg) {
    const Rational r = detail::require_r(cfg);
    if (cfg.c && !cfg.cdc) {
        const CompositePlan plan = plan_for_target(cfg.K, cfg.N, r, parse_rational(*cfg.c));
        detail::emit(cfg, detail::json_text(plan_json(plan)));
        return ok;
    }
    const int ri = detail::require_integer(r, "--r");
    const int gi = cfg.cdc ? ri : detail::require_integer(parse_rational(cfg.g.value_or("1")), "--g");
    const std::uint64_t T = cfg.T ? cfg.T : default_iva_bits(gi);
    const std::uint64_t N = cfg.N ? cfg.N : batch_count(cfg.K, ri, gi);
    BasicScheme s = cfg.cdc ? build_cdc_scheme(cfg.K, N, ri, cfg.F, T) : build_basic_scheme({cfg.K, N, cfg.F, T, ri, gi});
    detail::emit(cfg, detail::json_text(scheme_json(s)));
    return ok;
}

/// Dispatches and maps errors onto the exit-code contract.
inline int run(const RunConfig& cfg) {
    try {
        if (cfg.command == "tradeoff") return cmd_tradeoff(cfg);
        if (cfg.command == "simulate") return cmd_simulate(cfg);
        if (cfg.command == "compare") return cmd_compare(cfg);
        if (cfg.command == "verify") return cmd_verify(cfg);
        if (cfg.command == "sweep") return cmd_sweep(cfg);
        if (cfg.command == "inspect") return cmd_inspect(cfg);
        throw UsageError("unknown command '" + cfg.command + "'");
    } catch (const DivisibilityError& e) {
        std::cerr << "infeasible: " << e.what() << " (suggested N: " << e.minimal_n() << ")\n";
        return infeasible;
    } catch (const SegmentationError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return infeasible;
    } catch (const ConsistencyError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return verification_failed;
    } catch (const DecodeError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return verification_failed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
}

} // namespace d3c::cli
