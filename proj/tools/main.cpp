#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    using d3c::cli::RunConfig;
    CLI::App app{"Coded distributed computing simulator: tradeoff curves, scheme execution and verification"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--K", cfg.K, "number of nodes (max K for verify)")->required();
        sub->add_option("--out", cfg.out, "output path, '-' for stdout");
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", cfg.seed, "corpus seed");
        sub->add_option("--F", cfg.F, "file size in bits (multiple of 8)");
        sub->add_option("--T", cfg.T, "IVA size in bits (default 8*lcm(1..g))");
        sub->add_option("--B", cfg.B, "reduce output size in bits (default T)");
    };
    auto storage = [&](CLI::App* sub) { sub->add_option("--r", cfg.r, "storage space (e.g. 2, 4.5, 9/2)"); };

    auto* tradeoff = app.add_subcommand("tradeoff", "emit the computation/communication tradeoff curve");
    common(tradeoff);
    storage(tradeoff);
    tradeoff->add_option("--resolution", cfg.resolution, "samples per envelope segment");
    tradeoff->add_flag("--cstar-sweep", cfg.cstar_sweep, "emit c*(r) over an r grid instead");
    tradeoff->add_option("--step", cfg.step, "r grid step for --cstar-sweep");

    auto* simulate = app.add_subcommand("simulate", "execute a scheme or composite plan end to end");
    common(simulate);
    storage(simulate);
    simulate->add_option("--N", cfg.N, "number of files (default: minimal admissible)");
    simulate->add_option("--c", cfg.c, "target computation load (planned)");
    simulate->add_option("--g", cfg.g, "coding parameter (basic scheme)");
    simulate->add_flag("--cdc", cfg.cdc, "run the map-everything baseline");
    simulate->add_flag("--audit", cfg.audit, "record every file and signal access");
    simulate->add_option("--trace", cfg.trace, "write a JSON-lines signal trace");

    auto* compare = app.add_subcommand("compare", "compare coded schemes g = 1..r against the baseline");
    common(compare);
    storage(compare);
    compare->add_option("--N", cfg.N, "number of files (default: minimal admissible)");

    auto* verify = app.add_subcommand("verify", "exhaustive decodability and exact-load check");
    common(verify);

    auto* sweep = app.add_subcommand("sweep", "predicted (and measured) loads over an (r, c) grid");
    common(sweep);
    sweep->add_option("--r", cfg.r_grid, "storage values")->expected(1, -1);
    sweep->add_option("--resolution", cfg.resolution, "c grid points per r (default 20)");
    sweep->add_flag("--execute", cfg.execute, "also execute each plan");
    sweep->add_option("--max-N", cfg.max_n, "skip execution when the minimal N exceeds this");

    auto* inspect = app.add_subcommand("inspect", "dump a scheme or plan as JSON");
    common(inspect);
    storage(inspect);
    inspect->add_option("--N", cfg.N, "number of files (default: minimal admissible)");
    inspect->add_option("--c", cfg.c, "target computation load (plan)");
    inspect->add_option("--g", cfg.g, "coding parameter (scheme)");
    inspect->add_flag("--cdc", cfg.cdc, "the map-everything baseline");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : d3c::cli::usage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return d3c::cli::run(cfg);
}
