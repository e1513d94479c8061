#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

namespace cli = d3c::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

struct TempOut {
    std::filesystem::path path;
    explicit TempOut(const std::string& name) : path(std::filesystem::temp_directory_path() / ("d3c_cli_" + name)) {}
    ~TempOut() { std::filesystem::remove(path); }
};

} // namespace

TEST(Cli, TradeoffCsv) {
    TempOut out("tradeoff.csv");
    cli::RunConfig cfg;
    cfg.command = "tradeoff";
    cfg.K = 10;
    cfg.r = "4.5";
    cfg.out = out.path.string();
    ASSERT_EQ(cli::run(cfg), cli::ok);
    const std::string text = slurp(out.path);
    EXPECT_EQ(text.rfind("c,L,segment_kind\n", 0), 0U);
    EXPECT_NE(text.find("1,0.55,corner"), std::string::npos) << text;
    EXPECT_NE(text.find("2.9,0.122222222222,corner"), std::string::npos) << text;
}

TEST(Cli, TradeoffJson) {
    TempOut out("tradeoff.json");
    cli::RunConfig cfg;
    cfg.command = "tradeoff";
    cfg.K = 3;
    cfg.r = "2";
    cfg.format = "json";
    cfg.out = out.path.string();
    ASSERT_EQ(cli::run(cfg), cli::ok);
    auto j = nlohmann::json::parse(slurp(out.path));
    EXPECT_TRUE(j.is_object());
}

TEST(Cli, CStarSweep) {
    TempOut out("cstar.csv");
    cli::RunConfig cfg;
    cfg.command = "tradeoff";
    cfg.K = 10;
    cfg.cstar_sweep = true;
    cfg.out = out.path.string();
    ASSERT_EQ(cli::run(cfg), cli::ok);
    const std::string text = slurp(out.path);
    EXPECT_EQ(lines(text), 181U);
    EXPECT_EQ(text.rfind("r,c_star,c_equals_r\n", 0), 0U);
}

TEST(Cli, MissingStorageIsUsageError) {
    cli::RunConfig cfg;
    cfg.command = "tradeoff";
    cfg.K = 10;
    EXPECT_EQ(cli::run(cfg), cli::usage);
}

TEST(Cli, SimulateBasicAndPlan) {
    TempOut out("sim.csv");
    cli::RunConfig cfg;
    cfg.command = "simulate";
    cfg.K = 3;
    cfg.r = "2";
    cfg.g = "2";
    cfg.audit = true;
    cfg.out = out.path.string();
    ASSERT_EQ(cli::run(cfg), cli::ok);
    const std::string text = slurp(out.path);
    EXPECT_NE(text.find(",2,4/3,1/6,"), std::string::npos) << text;
    EXPECT_NE(text.find(",pass"), std::string::npos);

    cli::RunConfig plan;
    plan.command = "simulate";
    plan.K = 4;
    plan.r = "5/2";
    plan.c = "1";
    plan.format = "json";
    plan.out = out.path.string();
    ASSERT_EQ(cli::run(plan), cli::ok);
    auto j = nlohmann::json::parse(slurp(out.path));
    EXPECT_EQ(j["plan"]["route"], "e1");
    EXPECT_TRUE(j["verification"]["passed"].get<bool>());
}

TEST(Cli, SimulateInfeasibleN) {
    cli::RunConfig cfg;
    cfg.command = "simulate";
    cfg.K = 3;
    cfg.N = 5;
    cfg.r = "2";
    cfg.g = "2";
    cfg.out = (std::filesystem::temp_directory_path() / "d3c_cli_unused").string();
    EXPECT_EQ(cli::run(cfg), cli::infeasible);
    std::filesystem::remove(cfg.out);
}

TEST(Cli, VerifySmallest) {
    auto rows = cli::verify_sweep(2, 1);
    ASSERT_EQ(rows.size(), 1U);
    EXPECT_TRUE(rows[0].passed());
    EXPECT_EQ(cli::verify_sweep(4, 1).size(), 1U + 3U + 6U);
}

TEST(Cli, SweepRowCount) {
    TempOut out("sweep.csv");
    cli::RunConfig cfg;
    cfg.command = "sweep";
    cfg.K = 10;
    cfg.r_grid = {"2", "3.5", "4.5"};
    cfg.out = out.path.string();
    ASSERT_EQ(cli::run(cfg), cli::ok);
    EXPECT_EQ(lines(slurp(out.path)), 61U);
}

TEST(Cli, InspectScheme) {
    TempOut out("inspect.json");
    cli::RunConfig cfg;
    cfg.command = "inspect";
    cfg.K = 4;
    cfg.r = "2";
    cfg.g = "1";
    cfg.out = out.path.string();
    ASSERT_EQ(cli::run(cfg), cli::ok);
    EXPECT_TRUE(nlohmann::json::parse(slurp(out.path)).contains("nodes")) << slurp(out.path);
}
