#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace lozi;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lozi_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "lozi_lab");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

Json read_json(const fs::path& p) {
    std::ifstream in(p);
    return Json::parse(in);
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(ParseRange, ExactDecimals) {
    Rational lo, hi, step;
    cli::parse_range("0.9:1.1:0.1", lo, hi, step);
    EXPECT_EQ(lo, Rational(9, 10));
    EXPECT_EQ(hi, Rational(11, 10));
    EXPECT_EQ(step, Rational(1, 10));
    EXPECT_THROW(cli::parse_range("1:2", lo, hi, step), Error);
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run_args({}), cli::kUsage);
    EXPECT_EQ(run_args({"analyze", "--mode", "fuzzy"}), cli::kUsage);
    EXPECT_EQ(run_args({"sweep", "--a-range", "1:2"}), cli::kUsage);
}

TEST(Cli, AnalyzeOutOfScopeExitsZero) {
    const auto dir = scratch("oos");
    EXPECT_EQ(run_args({"analyze", "--a", "0.5", "--b", "0.25", "--out", dir.string()}), cli::kOk);
    const Json r = read_json(dir / "report.json");
    EXPECT_EQ(r["verdict"]["regime"], "OutOfScope");
    EXPECT_EQ(r["exit_code"], 0);
}

TEST(Cli, AnalyzeWritesArtifactsAtOneHalf) {
    const auto dir = scratch("half");
    ASSERT_EQ(run_args({"analyze", "--a", "1", "--b", "0.5", "--depth", "8", "--crossing-depth", "24",
                        "--homoclinic-u", "10", "--homoclinic-s", "10", "--iterates", "20", "--out", dir.string()}),
              cli::kOk);
    const Json r = read_json(dir / "report.json");
    EXPECT_EQ(r["verdict"]["regime"], "RCandidate");
    EXPECT_TRUE(fs::exists(dir / "manifold.csv"));
    EXPECT_TRUE(fs::exists(dir / "manifold.svg"));
    EXPECT_TRUE(r.contains("ell"));
    EXPECT_EQ(r["constants"]["P"]["x"]["p"], "6/5");
}

TEST(Cli, FormatSelection) {
    const auto dir = scratch("fmt");
    ASSERT_EQ(run_args({"analyze", "--a", "1", "--b", "0.5", "--depth", "4", "--crossing-depth", "12",
                        "--homoclinic-u", "6", "--homoclinic-s", "6", "--format", "json", "--out", dir.string()}),
              cli::kOk);
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    EXPECT_FALSE(fs::exists(dir / "manifold.csv"));
    EXPECT_FALSE(fs::exists(dir / "manifold.svg"));
}

TEST(Cli, BudgetExhaustionExitsThree) {
    const auto dir = scratch("budget");
    cli::RunConfig c;
    c.a = "1.06";
    c.b = "0.96";
    c.depth = 14;
    c.crossing_depth = 14;
    c.homoclinic_u = 4;
    c.homoclinic_s = 4;
    c.vertex_cap = 50;
    c.out = dir.string();
    EXPECT_EQ(cli::cmd_analyze(c), cli::kBudget);
    const Json r = read_json(dir / "report.json");
    EXPECT_EQ(r["exit_code"], 3);
    EXPECT_TRUE(r["error"].contains("message"));
}

TEST(Cli, OrbitsPeriodOne) {
    const auto dir = scratch("orbits");
    ASSERT_EQ(run_args({"orbits", "--n", "1", "--a", "1.06", "--b", "0.96", "--out", dir.string()}), cli::kOk);
    const Json r = read_json(dir / "orbits.json");
    ASSERT_EQ(r["orbits"].size(), 2u);
    std::set<std::string> its;
    for (const auto& o : r["orbits"]) its.insert(o["itinerary"].get<std::string>());
    EXPECT_EQ(its, (std::set<std::string>{"L", "R"}));
    const auto& first = r["orbits"][0]["points"][0]["x"];
    EXPECT_TRUE(first["p"] == "10/11" || first["p"] == "-50/51");
}

TEST(Cli, OrbitCapExceeded) {
    const auto dir = scratch("cap");
    EXPECT_EQ(run_args({"orbits", "--n", "9", "--orbit-cap", "4", "--out", dir.string()}), cli::kBudget);
}

TEST(Cli, SweepThreeByThreeAndResume) {
    const auto dir = scratch("sweep");
    const std::vector<std::string> args{"sweep",          "--a-range",      "0.9:1.1:0.1", "--b-range", "0.4:0.6:0.1",
                                        "--crossing-depth", "16",           "--homoclinic-u", "8",
                                        "--homoclinic-s", "8",              "--depth",        "8",
                                        "--iterates",     "10",             "--threads",      "2",
                                        "--out",          dir.string()};
    ASSERT_EQ(run_args(args), cli::kOk);
    auto rows = lines(dir / "sweep.csv");
    ASSERT_EQ(rows.size(), 10u);  // header + 9
    EXPECT_EQ(rows[0].rfind("a,b,", 0), 0u);
    EXPECT_EQ(lines(dir / "sweep.manifest").size(), 9u);

    // Drop the last three rows from both files, as after an interrupted run.
    {
        std::ofstream csv(dir / "sweep.csv", std::ios::trunc);
        for (std::size_t i = 0; i < 7; ++i) csv << rows[i] << '\n';
        auto m = lines(dir / "sweep.manifest");
        std::ofstream mf(dir / "sweep.manifest", std::ios::trunc);
        for (std::size_t i = 0; i < 6; ++i) mf << m[i] << '\n';
    }
    ASSERT_EQ(run_args(args), cli::kOk);
    const auto resumed = lines(dir / "sweep.csv");
    EXPECT_EQ(resumed, rows);

    // With everything done, a re-run adds nothing.
    ASSERT_EQ(run_args(args), cli::kOk);
    EXPECT_EQ(lines(dir / "sweep.csv"), rows);
}

TEST(Cli, ConfigFileSuppliesDefaults) {
    const auto dir = scratch("config");
    {
        std::ofstream cfg(dir / "run.ini");
        cfg << "a=0.5\nb=0.25\nout=" << dir.string() << "\n";
    }
    EXPECT_EQ(run_args({"analyze", "--config", (dir / "run.ini").string()}), cli::kOk);
    EXPECT_EQ(read_json(dir / "report.json")["constants"]["a"], "1/2");
}
