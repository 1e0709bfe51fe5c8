#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pscb/cli.hpp"
#include "xml_check.hpp"

using namespace pscb;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "pscb");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("pscb_test_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli run: repeated runs produce identical files", "[cli]") {
    const auto a = scratch("a");
    const auto b = scratch("b");
    const std::vector<std::string> common{"run", "--env", "builtin:synthetic", "--T", "400", "--reps", "3",
                                          "--seed", "5", "--plot"};
    auto args_a = common;
    args_a.insert(args_a.end(), {"--out", a.string(), "--threads", "2"});
    auto args_b = common;
    args_b.insert(args_b.end(), {"--out", b.string(), "--threads", "1"});
    const auto ra = cli(args_a);
    const auto rb = cli(args_b);
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(slurp(a / "regret.csv") == slurp(b / "regret.csv"));
    CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
    const auto header = slurp(a / "regret.csv").substr(0, slurp(a / "regret.csv").find('\n'));
    CHECK(header.rfind("t,glr_cucb_mean,glr_cucb_std,lr_glr_cucb_mean", 0) == 0);
    CHECK(testing::xml_problem(slurp(a / "regret.svg")).empty());
    CHECK(ra.out.find("glr_cucb") != std::string::npos);
}

TEST_CASE("cli run: algorithm subset and file environment", "[cli]") {
    const auto dir = scratch("env");
    fs::create_directories(dir);
    std::ofstream(dir / "table.csv") << "K=3,T=200\n1,0.9,0.5,0.1\n101,0.1,0.5,0.9\n";
    const auto r = cli({"run", "--env", (dir / "table.csv").string(), "--algos", "cucb,glr_cucb", "--reps", "2",
                        "--out", (dir / "out").string()});
    REQUIRE(r.code == 0);
    const auto csv = slurp(dir / "out" / "regret.csv");
    CHECK(csv.rfind("t,cucb_mean,cucb_std,glr_cucb_mean,glr_cucb_std\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);
    CHECK_FALSE(fs::exists(dir / "out" / "regret.svg"));
}

TEST_CASE("cli theory", "[cli]") {
    auto lower = cli({"theory", "--bound", "lower", "--N", "5", "--K", "6", "--T", "5000"});
    CHECK(lower.code == 0);
    CHECK(lower.out == "30.08693782\n");

    auto d = cli({"theory", "--bound", "d", "--K", "6", "--p", "0.05", "--delta", "0.01", "--T", "5000",
                  "--delta-change", "0.5"});
    CHECK(d.code == 0);
    CHECK(d.out == "102673\n");

    auto gap = cli({"theory", "--bound", "check-gap"});
    CHECK(gap.code == 0);
    CHECK(gap.out.find("assumption violated") != std::string::npos);

    auto upper = cli({"theory", "--bound", "upper"});
    CHECK(upper.code == 0);
    CHECK(upper.out.find("total=") != std::string::npos);

    auto bad = cli({"theory", "--bound", "lower", "--N", "5", "--K", "2", "--T", "5000"});
    CHECK(bad.code != 0);
    CHECK_FALSE(bad.err.empty());
}

TEST_CASE("cli check-env reports the failing line", "[cli]") {
    const auto dir = scratch("check");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.csv") << "K=2,T=10\n1,0.3,0.3\n4,0.3,0.3\n";
    std::ofstream(dir / "good.csv") << "K=2,T=10\n1,0.3,0.3\n4,0.3,0.6\n";
    const auto bad = cli({"check-env", (dir / "bad.csv").string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("line 3") != std::string::npos);
    const auto good = cli({"check-env", (dir / "good.csv").string()});
    CHECK(good.code == 0);
    CHECK(good.out.find("change-points: 3") != std::string::npos);
}

TEST_CASE("cli usage errors", "[cli]") {
    CHECK(cli({"run", "--bogus"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"run", "--env", "missing.csv", "--out", scratch("missing").string()}).code != 0);
    CHECK(cli({"run", "--env", "builtin:nope", "--out", scratch("nope").string()}).code != 0);
    CHECK(cli({"run", "--algos", "ucb9", "--out", scratch("algo").string()}).code != 0);
    CHECK(cli({"check-env"}).code == 2);
}
