#include "cli.hpp"

#include "dynbc/mesh.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace dynbc;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "dynbc");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
}

}  // namespace

TEST(Cli, RunPrintsOneRow) {
    const Result r = call({"run", "--scheme", "split-b", "--problem", "linear", "--target-h", "0.045", "--tau",
                           "0.0125"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string header;
    std::string row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "scheme,problem,h,n_u,n_p,tau,err_linf_l2,err_l2_h1,wall_time_s,newton_iters");
    const auto f = split(row);
    ASSERT_EQ(f.size(), 10u);
    EXPECT_EQ(f[0], "split-b");
    const double err = std::stod(f[6]);
    EXPECT_GE(err, 1.5e-4);
    EXPECT_LE(err, 8e-4);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(call({"run", "--tau", "0.3", "--final-time", "1.0"}).code, 2);
    EXPECT_EQ(call({}).code, 2);
    EXPECT_EQ(call({"frobnicate"}).code, 2);
    EXPECT_EQ(call({"run", "--scheme", "rk4"}).code, 2);
    EXPECT_EQ(call({"run", "--bogus-flag", "1"}).code, 2);
    EXPECT_EQ(call({"mesh", "--target-h", "1.5"}).code, 2);
    EXPECT_EQ(call({"sweep", "--h-levels", "9"}).code, 2);
    const Result r = call({"run", "--tau", "0.3"});
    EXPECT_NE(r.err.find("not a positive integer"), std::string::npos);
}

TEST(Cli, HelpListsFlags) {
    const Result r = call({"sweep", "--help"});
    EXPECT_EQ(r.code, 0);
    for (const char* flag : {"--scheme", "--problem", "--h-levels", "--tau-max", "--tau-count", "--workers", "--out"}) {
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
    }
}

TEST(Cli, MeshToFile) {
    const auto path = std::filesystem::temp_directory_path() / "dynbc_cli.mesh";
    const Result r = call({"mesh", "--target-h", "0.3", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(read_mesh(path) == generate_disk_mesh(0.3));
    std::filesystem::remove(path);
}

TEST(Cli, SweepIsDeterministic) {
    const std::vector<std::string> args{"sweep", "--scheme", "split-c", "--problem", "linear", "--h-levels", "2",
                                        "--tau-max", "0.2", "--tau-count", "3"};
    const Result a = call(args);
    const Result b = call(args);
    ASSERT_EQ(a.code, 0) << a.err;
    std::istringstream ia(a.out);
    std::istringstream ib(b.out);
    std::string la;
    std::string lb;
    int rows = 0;
    while (std::getline(ia, la) && std::getline(ib, lb)) {
        auto fa = split(la);
        auto fb = split(lb);
        ASSERT_EQ(fa.size(), 10u);
        fa[8] = fb[8] = "";  // wall time
        EXPECT_EQ(fa, fb);
        ++rows;
    }
    EXPECT_EQ(rows, 7);
}

TEST(Cli, VerifyPasses) {
    const Result r = call({"verify"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, SpeedupTable) {
    const Result r = call({"speedup", "--problem", "semilinear", "--h-levels", "1", "--tau-count", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("h,tau,monolithic_s,splitting_s,ratio\n", 0), 0u);
}
