#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include <json.hpp>

#include "cli.hpp"
#include "qkgp/gram_io.hpp"
#include "temp_dir.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qkgp");
    std::ostringstream out, err;
    const int code = qkgp::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, DecomposeTwoLevels) {
    TempDir dir;
    const auto r = invoke({"decompose", "2", "--out-dir", dir.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("terms: 1\n"), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "pauli_N2.json"));
    EXPECT_EQ(j["qubits"], 1);
    EXPECT_EQ(j["terms"][0]["string"], "Y");
    EXPECT_TRUE(std::filesystem::exists(dir / "run_config.txt"));
}

TEST(Cli, DecomposeSixteenLevels) {
    TempDir dir;
    const auto r = invoke({"decompose", "--levels", "16", "--out", (dir / "p.json").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("terms: 32\n"), std::string::npos);
    EXPECT_EQ(nlohmann::json::parse(slurp(dir / "p.json"))["terms"].size(), 32u);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({"decompose", "3"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"regress1d", "--kernel", "C-"}).code, 2);
    EXPECT_EQ(invoke({"regress1d", "--s-bounds", "1"}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, IoErrors) {
    TempDir dir;
    EXPECT_EQ(invoke({"gram", "--dataset", (dir / "missing.csv").string()}).code, 4);
    EXPECT_EQ(invoke({"--config", (dir / "missing.cfg").string()}).code, 4);
    spit(dir / "blocker", "");
    EXPECT_EQ(invoke({"decompose", "4", "--out-dir", (dir / "blocker" / "sub").string()}).code, 4);
}

TEST(Cli, GramDiagonalAndEmulation) {
    TempDir dir;
    spit(dir / "d.csv", "x1,y,sigma2\n0,0,0.1\n0.5,1,0.1\n4,2,0.1\n30,2,0.1\n");
    for (const char* sub : {"a", "b"}) {
        const auto r = invoke({"gram", "--dataset", (dir / "d.csv").string(), "--kernel", "coherent", "--s", "2.5",
                             "--c", "1", "--emulate-hw", "--seed", "4", "--out-dir", (dir / sub).string()});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    const auto g = qkgp::kernels::load_gram(dir / "a" / "gram.csv");
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(g.values(i, i), 2.5, 1e-12);
    for (const char* f : {"gram.csv", "gram.json", "gram_emulated.csv", "gram_relerr.csv"}) {
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
    // The far pair sits near zero and gets lifted to the background floor.
    const auto e = qkgp::kernels::load_gram(dir / "a" / "gram_emulated.csv");
    EXPECT_LT(g.values(0, 3), 1e-6);
    EXPECT_NEAR(e.values(0, 3) / 2.5, 0.02, 0.004);
}

TEST(Cli, ConfigReproducesRun) {
    TempDir dir;
    spit(dir / "d.csv", "x1,x2,y,sigma2\n0,0,0,0.1\n1,0.5,1,0.1\n");
    const auto first = invoke({"gram", "--dataset", (dir / "d.csv").string(), "--c", "1,2", "--c", "0.7,0.9",
                             "--out-dir", (dir / "one").string()});
    ASSERT_EQ(first.code, 0) << first.err;
    const std::string cfg = slurp(dir / "one" / "run_config.txt");
    EXPECT_NE(cfg.find("command=gram\n"), std::string::npos);
    EXPECT_NE(cfg.find("c=0.7,0.9\n"), std::string::npos);
    const auto second =
        invoke({"--config", (dir / "one" / "run_config.txt").string(), "--out-dir", (dir / "two").string()});
    ASSERT_EQ(second.code, 0) << second.err;
    EXPECT_EQ(slurp(dir / "one" / "gram.csv"), slurp(dir / "two" / "gram.csv"));
    std::string cfg2 = slurp(dir / "two" / "run_config.txt");
    EXPECT_NE(cfg2.find("out-dir=" + (dir / "two").string() + "\n"), std::string::npos);
}

TEST(Cli, OutDirFromEnvironment) {
    TempDir dir;
    setenv(qkgp::cli::kOutDirEnv, dir.path().c_str(), 1);
    const auto r = invoke({"decompose", "4"});
    unsetenv(qkgp::cli::kOutDirEnv);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(std::filesystem::exists(dir / "pauli_N4.json"));
}

TEST(Cli, Regress1dOutputs) {
    TempDir dir;
    const auto r = invoke({"regress1d", "--func", "f2", "--kernel", "C-2", "--n-test", "20",
                         "--restarts", "0", "--out-dir", dir.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "results.json"));
    EXPECT_EQ(j["kernel"], "C-2");
    EXPECT_GT(j["r2"].get<double>(), 0.9);
    const auto pred = slurp(dir / "predictions.csv");
    EXPECT_EQ(pred.substr(0, pred.find('\n')), "x1,mean,lower,upper,truth");
    EXPECT_EQ(std::count(pred.begin(), pred.end(), '\n'), 21);
    EXPECT_TRUE(std::filesystem::exists(dir / "train.csv"));
}

TEST(Cli, EmulateNeedsQubitKernel) {
    TempDir dir;
    EXPECT_EQ(invoke({"regress1d", "--kernel", "C-4", "--emulate-hw", "--out-dir", dir.path().string()}).code, 2);
}
