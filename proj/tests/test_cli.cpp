#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

using namespace rankone;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// stdout only; stderr goes to the test log
Run run(const std::string& args) {
    const std::string cmd = std::string(RANKONE_CLI) + " " + args;
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

json run_json(const std::string& args, int expect_status = 0) {
    auto r = run(args);
    EXPECT_EQ(r.status, expect_status) << args << "\n" << r.out;
    return json::parse(r.out);
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l)) v.push_back(l);
    return v;
}

}  // namespace

TEST(Cli, AnalyzeChacon3) {
    auto j = run_json("analyze chacon3");
    EXPECT_EQ(j["classification"], "MSJ");
    EXPECT_EQ(j["rigid"]["value"], "no");
    EXPECT_EQ(j["totally_ergodic"]["value"], "yes");
}

TEST(Cli, InverseVerdictWithRider) {
    auto j = run_json("iso --mode inverse chacon3");
    EXPECT_EQ(j["value"], "no");
    EXPECT_EQ(j["rider"], "disjoint");
}

TEST(Cli, TopoSearchOdometer) {
    const std::string sq = R"('{"h0":1,"prefix":[],"cycle":[{"sigma":[0,0,0,0]}]}')";
    auto j = run_json("iso --mode topo --pad 0 odometer " + sq);
    EXPECT_EQ(j["value"], "yes");
    EXPECT_TRUE(j["certificate"]["witness_verified"].get<bool>());
}

TEST(Cli, CorrelationCsvMatchesBitset) {
    auto r = run("--format csv simulate corr --spec odometer --k 1 --m 10 --A 0 --t 0..8");
    ASSERT_EQ(r.status, 0) << r.out;
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 10u);
    EXPECT_EQ(ls[0], "t,numerator,denominator,error_num,error_den");

    const auto s = ParamSpec::odometer(2);
    const auto L = cylinder_levels(s, 1, make_set({0}), 10);
    for (long t = 0; t <= 8; ++t) {
        std::stringstream ss(ls[static_cast<std::size_t>(t) + 1]);
        std::string f[5];
        for (auto& x : f) std::getline(ss, x, ',');
        EXPECT_EQ(std::stol(f[0]), t);
        const Rat v{Int(f[1]), Int(f[2])};
        Rat ref(oracle::overlap_bitset(L, L, t, 1024), 1024);
        ref.canonicalize();
        EXPECT_EQ(v, ref);
        if (t % 2) {
            EXPECT_EQ(f[1], "0");
        }
    }
}

TEST(Cli, CodeText) {
    auto r = run("--format text simulate code --spec chacon3 --k 0 --m 5 --level 0 --t 0..12");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "0010001010010\n");
}

TEST(Cli, SeededSamplesRepeat) {
    const std::string args = "--seed 7 simulate code --spec chacon3 --k 1 --m 6 --n 2 --sample 4 --t -5..5";
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, EmittedSpecsRoundTrip) {
    for (const std::string& args :
         {std::string("transform telescope odometer --stride 3"), std::string("transform telescope chacon3 --growing 3"),
          std::string("--depth 4 transform adapted chacon2")}) {
        auto r = run(args);
        ASSERT_EQ(r.status, 0) << args;
        std::string text = r.out;
        while (!text.empty() && text.back() == '\n') text.pop_back();
        EXPECT_EQ(canonical(load_spec(text)), text);
        // feeding it back through the identity telescoping reproduces the same bytes
        auto again = run("transform telescope '" + text + "' --stride 1");
        ASSERT_EQ(again.status, 0) << again.out;
        EXPECT_EQ(again.out, r.out);
    }
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("analyze nosuchspec").status, 1);
    EXPECT_EQ(run("analyze '{\"h0\":1,\"prefix\":[{\"sigma\":[0,1]}],\"cycle\":null}'").status, 2);
    EXPECT_EQ(run("analyze '{\"h0\":1,'").status, 1);
    EXPECT_EQ(run("--budget 16 analyze chacon3").status, 1);
    EXPECT_EQ(run("validate '{\"h0\":1,\"prefix\":[{\"sigma\":[0,0]},{\"sigma\":[3]}],\"cycle\":null}'").status, 1);
    EXPECT_EQ(run("validate chacon3").status, 0);
    EXPECT_EQ(run("iso --mode topo-inverse --pad 0 chacon3").status, 1);
}

TEST(Cli, ErrorsAreStructured) {
    auto j = run_json("iso --mode measure chacon2 chacon3", 1);
    EXPECT_EQ(j["error"], "NotCommensurate");
    EXPECT_TRUE(j.contains("message"));
}
