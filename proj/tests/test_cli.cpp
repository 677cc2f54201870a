#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hyperad/cli.hpp"

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int s = hyperad::cli::run(args, out, err);
    return {s, out.str(), err.str()};
}

}  // namespace

TEST(Cli, Grad) {
    auto r = run({"grad", "-e", "let mul y = x*y in mul x + x", "--at", "3"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "7\n");
    r = run({"grad", "-e", "x * y", "--at", "-1,2"});
    EXPECT_EQ(r.out, "2 -1\n");
    r = run({"grad", "-e", "sin x", "--at", "0.5", "--oracle"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, Eval) {
    auto r = run({"eval", "-e", "2.0 + 3.0"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "5\n");
    r = run({"eval", "-e", "(x, x * x)", "--at", "3", "--format", "json"});
    EXPECT_EQ(r.out, "{\"value\":[3.0,9.0]}\n");
}

TEST(Cli, CheckRd) {
    auto r = run({"check", "--suite", "rd"});
    EXPECT_EQ(r.status, 0) << r.out;
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).status, 2);
    EXPECT_EQ(run({"eval", "-e", "(x"}).status, 2);
    EXPECT_EQ(run({"eval", "-e", "x", "--at", "1,2"}).status, 2);
    EXPECT_EQ(run({"eval", "-e", "x", "--at", "abc"}).status, 2);
    EXPECT_EQ(run({"eval", "-e", "sin 1.0 2.0"}).status, 3);
    EXPECT_EQ(run({"eval", "-e", "\\x. x"}).status, 3);
    EXPECT_EQ(run({"check", "--suite", "bogus"}).status, 2);
}

TEST(Cli, ElaborateAndRewrite) {
    const std::string path = ::testing::TempDir() + "hyperad_cli_graph.json";
    auto r = run({"elaborate", "-e", "(\\y. y * x) x", "-o", path});
    ASSERT_EQ(r.status, 0) << r.err;
    r = run({"rewrite", path, "--rules", "BR,App[box],Gc[box]"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "step 1: BR\n1 step\n");
    EXPECT_EQ(run({"rewrite", path, "--rules", "BR", "--fuel", "0"}).status, 4);
    EXPECT_EQ(run({"rewrite", path, "--rules", "Nope"}).status, 2);
    r = run({"eval", path, "--at", "3"});
    EXPECT_EQ(r.out, "9\n");
    r = run({"elaborate", "-e", "x", "--format", "dot"});
    EXPECT_NE(r.out.find("digraph"), std::string::npos);
    r = run({"adjoint", "-e", "x * x", "--format", "text"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("box"), std::string::npos);
    std::remove(path.c_str());
}
