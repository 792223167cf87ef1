#include "support.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>

using namespace bigref::test;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(BIGREF_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    while (auto n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string c(const std::string& f) { return corpus(f); }

} // namespace

TEST(Cli, ReactCcs) {
    auto r = cli("react " + c("ccs.brs") + " demo --steps 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("step 1:\n  recv(b).nil | send(c).nil"), std::string::npos) << r.out;
}

TEST(Cli, ReactNotify) {
    auto r = cli("react " + c("notify.brs") + " uf --steps 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("Z.(F | N | U)"), std::string::npos) << r.out;
}

TEST(Cli, ReactZeroStepsPrintsSeedOnly) {
    auto r = cli("react " + c("notify.brs") + " uf --steps 0");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "step 0:\n  Z.(F | U)\n");
}

TEST(Cli, UnknownAgent) { EXPECT_EQ(cli("react " + c("notify.brs") + " nobody").code, 2); }

TEST(Cli, LoadErrors) {
    EXPECT_EQ(cli("parse " + c("missing.brs")).code, 2);
    EXPECT_EQ(cli("parse").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
}

TEST(Cli, ParseRoundtrips) {
    auto first = cli("parse " + c("selective.brs"));
    ASSERT_EQ(first.code, 0);
    const auto tmp = testing::TempDir() + "/roundtrip.brs";
    std::ofstream(tmp) << first.out;
    auto second = cli("parse " + tmp);
    EXPECT_EQ(second.code, 0);
    EXPECT_EQ(first.out, second.out);
}

TEST(Cli, CheckFunctor) {
    auto r = cli("check-functor " + c("notify.brs") + " " + c("selective.brs") + " --hide S");
    EXPECT_EQ(r.code, 0) << r.out;
    for (const auto* row : {"M1 |-> M1", "M2 |-> M2", "M3 |-> M3", "R2 |-> R1"})
        EXPECT_NE(r.out.find(row), std::string::npos) << row;
}

TEST(Cli, CheckFunctorFailure) {
    auto r = cli("check-functor " + c("notify.brs") + " " + c("selective.brs") + " --hide F");
    EXPECT_EQ(r.code, 2) << r.out;  // conflicts with the file's functor block
}

TEST(Cli, CheckLiveProposition) {
    const auto report = testing::TempDir() + "/live.report";
    auto r = cli("check-live " + c("notify.brs") + " " + c("selective.brs") +
                 " --hide S --admissible notified --seed uf --depth 0 --ext-depth 1 --report " + report);
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_NE(r.out.find("Z.(F | N | U)"), std::string::npos);
    std::ifstream in(report);
    std::string doc((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_NE(doc.find("witness.extension[0]: Z.(F | N | U)"), std::string::npos) << doc;
}

TEST(Cli, CheckSafeCorollary) {
    auto r = cli("check-safe " + c("notify.brs") + " " + c("selective.brs") + " --depth 4");
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, CheckSafeReflexive) {
    EXPECT_EQ(cli("check-safe " + c("notify.brs") + " " + c("notify.brs")).code, 0);
    EXPECT_EQ(cli("check-safe " + c("ccs.brs") + " " + c("ccs.brs")).code, 0);
    EXPECT_EQ(cli("check-safe " + c("selective.brs") + " " + c("selective.brs") + " --identity").code, 2);
}

TEST(Cli, CombinedCheck) {
    auto r = cli("check " + c("notify.brs") + " " + c("selective.brs") + " --admissible notified --depth 1");
    EXPECT_EQ(r.code, 1) << r.out;
}

TEST(Cli, BoundExceeded) {
    auto r = cli("check-safe " + c("notify.brs") + " " + c("selective.brs") + " --depth 6 --max-states 3");
    EXPECT_EQ(r.code, 3) << r.out;
}

TEST(Cli, ReportIsByteIdentical) {
    const auto a = testing::TempDir() + "/a.report", b = testing::TempDir() + "/b.report";
    const auto args = "check " + c("notify.brs") + " " + c("selective.brs") + " --admissible notified --depth 2 --report ";
    cli(args + a);
    cli(args + b);
    std::ifstream ia(a), ib(b);
    std::string da((std::istreambuf_iterator<char>(ia)), {}), db((std::istreambuf_iterator<char>(ib)), {});
    EXPECT_FALSE(da.empty());
    EXPECT_EQ(da, db);
}

TEST(Cli, Traces) {
    auto r = cli("traces " + c("notify.brs") + " uf --depth 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("(2 traces)"), std::string::npos) << r.out;
}
