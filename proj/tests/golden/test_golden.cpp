#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypoteq/service/session.hpp"

using namespace hypoteq::service;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream f(std::string(HQ_GOLDEN_DIR) + "/" + name);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string run(const std::string& base, const std::string& script) {
    Session s;
    auto r = run_script_text(slurp(base) + "\n" + slurp(script), s);
    EXPECT_EQ(r.errors, 0u) << r.output;
    return r.output;
}

std::string run_tool(const std::string& args, int* status) {
    std::string cmd = std::string(HQ_TOOL) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    *status = pclose(p);
    return out;
}

}  // namespace

TEST(Golden, Session1NotIn) { EXPECT_EQ(run("base_string.hq", "session1.hq"), slurp("session1.expected")); }

TEST(Golden, Session2With) { EXPECT_EQ(run("base_varchar.hq", "session2.hq"), slurp("session2.expected")); }

TEST(Golden, Session3Assume) { EXPECT_EQ(run("base_varchar.hq", "session3.hq"), slurp("session3.expected")); }

TEST(Golden, DemoThroughTheCli) {
    int status = 0;
    auto out = run_tool("--script " + std::string(HQ_GOLDEN_DIR) + "/demo.hq", &status);
    EXPECT_EQ(status, 0);
    EXPECT_EQ(out, slurp("demo.expected"));
}

TEST(Golden, CliReadsPipedInput) {
    int status = 0;
    auto out = run_tool("--show-compilations < " + std::string(HQ_GOLDEN_DIR) + "/demo.hq", &status);
    EXPECT_EQ(status, 0);
    EXPECT_EQ(out, slurp("demo.expected"));
}

TEST(Golden, CliReportsScriptErrors) {
    int status = 0;
    auto out = run_tool("--script /nonexistent/x.hq", &status);
    EXPECT_NE(status, 0);
    EXPECT_NE(out.find("IOError"), std::string::npos);
}
