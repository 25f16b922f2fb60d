#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(QFCOUNT_BIN) + " " + args + " 2>/dev/null";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string form(const char* name) { return std::string("--form ") + FORMS_DIR + "/" + name; }

} // namespace

TEST(Cli, DensityPrintsExactFraction) {
    auto r = run("density --prime 2 --n 2 " + form("four_squares.json") + " --oracle");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["value"], "3/2");
    EXPECT_EQ(j["oracle"], "3/2");
    EXPECT_EQ(j["match"], true);
}

TEST(Cli, CountStarMode) {
    auto r = run("count --height 2 --mode star " + form("four_squares.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["n_star"], 64);
}

TEST(Cli, CountReportIsConsistent) {
    auto r = run("count --height 2 --form builtin:sum_of_4_squares");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["n_rational"], 48);
    EXPECT_EQ(j["n_projective"], 24);
    EXPECT_EQ(j["consistent"], true);
}

TEST(Cli, AnalyzeReportsWitness) {
    auto r = run("analyze " + form("six_squares.json"));
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["D"], "-64");
    EXPECT_EQ(j["locally_determined"]["holds"], false);
    EXPECT_EQ(j["locally_determined"]["witness"]["quantity"], "kappa");
    EXPECT_EQ(j["jordan"]["2"]["verified"], true);
}

TEST(Cli, ConstantsCarryErrorBounds) {
    auto r = run("constants --cutoff 1000 " + form("example3.json"));
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    bool saw = false;
    for (const auto& c : j["constants"]) {
        EXPECT_TRUE(c.contains("error_bound"));
        if (c["name"] == "frakC_Q") {
            saw = true;
            EXPECT_EQ(c["cutoff"], 1000);
        }
    }
    EXPECT_TRUE(saw);
}

TEST(Cli, VerifySuitesPass) {
    for (const char* s : {"calibration", "identities", "bounds", "counting"}) {
        auto r = run(std::string("verify --suite ") + s + " --form builtin:example3 --n 20 --height 6 --cutoff 10000");
        EXPECT_EQ(r.code, 0) << s << "\n" << r.out;
        EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "pass");
    }
}

TEST(Cli, SweepStreamsCsv) {
    auto r = run("sweep --height-range 2:16:2 --format csv --form builtin:sum_of_4_squares");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "B,n_star,n_rational,n_projective,fit_c2");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (rows == 1) EXPECT_EQ(line.substr(0, 5), "2,64,");
    }
    EXPECT_EQ(rows, 8);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("density --prime 2").code, 2);
    EXPECT_EQ(run("count --height 2 --unknown-flag").code, 2);
    EXPECT_EQ(run("count --height 2 --form /nonexistent.json").code, 2);
    EXPECT_EQ(run("count --height 2 --format xml").code, 2);
    EXPECT_EQ(run("sweep --height-range 5:1:1").code, 2);
}

TEST(Cli, RejectsUnknownFormFields) {
    std::string path = std::string(::testing::TempDir()) + "bad_form.json";
    std::ofstream(path) << R"({"m": 4, "coefficients": [{"i": 1, "j": 1, "c": 1}], "colour": "red"})";
    EXPECT_EQ(run("analyze --form " + path).code, 2);
}

TEST(Cli, ResourceLimitExitsThree) {
    EXPECT_EQ(run("count --height 3000000 --mode direct --form builtin:sum_of_8_squares").code, 3);
}

TEST(Cli, WritesToOutputFile) {
    std::string path = std::string(::testing::TempDir()) + "qf_out.json";
    ASSERT_EQ(run("count --height 1 --mode star --out " + path).code, 0);
    std::ifstream in(path);
    EXPECT_EQ(nlohmann::json::parse(in)["n_star"], 16);
}
