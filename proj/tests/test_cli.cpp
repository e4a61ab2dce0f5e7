#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(KEPSERIES_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto& row = rows.emplace_back();
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
    }
    return rows;
}

}  // namespace

TEST(CliSolve, CircularOrbit) {
    const auto r = run("solve --c 0 --u 1.0 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], "theta");
    EXPECT_DOUBLE_EQ(std::stod(rows[1][0]), 1.0);
}

TEST(CliSolve, ModerateEccentricity) {
    const auto r = run("solve --c 0.5 --u 1.0 --format csv");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(parse_csv(r.out)[1][0]), 1.49870, 1e-5);
}

TEST(CliSolve, ExitCodes) {
    EXPECT_EQ(run("solve --c 1.2 --u 0").code, 1);
    EXPECT_EQ(run("solve --c 0.9 --u 1 --method fixed --max-iter 3").code, 2);
    EXPECT_EQ(run("solve --c 0.5 --u 1 --method fixed").code, 0);
    EXPECT_EQ(run("solve --c 0.5").code, 1);
    EXPECT_EQ(run("bogus").code, 1);
    EXPECT_EQ(run("solve --help").code, 0);
}

TEST(CliCoeffs, CircularOrbitIsZero) {
    const auto r = run("coeffs --family eccentric_sine --c 0 --pmax 5 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 6u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][3], "0");
}

TEST(CliCoeffs, RadiusConstantTerm) {
    const auto r = run("coeffs --family radius_mean_cosine --c 0.5 --pmax 1 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    EXPECT_EQ(rows[1][2], "0");
    EXPECT_EQ(rows[1][3], "1.125");
}

TEST(CliCoeffs, TrueAnomalyQuadratureDecays) {
    const auto r = run("coeffs --family true_anomaly_sine --c 0.5 --pmax 50 --source quadrature --format csv");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 51u);
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_LT(std::abs(std::stod(rows[i][3])), std::abs(std::stod(rows[i - 1][3])));
}

TEST(CliCoeffs, ClosedFormUnavailable) {
    EXPECT_EQ(run("coeffs --family true_anomaly_sine --c 0.5 --source closed").code, 1);
    EXPECT_EQ(run("coeffs --family nope --c 0.5").code, 1);
}

TEST(CliLimits, ConstantsAndMargins) {
    const auto r = run("limits --format csv");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 13u);
    EXPECT_NEAR(std::stod(rows[1][2]), 0.66274, 1e-5);
    EXPECT_NEAR(std::stod(rows[2][2]), 0.617469011208, 1e-9);
    for (std::size_t i = 3; i < rows.size(); ++i) EXPECT_GT(std::stod(rows[i][2]), 0.0);
}

TEST(CliWkb, SweepErrorDecreases) {
    const auto r = run("wkb --p 50 --sigma 1 --xmax 1 --sweep 8 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 9u);
    EXPECT_EQ(rows[0].back(), "rel_error");
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][5]), std::stod(rows[i - 1][5]));
}

TEST(CliPerturb, SupErrorRow) {
    const auto r = run("perturb --alpha 0.05 --b 1 --y0 1.5 --N 3 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][2], "sup_error");
    EXPECT_LT(std::stod(rows[1][2]), 1e-3);
}

TEST(CliXx, ConjugatePairsAsJson) {
    const auto r = run("xx --z -1 --branches 3 --format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 6u);
    for (const auto& e : j) EXPECT_LT(e["residual"].get<double>(), 1e-10);
    EXPECT_EQ(j[4]["k"].get<int>(), 3);
}

TEST(CliXx, RealRootsAndArgumentChecks) {
    const auto r = run("xx --y 4 --branches 1 --format csv");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(parse_csv(r.out)[1][0], "2");
    EXPECT_EQ(run("xx --y 4 --z 1").code, 1);
    EXPECT_EQ(run("xx").code, 1);
}

TEST(CliAsym, RelativeErrorColumn) {
    const auto r = run("asym --c 0.5 --p 20 40 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LT(std::stod(rows[2][3]), std::stod(rows[1][3]));
}

TEST(CliOutput, WritesFileAndIsDeterministic) {
    const std::string path = ::testing::TempDir() + "kepseries_cli_out.csv";
    ASSERT_EQ(run("coeffs --family eccentric_sine --c 0.4 --pmax 8 --format csv --output " + path).code, 0);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(ss.str(), run("coeffs --family eccentric_sine --c 0.4 --pmax 8 --format csv").out);
    EXPECT_EQ(run("limits --format csv").out, run("limits --format csv").out);
    EXPECT_EQ(run("coeffs --family eccentric_sine --c 0.4 --output /nonexistent/dir/x.csv").code, 1);
}

TEST(CliOutput, PrecisionFlag) {
    const auto r = run("solve --c 0.5 --u 1 --format csv --precision 4");
    EXPECT_EQ(parse_csv(r.out)[1][0], "1.499");
    EXPECT_EQ(run("solve --c 0.5 --u 1 --precision 30").code, 1);
}
