#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "expression.hpp"
#include "logman/error.hpp"
#include "scenario.hpp"

using namespace logman;
using namespace logman::cli;

namespace {

const std::filesystem::path scenarios = LOGMAN_SCENARIO_DIR;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> csv_column(const std::string& csv, int col) {
    std::vector<std::string> out;
    std::stringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        for (int c = 0; c <= col; ++c) std::getline(ls, cell, ',');
        out.push_back(cell);
    }
    return out;
}

}  // namespace

TEST_CASE("expression grammar") {
    const auto e = Expression::parse("k/(1+r^2)", {{"k", 1.0}});
    CHECK(e(0.0) == 1.0);
    CHECK(e(1.0) == 0.5);
    CHECK(e(2.0) == 0.2);
    CHECK(Expression::parse("-r^2", {})(3.0) == -9.0);
    CHECK(Expression::parse("2^3^2", {})(0.0) == 512.0);
    CHECK(Expression::parse("2*3-4/8+1", {})(0.0) == 6.5);
    CHECK(Expression::parse("sinh(r)/cosh(r) - tanh(r)", {})(0.7) == doctest::Approx(0.0));
    CHECK(Expression::parse("exp(log(r))", {})(2.5) == doctest::Approx(2.5));
    CHECK(Expression::parse("max(0, 1-r)^2 + step(r-2)", {})(0.5) == 0.25);
    CHECK(Expression::parse("max(0, 1-r)^2 + step(r-2)", {})(2.0) == 1.0);
    CHECK(Expression::parse("1e-3*pi", {})(0.0) == doctest::Approx(std::acos(-1.0) * 1e-3));
    CHECK_THROWS_AS(Expression::parse("k*r", {}), ConfigError);
    CHECK_THROWS_AS(Expression::parse("foo(r)", {}), ConfigError);
    CHECK_THROWS_AS(Expression::parse("(1+r", {}), ConfigError);
    CHECK_THROWS_AS(Expression::parse("1+", {}), ConfigError);
    CHECK_THROWS_AS(Expression::parse("1 2", {}), ConfigError);
}

TEST_CASE("minimal scenario gets defaults") {
    const auto s = parse_scenario_text("command = \"eigen\"\nmanifold.type = \"euclidean\"  # R^3\n");
    CHECK(s.command == "eigen");
    CHECK(s.manifold.dimension == 3);
    CHECK(s.solver.mesh == 2000);
    CHECK(s.sigma == 2.0);
    CHECK(s.has("manifold.type"));
    CHECK_FALSE(s.has("solver.R"));
    const auto m = build_model(s);
    CHECK(m.a(1.0) == 0.0);
    CHECK(m.b(1.0) == 1.0);
}

TEST_CASE("scenario errors are collected with line numbers") {
    const std::string text =
        "manifold.type = \"klein\"\n"
        "solver.mesh = 12.5\n"
        "nonsense\n"
        "coefficients.a = \"k*(1+\"\n"
        "solver.bogus = 1\n";
    try {
        parse_scenario_text(text);
        FAIL("no error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 1: manifold.type: unknown manifold type 'klein'") != std::string::npos);
        CHECK(msg.find("line 2: solver.mesh") != std::string::npos);
        CHECK(msg.find("line 3:") != std::string::npos);
        CHECK(msg.find("line 4: coefficients.a") != std::string::npos);
        CHECK(msg.find("line 5: unknown key 'solver.bogus'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario_text("sigma = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario_text("sigma = 2\nsigma = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario_text("coefficients.a_table = \"missing.csv\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(scenarios / "no_such_file.cfg"), ConfigError);
}

TEST_CASE("constants and lists") {
    const auto s = parse_scenario_text(
        "manifold.type = hyperbolic\nmanifold.B = 9\n"
        "constants.c_m = \"4*(m-1)/(m-2)\"\nconstants.s = \"-m*(m-1)*B\"\n"
        "coefficients.a = \"-s/c_m\"\nsolver.R_schedule = [1, 2.5, 10]\nsolver.solve = true\n");
    CHECK(s.solver.R_schedule == std::vector<double>{1, 2.5, 10});
    CHECK(s.solver.solve);
    const auto m = build_model(s);
    CHECK(m.symbols.at("c_m") == 8.0);
    CHECK(m.a(3.0) == doctest::Approx(54.0 / 8.0));
    CHECK_THROWS_AS(parse_scenario_text("solver.R_schedule = [3, 2]\n"), ConfigError);
}

TEST_CASE("scalar overrides") {
    auto s = parse_scenario_text("coefficients.a = \"lambda*k/(1+r^2)\"\n");
    set_scalar(s, "params.lambda", 3.0);
    CHECK(build_model(s).a(0.0) == 3.0);
    set_scalar(s, "solver.mesh", 100);
    CHECK(s.solver.mesh == 100);
    CHECK_THROWS_AS(set_scalar(s, "solver.mesh", 1.5), ConfigError);
    CHECK_THROWS_AS(set_scalar(s, "manifold.type", 1.0), ConfigError);
    CHECK_THROWS_AS(set_scalar(s, "params.zeta", 1.0), ConfigError);
}

TEST_CASE("value lists") {
    CHECK(parse_values("0.1, 0.2,0.5") == std::vector<double>{0.1, 0.2, 0.5});
    CHECK(parse_values("").empty());
    const auto r = parse_values("0.1:0.01:2");
    CHECK(r.size() == 191);
    CHECK(r.back() == doctest::Approx(2.0));
    CHECK_THROWS_AS(parse_values("1:0:2"), ConfigError);
    CHECK_THROWS_AS(parse_values("1,x"), ConfigError);
}

TEST_CASE("exit codes") {
    const auto out = std::filesystem::temp_directory_path() / "logman_cli_test";
    std::filesystem::create_directories(out);
    const auto s = parse_scenario(scenarios / "eigen_ball.cfg");
    CHECK(run_scenario(s, "eigen", out / "missing") == exit_config);
    CHECK(run_scenario(s, "eigen", out) == exit_ok);
    CHECK(std::filesystem::exists(out / "eigen_report.txt"));
    CHECK(std::filesystem::exists(out / "eigenfunction.csv"));
    CHECK(run_command(s, "poisson").exit_code == exit_config);  // no rho
    CHECK(run_command(s, "green").exit_code == exit_ok);

    auto parabolic = s;
    parabolic.manifold.dimension = 2;
    CHECK(run_command(parabolic, "green").exit_code == exit_hypothesis);

    const auto y = parse_scenario(scenarios / "yamabe_remark.cfg");
    const auto r = run_command(y, "exists");
    CHECK(r.exit_code == exit_hypothesis);
    CHECK(r.headline.verdict == 0);
}

TEST_CASE("deterministic output") {
    const auto s = parse_scenario(scenarios / "poisson_shell.cfg");
    const auto a = run_command(s, "poisson");
    const auto b = run_command(s, "poisson");
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i] == b.files[i]);
    CHECK(a.report == b.report);
}

TEST_CASE("built-in volume-growth scenario certifies") {
    const auto r = run_command(parse_scenario(scenarios / "thm33_euclid.cfg"), "nonexist");
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report.find("verdict: non-existence certified") != std::string::npos);
    CHECK(r.headline.center < 1e-3);
}

TEST_CASE("built-in hyperbolic lambda_star scenario") {
    const auto r = run_command(parse_scenario(scenarios / "hyperbolic_lambda_star.cfg"), "lambda-star");
    REQUIRE(r.exit_code == exit_ok);
    REQUIRE(r.files.size() == 1);
    CHECK(r.files[0].first == "lambda_star.csv");
    const auto lam = csv_column(r.files[0].second, 1);
    const auto bound = csv_column(r.files[0].second, 2);
    REQUIRE(lam.size() == 4);
    CHECK(std::stod(bound[0]) == std::stod(lam.back()));
    CHECK(std::stod(lam.back()) == doctest::Approx(1.0 + 9.8696 / 1600).epsilon(1e-3));
}

TEST_CASE("sweeps") {
    auto ab = parse_scenario(scenarios / "ab_comparison.cfg");
    CHECK(sweep(ab, "params.lambda", {}) == "value,status,verdict,eigenvalue,residual,center\n");

    const auto csv = sweep(ab, "params.lambda", parse_values("0.1:0.01:2"));
    const auto verdict = csv_column(csv, 2);
    const auto value = csv_column(csv, 0);
    int flips = 0;
    double at = 0.0;
    for (std::size_t i = 1; i < verdict.size(); ++i)
        if (verdict[i] != verdict[i - 1]) {
            ++flips;
            at = std::stod(value[i]);
        }
    CHECK(flips == 1);
    // Rule threshold for m = 3, k = 1: lambda = 1.
    CHECK(std::abs(at - 1.0) <= 0.01 + 1e-12);

    const auto hyp = parse_scenario(scenarios / "hyperbolic_lambda_star.cfg");
    const auto lam = csv_column(sweep(hyp, "solver.R_max", {10, 20, 40}), 3);
    REQUIRE(lam.size() == 3);
    CHECK(std::stod(lam[1]) <= std::stod(lam[0]));
    CHECK(std::stod(lam[2]) <= std::stod(lam[1]));

    // A failing row is recorded and the sweep continues.
    auto eig = parse_scenario(scenarios / "eigen_ball.cfg");
    const auto status = csv_column(sweep(eig, "solver.R", {1.0, -1.0, 2.0}), 1);
    CHECK(status == std::vector<std::string>{"0", "3", "0"});
    CHECK_THROWS_AS(sweep(eig, "params.zeta", {1.0}), ConfigError);
}

TEST_CASE("built-in scenarios parse") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(scenarios)) {
        if (entry.path().extension() != ".cfg") continue;
        CAPTURE(entry.path().string());
        const auto s = parse_scenario(entry.path());
        CHECK_FALSE(s.command.empty());
        ++count;
    }
    CHECK(count >= 10);
}
