#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "oracle.hpp"
#include "recurrence.hpp"

using namespace rotablue;

TEST_CASE("single occasion: equal weights") {
    for (const char* text : {"110011", "1101101", "111111"}) {
        ModelParams params{parse_pattern(text), 0.7};
        OracleSolution oracle = solve_finite_blue(params, 1);
        CHECK(oracle.horizon == 1);
        REQUIRE(oracle.weights.size() == 1);
        const double n = params.pattern.n;
        for (int k = 0; k < params.pattern.N; ++k) {
            double expected = params.pattern.eps[static_cast<size_t>(k)] ? 1.0 / n : 0.0;
            CHECK(std::abs(oracle.weights[0](k) - expected) < 1e-12);
        }
        CHECK(std::abs(oracle.variance - 1.0 / n) < 1e-12);
    }
}

TEST_CASE("horizon must be positive") {
    bool raised = false;
    try {
        solve_finite_blue(ModelParams{parse_pattern("110011"), 0.7}, 0);
    } catch (const error& e) {
        raised = (e.code() == errc::invalid_config);
    }
    CHECK(raised);
}

TEST_CASE("more history never hurts") {
    for (auto [text, rho] :
         std::vector<std::pair<const char*, double>>{{"111111", 0.9}, {"110011", 0.7}}) {
        ModelParams params{parse_pattern(text), rho};
        double previous = solve_finite_blue(params, 1).variance;
        for (int T = 2; T <= 25; ++T) {
            double current = solve_finite_blue(params, T).variance;
            CHECK(current <= previous + 1e-12);
            previous = current;
        }
    }
}

TEST_CASE("variance converges at the expected geometric rate") {
    for (auto [text, rho] :
         std::vector<std::pair<const char*, double>>{{"111111", 0.9}, {"110011", 0.7}}) {
        ModelParams params{parse_pattern(text), rho};
        RecurrenceSolution sol = analyze(params);
        double rate = sol.max_abs_d() * sol.max_abs_d();
        int T = static_cast<int>(std::ceil(std::log(1e-9) / std::log(rate)));
        double at = solve_finite_blue(params, T).variance;
        double next = solve_finite_blue(params, T + 1).variance;
        CHECK(std::abs(next - at) < 1e-9);
        // and by then the finite-horizon variance has reached the limit
        CHECK(std::abs(at - sol.variance) < 1e-8);
    }
}

TEST_CASE("weak correlation makes past data worthless") {
    for (const char* text : {"111111", "110011"}) {
        ModelParams params{parse_pattern(text), 0.05};
        OracleSolution oracle = solve_finite_blue(params, 10);
        CHECK(oracle.weights[1].norm() <= 0.1 * oracle.weights[0].norm());
    }
}

TEST_CASE("oracle weights honour the constraints") {
    ModelParams params{parse_pattern("1101101"), 0.5};
    OracleSolution oracle = solve_finite_blue(params, 30);
    CHECK(std::abs(oracle.weights[0].sum() - 1.0) < 1e-10);
    for (int i = 1; i < 30; ++i)
        CHECK(std::abs(oracle.weights[static_cast<size_t>(i)].sum()) < 1e-10);
    for (const Eigen::VectorXd& u : oracle.weights)
        for (int pos : params.pattern.gap_positions)
            CHECK(std::abs(u(pos - 1)) <= 1e-12);
    CHECK(oracle.kkt_residual < 1e-8);
}

TEST_CASE("first unbiasedness multiplier converges to the variance") {
    ModelParams params{parse_pattern("110011"), 0.7};
    RecurrenceSolution sol = analyze(params);
    OracleSolution oracle = solve_finite_blue(params, 50);
    CHECK(std::abs(oracle.lambda00 - oracle.variance) < 1e-10);
    CHECK(std::abs(oracle.lambda00 - sol.variance) < 1e-8);
}

TEST_CASE("default horizon covers the decay") {
    RecurrenceSolution sol = analyze(ModelParams{parse_pattern("111111"), 0.9});
    int T = default_horizon(sol);
    CHECK(T >= 50);
    CHECK(T >= 4.0 / (1.0 - sol.max_abs_d()) - 4.0);
}

TEST_CASE("recursion matches the finite-horizon optimum") {
    struct Case {
        const char* text;
        double rho;
        int T;
    };
    for (Case c : {Case{"111111", 0.9, 50}, Case{"1101101", 0.5, 50},
                   Case{"1111000000001111", 0.9, 60}}) {
        RecurrenceSolution sol = analyze(ModelParams{parse_pattern(c.text), c.rho});
        ComparisonReport report = compare_oracle_vs_recursion(sol, c.T);
        CHECK(report.pass);
        CHECK(report.max_weight_gap <= 1e-6);
        CHECK(report.variance_gap <= 1e-8);
    }
}
